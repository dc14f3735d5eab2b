#pragma once

// One-step refinement rules and multi-level driving.
//
// Every rule maps parent n to the two children 2n and 2n+1. The four-point
// rules read f[n-1..n+2]; Chaikin reads f[n..n+1].

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppha/error.hpp"
#include "ppha/grid.hpp"
#include "ppha/pph.hpp"

namespace ppha {

enum class SchemeKind { LinearShifted4pt, Chaikin, PPHA, PPHAArithmetic };

inline constexpr std::array<SchemeKind, 4> kAllSchemes = {
    SchemeKind::LinearShifted4pt, SchemeKind::Chaikin, SchemeKind::PPHA,
    SchemeKind::PPHAArithmetic};

[[nodiscard]] constexpr std::string_view to_string(SchemeKind s) noexcept {
  switch (s) {
    case SchemeKind::LinearShifted4pt: return "linear4";
    case SchemeKind::Chaikin: return "chaikin";
    case SchemeKind::PPHA: return "ppha";
    case SchemeKind::PPHAArithmetic: return "ppha-arith";
  }
  return "?";
}

[[nodiscard]] inline std::optional<SchemeKind> parse_scheme(std::string_view s) {
  for (auto k : kAllSchemes) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

/// Parent indices a stencil reads to the left and right of parent n.
struct StencilReach {
  std::size_t left;
  std::size_t right;
};

[[nodiscard]] constexpr StencilReach stencil_reach(SchemeKind s) noexcept {
  return s == SchemeKind::Chaikin ? StencilReach{0, 1} : StencilReach{1, 2};
}

enum class StencilCase { FirstForm, SecondForm };

/// FirstForm iff |d2_n| >= |d2_{n+1}|; ties go to FirstForm.
[[nodiscard]] inline StencilCase select_case(double d2_n, double d2_n1) noexcept {
  return std::abs(d2_n) >= std::abs(d2_n1) ? StencilCase::FirstForm : StencilCase::SecondForm;
}

namespace detail {

inline void require_length(std::span<const double> f, std::size_t min, const char* who) {
  if (f.size() < min) {
    throw LengthError(std::string(who) + ": need at least " + std::to_string(min) +
                      " values, got " + std::to_string(f.size()));
  }
}

}  // namespace detail

/// Cubic interpolation evaluated at the quarter points (128ths stencil).
/// Length N input gives 2(N-3) children for parents 1..N-3.
[[nodiscard]] inline std::vector<double> refine_linear_shifted(std::span<const double> f) {
  detail::require_length(f, 4, "refine_linear_shifted");
  std::vector<double> out;
  out.reserve(2 * (f.size() - 3));
  for (std::size_t n = 1; n + 2 < f.size(); ++n) {
    const double a = f[n - 1], b = f[n], c = f[n + 1], d = f[n + 2];
    out.push_back((-7.0 * a + 105.0 * b + 35.0 * c - 5.0 * d) / 128.0);
    out.push_back((-5.0 * a + 35.0 * b + 105.0 * c - 7.0 * d) / 128.0);
  }
  return out;
}

/// Corner cutting. Length N input gives 2(N-1) children for parents 0..N-2.
[[nodiscard]] inline std::vector<double> refine_chaikin(std::span<const double> f) {
  detail::require_length(f, 2, "refine_chaikin");
  std::vector<double> out;
  out.reserve(2 * (f.size() - 1));
  for (std::size_t n = 0; n + 1 < f.size(); ++n) {
    out.push_back((3.0 * f[n] + f[n + 1]) / 4.0);
    out.push_back((f[n] + 3.0 * f[n + 1]) / 4.0);
  }
  return out;
}

/// The mean-based four-point rule with a pluggable mean of the two second
/// differences d2_n, d2_{n+1}. With the arithmetic mean both forms reduce to
/// refine_linear_shifted; with pph this is the nonlinear scheme.
template <typename Mean>
[[nodiscard]] std::vector<double> refine_mean_based(std::span<const double> f, Mean&& mean) {
  detail::require_length(f, 4, "refine_ppha");
  std::vector<double> out;
  out.reserve(2 * (f.size() - 3));
  for (std::size_t n = 1; n + 2 < f.size(); ++n) {
    const double fm = f[n - 1], f0 = f[n], f1 = f[n + 1], f2 = f[n + 2];
    const double d0 = f1 - 2.0 * f0 + fm;
    const double d1 = f2 - 2.0 * f1 + f0;
    const double m = mean(d0, d1);
    if (select_case(d0, d1) == StencilCase::FirstForm) {
      out.push_back((49.0 * f0 + 14.0 * f1 + f2 - 7.0 * m) / 64.0);
      out.push_back((15.0 * f0 + 50.0 * f1 - f2 - 5.0 * m) / 64.0);
    } else {
      out.push_back((-fm + 50.0 * f0 + 15.0 * f1 - 5.0 * m) / 64.0);
      out.push_back((fm + 14.0 * f0 + 49.0 * f1 - 7.0 * m) / 64.0);
    }
  }
  return out;
}

[[nodiscard]] inline std::vector<double> refine_ppha(std::span<const double> f) {
  return refine_mean_based(f, [](double x, double y) { return pph(x, y); });
}

[[nodiscard]] inline std::vector<double> refine_ppha_arithmetic(std::span<const double> f) {
  return refine_mean_based(f, [](double x, double y) { return arithmetic_mean(x, y); });
}

/// Nonlinear part F of the nonlinear scheme written as Chaikin plus F(d2 f).
/// Input is the second-difference sequence; each consecutive pair
/// (d2_n, d2_{n+1}) yields the two entries F_{2n}, F_{2n+1}.
[[nodiscard]] inline std::vector<double> ppha_perturbation(std::span<const double> d2) {
  detail::require_length(d2, 2, "ppha_perturbation");
  std::vector<double> out;
  out.reserve(2 * (d2.size() - 1));
  for (std::size_t k = 0; k + 1 < d2.size(); ++k) {
    const double a = d2[k], b = d2[k + 1];
    const double p = pph(a, b);
    if (select_case(a, b) == StencilCase::FirstForm) {
      out.push_back((b - 7.0 * p) / 64.0);
      out.push_back((-b - 5.0 * p) / 64.0);
    } else {
      out.push_back((-a - 5.0 * p) / 64.0);
      out.push_back((a - 7.0 * p) / 64.0);
    }
  }
  return out;
}

/// Raw one-step dispatch on a bare sequence (no boundary handling).
[[nodiscard]] inline std::vector<double> refine_values(SchemeKind scheme,
                                                       std::span<const double> f) {
  switch (scheme) {
    case SchemeKind::LinearShifted4pt: return refine_linear_shifted(f);
    case SchemeKind::Chaikin: return refine_chaikin(f);
    case SchemeKind::PPHA: return refine_ppha(f);
    case SchemeKind::PPHAArithmetic: return refine_ppha_arithmetic(f);
  }
  throw InvariantError("refine_values: unknown scheme");
}

/// One refinement step with level and origin bookkeeping.
[[nodiscard]] inline SampledCurve refine(const SampledCurve& curve, SchemeKind scheme,
                                         BoundaryPolicy policy = BoundaryPolicy::Shrink) {
  const auto reach = stencil_reach(scheme);
  const SampledCurve src = extend(curve, policy, reach.left, reach.right);
  auto values = refine_values(scheme, src.values());
  const std::int64_t first_parent = src.origin() + static_cast<std::int64_t>(reach.left);
  return SampledCurve(std::move(values), src.level() + 1, src.base_spacing(), 2 * first_parent);
}

[[nodiscard]] inline SampledCurve refine_to_level(const SampledCurve& curve, SchemeKind scheme,
                                                  BoundaryPolicy policy, int levels) {
  if (levels < 0) throw ConfigError("refine_to_level: levels must be nonnegative");
  SampledCurve cur = curve;
  for (int j = 0; j < levels; ++j) {
    try {
      cur = refine(cur, scheme, policy);
    } catch (const LengthError& e) {
      throw LengthError("curve exhausted after " + std::to_string(j) + " of " +
                        std::to_string(levels) + " levels (" + e.what() + ")");
    }
  }
  return cur;
}

}  // namespace ppha
