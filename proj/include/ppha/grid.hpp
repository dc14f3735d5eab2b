#pragma once

// Finite sampled sequences on dyadic grids and boundary extension.
//
// Entry k of a curve stored at refinement level j with base spacing h and
// integer origin n0 sits at
//
//     x_k = (n0 + k - 1/2) * h * 2^-j.
//
// With this convention the two children 2n and 2n+1 of parent n land at the
// quarter and three-quarter points of the parent interval [x_n, x_{n+1}],
// so every level is aligned with the same physical axis.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppha/error.hpp"

namespace ppha {

enum class BoundaryPolicy { Shrink, Constant, LinearExtrapolate, Periodic };

[[nodiscard]] constexpr std::string_view to_string(BoundaryPolicy p) noexcept {
  switch (p) {
    case BoundaryPolicy::Shrink: return "shrink";
    case BoundaryPolicy::Constant: return "constant";
    case BoundaryPolicy::LinearExtrapolate: return "linext";
    case BoundaryPolicy::Periodic: return "periodic";
  }
  return "?";
}

[[nodiscard]] inline std::optional<BoundaryPolicy> parse_boundary_policy(std::string_view s) {
  for (auto p : {BoundaryPolicy::Shrink, BoundaryPolicy::Constant,
                 BoundaryPolicy::LinearExtrapolate, BoundaryPolicy::Periodic}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

class SampledCurve {
 public:
  SampledCurve(std::vector<double> values, int level = 0, double base_spacing = 1.0,
               std::int64_t origin = 0)
      : values_(std::move(values)), level_(level), base_spacing_(base_spacing), origin_(origin) {
    if (values_.empty()) throw LengthError("SampledCurve: values must be nonempty");
    if (!(base_spacing_ > 0.0) || !std::isfinite(base_spacing_)) {
      throw ConfigError("SampledCurve: base spacing must be positive and finite");
    }
    if (level_ < 0) throw ConfigError("SampledCurve: level must be nonnegative");
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] int level() const noexcept { return level_; }
  [[nodiscard]] double base_spacing() const noexcept { return base_spacing_; }
  [[nodiscard]] std::int64_t origin() const noexcept { return origin_; }

  /// Spacing between consecutive entries at the current level.
  [[nodiscard]] double spacing() const noexcept { return std::ldexp(base_spacing_, -level_); }

  /// Abscissa of the entry with absolute index n at the current level.
  [[nodiscard]] double abscissa_of_index(std::int64_t n) const noexcept {
    return (static_cast<double>(n) - 0.5) * spacing();
  }

  [[nodiscard]] double abscissa(std::size_t k) const noexcept {
    return abscissa_of_index(origin_ + static_cast<std::int64_t>(k));
  }

  friend bool operator==(const SampledCurve&, const SampledCurve&) = default;

 private:
  std::vector<double> values_;
  int level_;
  double base_spacing_;
  std::int64_t origin_;
};

/// Abscissae of every stored entry; strictly increasing with uniform gap.
[[nodiscard]] inline std::vector<double> abscissae(const SampledCurve& curve) {
  std::vector<double> x(curve.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = curve.abscissa(k);
  return x;
}

/// Pads the curve with `left` and `right` synthetic entries. The origin moves
/// left by `left`, so the original entries keep their abscissae exactly.
/// Shrink never invents data and returns the curve unchanged.
[[nodiscard]] inline SampledCurve extend(const SampledCurve& curve, BoundaryPolicy policy,
                                         std::size_t left, std::size_t right) {
  if (policy == BoundaryPolicy::Shrink || (left == 0 && right == 0)) return curve;

  const auto f = curve.values();
  const std::size_t n = f.size();
  if (policy == BoundaryPolicy::Periodic && n < 2) {
    throw PolicyError("periodic boundary needs at least 2 values, got " + std::to_string(n));
  }

  std::vector<double> out;
  out.reserve(n + left + right);
  const auto ext = [&](std::int64_t k) -> double {  // k relative to f[0]
    const auto last = static_cast<std::int64_t>(n) - 1;
    switch (policy) {
      case BoundaryPolicy::Constant:
        return k < 0 ? f.front() : f.back();
      case BoundaryPolicy::LinearExtrapolate: {
        if (n == 1) return f.front();
        if (k < 0) return f.front() + static_cast<double>(k) * (f[1] - f[0]);
        return f.back() + static_cast<double>(k - last) * (f[n - 1] - f[n - 2]);
      }
      case BoundaryPolicy::Periodic: {
        const auto m = static_cast<std::int64_t>(n);
        return f[static_cast<std::size_t>(((k % m) + m) % m)];
      }
      case BoundaryPolicy::Shrink: break;
    }
    throw InvariantError("extend: unreachable policy");
  };
  for (std::size_t i = left; i > 0; --i) out.push_back(ext(-static_cast<std::int64_t>(i)));
  out.insert(out.end(), f.begin(), f.end());
  for (std::size_t i = 0; i < right; ++i) {
    out.push_back(ext(static_cast<std::int64_t>(n + i)));
  }
  return SampledCurve(std::move(out), curve.level(), curve.base_spacing(),
                      curve.origin() - static_cast<std::int64_t>(left));
}

/// Samples g on the level-0 grid x_n = (n - 1/2) h for every n whose abscissa
/// lies in [a, b] (inclusive up to a relative 1e-9 slack).
template <typename Fn>
[[nodiscard]] SampledCurve sample_function(Fn&& g, double a, double b, double h) {
  if (!(h > 0.0) || !(b >= a)) throw ConfigError("sample_function: need h > 0 and a <= b");
  const double slack = 1e-9;
  const auto first = static_cast<std::int64_t>(std::ceil(a / h + 0.5 - slack));
  const auto last = static_cast<std::int64_t>(std::floor(b / h + 0.5 + slack));
  if (last < first) throw LengthError("sample_function: interval holds no grid point");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(last - first + 1));
  for (auto n = first; n <= last; ++n) v.push_back(g((static_cast<double>(n) - 0.5) * h));
  return SampledCurve(std::move(v), 0, h, first);
}

}  // namespace ppha
