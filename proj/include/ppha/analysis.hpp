#pragma once

// Measurement harnesses: Hölder regularity estimates, second-difference
// contraction, approximation order, Gibbs metrics and stability probes.
// All norms are sup norms over the entries that survive Shrink refinement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ppha/error.hpp"
#include "ppha/grid.hpp"
#include "ppha/pph.hpp"
#include "ppha/schemes.hpp"

namespace ppha {

using RealFunction = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Regularity

struct RegularityReport {
  SchemeKind scheme = SchemeKind::PPHA;
  std::string initial_data;
  std::size_t window = 0;  // level-0 sample count
  int jmin = 0;
  int jmax = 0;
  std::vector<int> orders;                            // subset of {1, 2}
  std::vector<int> levels;                            // jmin..jmax
  std::vector<std::optional<double>> beta1, beta2;    // per level, absent if undefined
};

/// -log2(2^k * |D^{k+1} fine| / |D^{k+1} coarse|) for consecutive levels.
/// Returns nullopt when either norm vanishes.
[[nodiscard]] inline std::optional<double> regularity_ratio(std::span<const double> coarse,
                                                            std::span<const double> fine,
                                                            int k) {
  if (k != 1 && k != 2) throw ConfigError("regularity order k must be 1 or 2");
  const double den = sup_norm(nth_difference(coarse, k + 1));
  const double num = sup_norm(nth_difference(fine, k + 1));
  if (den == 0.0 || num == 0.0) return std::nullopt;
  return -std::log2(std::ldexp(num / den, k));
}

/// Estimate of beta_k at level j from S^j f0 and S^{j+1} f0 under Shrink.
[[nodiscard]] inline std::optional<double> estimate_regularity(const SampledCurve& f0,
                                                               SchemeKind scheme, int k, int j) {
  const SampledCurve coarse = refine_to_level(f0, scheme, BoundaryPolicy::Shrink, j);
  const SampledCurve fine = refine(coarse, scheme, BoundaryPolicy::Shrink);
  return regularity_ratio(coarse.values(), fine.values(), k);
}

/// Table-style report for levels jmin..jmax, refining f0 once up to jmax+1.
[[nodiscard]] inline RegularityReport regularity_report(const SampledCurve& f0, SchemeKind scheme,
                                                        int jmin, int jmax,
                                                        std::vector<int> orders = {1, 2},
                                                        std::string initial_data = "custom") {
  if (jmin < 0 || jmax < jmin) throw ConfigError("regularity: need 0 <= jmin <= jmax");
  for (int k : orders) {
    if (k != 1 && k != 2) throw ConfigError("regularity order k must be 1 or 2");
  }
  RegularityReport rep;
  rep.scheme = scheme;
  rep.initial_data = std::move(initial_data);
  rep.window = f0.size();
  rep.jmin = jmin;
  rep.jmax = jmax;
  rep.orders = std::move(orders);

  SampledCurve cur = refine_to_level(f0, scheme, BoundaryPolicy::Shrink, jmin);
  for (int j = jmin; j <= jmax; ++j) {
    SampledCurve next = refine_to_level(cur, scheme, BoundaryPolicy::Shrink, 1);
    rep.levels.push_back(j);
    const bool want1 = std::ranges::find(rep.orders, 1) != rep.orders.end();
    const bool want2 = std::ranges::find(rep.orders, 2) != rep.orders.end();
    rep.beta1.push_back(want1 ? regularity_ratio(cur.values(), next.values(), 1) : std::nullopt);
    rep.beta2.push_back(want2 ? regularity_ratio(cur.values(), next.values(), 2) : std::nullopt);
    cur = std::move(next);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Contraction

/// |d2(S f)| / |d2 f| for one Shrink step; nullopt when |d2 f| = 0.
[[nodiscard]] inline std::optional<double> measure_contraction(std::span<const double> f,
                                                               SchemeKind scheme) {
  if (f.size() < 5) {
    throw LengthError("measure_contraction: need at least 5 values, got " +
                      std::to_string(f.size()));
  }
  const double den = sup_norm(second_difference(f));
  if (den == 0.0) return std::nullopt;
  const auto refined = refine_values(scheme, f);
  return sup_norm(second_difference(refined)) / den;
}

// ---------------------------------------------------------------------------
// Approximation order

struct OrderReport {
  SchemeKind scheme = SchemeKind::PPHA;
  std::string function;
  double domain_lo = 0.0, domain_hi = 1.0;
  std::vector<double> spacings;
  std::vector<double> errors;
  std::vector<double> orders;  // log2(E(h_i) / E(h_{i+1})); empty with < 2 spacings
};

/// Sup error of a single Shrink refinement step of g sampled with spacing h,
/// measured against g at the child abscissae.
[[nodiscard]] inline double one_step_error(const RealFunction& g, double lo, double hi, double h,
                                           SchemeKind scheme) {
  const SampledCurve f = sample_function(g, lo, hi, h);
  const SampledCurve s = refine(f, scheme, BoundaryPolicy::Shrink);
  double err = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    err = std::max(err, std::abs(s.values()[k] - g(s.abscissa(k))));
  }
  return err;
}

[[nodiscard]] inline OrderReport approximation_order(const RealFunction& g, double lo, double hi,
                                                     SchemeKind scheme,
                                                     std::vector<double> spacings,
                                                     std::string name = "custom") {
  OrderReport rep;
  rep.scheme = scheme;
  rep.function = std::move(name);
  rep.domain_lo = lo;
  rep.domain_hi = hi;
  rep.spacings = std::move(spacings);
  for (double h : rep.spacings) rep.errors.push_back(one_step_error(g, lo, hi, h, scheme));
  for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i) {
    rep.orders.push_back(std::log2(rep.errors[i] / rep.errors[i + 1]));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Gibbs metrics

struct GibbsReport {
  SchemeKind scheme = SchemeKind::PPHA;
  int levels = 0;
  double h = 0.0;
  bool jump_detected = false;
  double jump_location = 0.0;  // meaningful only if jump_detected
  double data_min = 0.0, data_max = 0.0;
  double overshoot = 0.0;
  double far_error = 0.0;
  double far_radius = 0.0;                 // 9h/2
  double near_lo = 0.0, near_hi = 0.0;     // excluded band around the jump
};

struct JumpLocation {
  std::size_t left_index;  // the jump lies between entries left_index and left_index+1
  double xi;
};

/// Locates the dominant jump: the largest |first difference| that exceeds
/// four times each neighbouring difference. Smooth data has neighbouring
/// differences of comparable size and yields nullopt.
[[nodiscard]] inline std::optional<JumpLocation> detect_jump(const SampledCurve& data) {
  if (data.size() < 2) return std::nullopt;
  const auto d = first_difference(data.values());
  std::size_t k = 0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (std::abs(d[i]) > std::abs(d[k])) k = i;
  }
  const double jump = std::abs(d[k]);
  if (jump == 0.0) return std::nullopt;
  if (k > 0 && jump <= 4.0 * std::abs(d[k - 1])) return std::nullopt;
  if (k + 1 < d.size() && jump <= 4.0 * std::abs(d[k + 1])) return std::nullopt;
  return JumpLocation{k, 0.5 * (data.abscissa(k) + data.abscissa(k + 1))};
}

/// Refines sampled piecewise-smooth data and measures overshoot beyond the
/// data range plus the sup error against `f` at distance >= 9h/2 from the
/// detected jump. Without a detected jump the whole curve is far field.
[[nodiscard]] inline GibbsReport gibbs_report(const SampledCurve& data, const RealFunction& f,
                                              SchemeKind scheme, int levels) {
  GibbsReport rep;
  rep.scheme = scheme;
  rep.levels = levels;
  rep.h = data.spacing();
  rep.far_radius = 4.5 * rep.h;
  const auto [mn, mx] = std::ranges::minmax(data.values());
  rep.data_min = mn;
  rep.data_max = mx;

  const auto jump = detect_jump(data);
  rep.jump_detected = jump.has_value();
  if (jump) {
    rep.jump_location = jump->xi;
    rep.near_lo = jump->xi - rep.far_radius;
    rep.near_hi = jump->xi + rep.far_radius;
  }

  const SampledCurve s = refine_to_level(data, scheme, BoundaryPolicy::Shrink, levels);
  const auto [smn, smx] = std::ranges::minmax(s.values());
  rep.overshoot = std::max({0.0, smx - mx, mn - smn});
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double x = s.abscissa(k);
    if (jump && std::abs(x - jump->xi) < rep.far_radius) continue;
    rep.far_error = std::max(rep.far_error, std::abs(s.values()[k] - f(x)));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Stability

struct StabilityReport {
  SchemeKind scheme = SchemeKind::PPHA;
  double eps = 0.0;
  int levels = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string generator = "mt19937_64";
  std::vector<double> ratios;         // ratios[j-1] = max over trials at level j
  double c_emp = 0.0;                 // max over trials and levels
  std::uint64_t branch_mismatches = 0;  // stencil positions where f and g chose different forms
};

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t count_branch_mismatches(std::span<const double> f,
                                             std::span<const double> g) {
  if (f.size() < 4) return 0;
  const auto df = second_difference(f);
  const auto dg = second_difference(g);
  std::uint64_t count = 0;
  for (std::size_t k = 0; k + 1 < df.size(); ++k) {
    if (select_case(df[k], df[k + 1]) != select_case(dg[k], dg[k + 1])) ++count;
  }
  return count;
}

}  // namespace detail

/// Seeded uniform noise in [-eps, eps] added to every entry.
[[nodiscard]] inline std::vector<double> perturb(std::span<const double> f, double eps,
                                                 std::mt19937_64& rng) {
  std::vector<double> g(f.begin(), f.end());
  for (double& v : g) v += eps * (2.0 * detail::unit_uniform(rng) - 1.0);
  return g;
}

/// Amplification |S^j f - S^j g| / |f - g| for g = f + noise, j = 1..levels.
/// A zero numerator counts as ratio 0 (so eps = 0 gives C_emp = 0).
[[nodiscard]] inline StabilityReport stability_probe(std::span<const double> f, double eps,
                                                     SchemeKind scheme, int levels, int trials,
                                                     std::uint64_t seed) {
  if (!(eps >= 0.0)) throw ConfigError("stability: eps must be >= 0");
  if (trials < 1) throw ConfigError("stability: trials must be >= 1");
  if (levels < 1) throw ConfigError("stability: levels must be >= 1");
  StabilityReport rep;
  rep.scheme = scheme;
  rep.eps = eps;
  rep.levels = levels;
  rep.trials = trials;
  rep.seed = seed;
  rep.ratios.assign(static_cast<std::size_t>(levels), 0.0);

  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> a(f.begin(), f.end());
    std::vector<double> b = perturb(f, eps, rng);
    double diff0 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff0 = std::max(diff0, std::abs(a[i] - b[i]));
    for (int j = 1; j <= levels; ++j) {
      if (scheme == SchemeKind::PPHA || scheme == SchemeKind::PPHAArithmetic) {
        rep.branch_mismatches += detail::count_branch_mismatches(a, b);
      }
      try {
        a = refine_values(scheme, a);
        b = refine_values(scheme, b);
      } catch (const LengthError& e) {
        throw LengthError("stability: curve exhausted at level " + std::to_string(j) + " (" +
                          e.what() + ")");
      }
      double num = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) num = std::max(num, std::abs(a[i] - b[i]));
      const double r = num == 0.0 ? 0.0 : num / diff0;
      auto& slot = rep.ratios[static_cast<std::size_t>(j - 1)];
      slot = std::max(slot, r);
    }
  }
  rep.c_emp = *std::ranges::max_element(rep.ratios);
  return rep;
}

// ---------------------------------------------------------------------------
// Polynomial reproduction

struct ReproductionResult {
  bool reproduced = false;
  double max_deviation = 0.0;
};

/// Samples P(n) = c0 + c1 n + c2 n^2 at integers first..first+count-1,
/// refines `levels` times with PPHA and with the linear shifted scheme and
/// compares. Passes iff deviation <= 1e-12 * (1 + |P samples|).
[[nodiscard]] inline ReproductionResult check_polynomial_reproduction(
    std::array<double, 3> coeffs, std::int64_t first, std::size_t count, int levels = 1) {
  if (count < 4) throw LengthError("polynomial reproduction: window needs at least 4 samples");
  std::vector<double> p(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double n = static_cast<double>(first + static_cast<std::int64_t>(i));
    p[i] = coeffs[0] + coeffs[1] * n + coeffs[2] * n * n;
  }
  const SampledCurve c(p, 0, 1.0, first);
  const auto a = refine_to_level(c, SchemeKind::PPHA, BoundaryPolicy::Shrink, levels);
  const auto b = refine_to_level(c, SchemeKind::LinearShifted4pt, BoundaryPolicy::Shrink, levels);
  ReproductionResult res;
  for (std::size_t k = 0; k < a.size(); ++k) {
    res.max_deviation = std::max(res.max_deviation, std::abs(a.values()[k] - b.values()[k]));
  }
  res.reproduced = res.max_deviation <= 1e-12 * (1.0 + sup_norm(p));
  return res;
}

}  // namespace ppha
