#pragma once

// Harmonic-mean limiter and undivided difference operators.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ppha/error.hpp"

namespace ppha {

/// Harmonic mean gated by sign agreement:
///
///     pph(x, y) = xy / (x + y) * (sgn(xy) + 1),   sgn(0) = +1
///
/// which is 2xy/(x+y) when x and y share a strict sign and 0 whenever
/// xy <= 0 (including x = y = 0). The same-sign branch is evaluated on the
/// ordered magnitudes a <= b as 2a * (b / (a+b)): no intermediate overflow
/// or underflow, and the result is bitwise symmetric and odd.
[[nodiscard]] inline double pph(double x, double y) noexcept {
  const bool same_sign = (x > 0.0 && y > 0.0) || (x < 0.0 && y < 0.0);
  if (!same_sign) return 0.0;
  const double a = std::min(std::abs(x), std::abs(y));
  const double b = std::max(std::abs(x), std::abs(y));
  const double r = 2.0 * a * (b / (a + b));
  return x > 0.0 ? r : -r;
}

/// Arithmetic mean, the linear counterpart of pph.
[[nodiscard]] constexpr double arithmetic_mean(double x, double y) noexcept {
  return 0.5 * (x + y);
}

/// Entry k is f[k+1] - f[k]. Output origin is the input origin.
[[nodiscard]] inline std::vector<double> first_difference(std::span<const double> f) {
  if (f.size() < 2) {
    throw LengthError("first_difference: need at least 2 values, got " +
                      std::to_string(f.size()));
  }
  std::vector<double> out(f.size() - 1);
  for (std::size_t k = 0; k + 1 < f.size(); ++k) out[k] = f[k + 1] - f[k];
  return out;
}

/// Entry k is f[k+2] - 2 f[k+1] + f[k], i.e. d2 centred on input index k+1.
/// The output origin is shifted by +1 relative to the input.
[[nodiscard]] inline std::vector<double> second_difference(std::span<const double> f) {
  if (f.size() < 3) {
    throw LengthError("second_difference: need at least 3 values, got " +
                      std::to_string(f.size()));
  }
  std::vector<double> out(f.size() - 2);
  for (std::size_t k = 0; k + 2 < f.size(); ++k) {
    out[k] = f[k + 2] - 2.0 * f[k + 1] + f[k];
  }
  return out;
}

/// Undivided difference of the given order (order 0 returns a copy).
[[nodiscard]] inline std::vector<double> nth_difference(std::span<const double> f,
                                                        int order) {
  std::vector<double> out(f.begin(), f.end());
  for (int i = 0; i < order; ++i) out = first_difference(out);
  return out;
}

/// Sup norm; 0 for an empty sequence.
[[nodiscard]] inline double sup_norm(std::span<const double> f) noexcept {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace ppha
