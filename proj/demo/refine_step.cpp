// Refines a unit step with the linear shifted four-point scheme and with the
// PPH-limited scheme and prints the extreme values of each.

#include <algorithm>
#include <cstdio>

#include "ppha/ppha.hpp"

int main() {
  const auto step = [](double x) { return x < 0.0 ? 0.0 : 1.0; };
  const ppha::SampledCurve data = ppha::sample_function(step, -1.0, 1.0, 1.0 / 16.0);

  for (auto scheme : {ppha::SchemeKind::LinearShifted4pt, ppha::SchemeKind::PPHA}) {
    const auto refined =
        ppha::refine_to_level(data, scheme, ppha::BoundaryPolicy::Shrink, 6);
    const auto [lo, hi] = std::ranges::minmax(refined.values());
    std::printf("%-8s %zu values in [%.6f, %.6f]\n", std::string(ppha::to_string(scheme)).c_str(),
                refined.size(), lo, hi);
  }
}
