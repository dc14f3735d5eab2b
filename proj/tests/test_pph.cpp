#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ppha/pph.hpp"

namespace {

TEST(Pph, Examples) {
  EXPECT_DOUBLE_EQ(ppha::pph(1.0, 1.0), 1.0);
  EXPECT_EQ(ppha::pph(1.0, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(ppha::pph(2.0, 1.0), 4.0 / 3.0);
  EXPECT_EQ(ppha::pph(0.0, 5.0), 0.0);
  EXPECT_EQ(ppha::pph(0.0, 0.0), 0.0);
  EXPECT_EQ(ppha::pph(-0.0, -3.0), 0.0);
}

TEST(Pph, ExtremeMagnitudesStayFinite) {
  EXPECT_DOUBLE_EQ(ppha::pph(1e300, 1e300), 1e300);
  EXPECT_DOUBLE_EQ(ppha::pph(1e-300, 1e-300), 1e-300);
  EXPECT_GT(ppha::pph(1e-200, 3e-200), 0.0);
}

TEST(Pph, PropertiesOnRandomPairs) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = u(rng), y = u(rng);
    const double p = ppha::pph(x, y);
    EXPECT_EQ(p, ppha::pph(y, x));
    EXPECT_EQ(-p, ppha::pph(-x, -y));
    if (x * y <= 0) {
      EXPECT_EQ(p, 0.0);
    }
    if (x + y != 0.0) {
      EXPECT_NEAR(p, oracle::pph_closed_form(x, y), 1e-12 * std::max(1.0, std::abs(p)));
    }
    EXPECT_LE(std::abs(p), std::max(std::abs(x), std::abs(y)) * (1 + 1e-15));
    EXPECT_LE(std::abs(p), 2.0 * std::min(std::abs(x), std::abs(y)) * (1 + 1e-15));
    if (x > 0 && y > 0) {
      EXPECT_GE(p, std::min(x, y) * (1 - 1e-15));
      EXPECT_LE(p, 0.5 * (x + y) * (1 + 1e-15));
    }
    const double x2 = u(rng), y2 = u(rng);
    EXPECT_LE(std::abs(p - ppha::pph(x2, y2)),
              2.0 * std::max(std::abs(x - x2), std::abs(y - y2)) + 1e-12);
  }
}

TEST(Pph, SecondOrderAgreementWithArithmeticMean) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<double, double>> ab(2000);
  for (auto& [a, b] : ab) a = u(rng), b = u(rng);
  double prev = 0.0;
  for (double h = 0.1; h > 1e-3; h /= 2) {
    double worst = 0.0;
    for (auto [a, b] : ab) {
      const double x = 1 + a * h, y = 1 + b * h;
      worst = std::max(worst, std::abs(0.5 * (x + y) - ppha::pph(x, y)));
    }
    EXPECT_LE(worst / (h * h), 1.0);
    if (prev > 0) {
      EXPECT_NEAR(std::log2(prev / worst), 2.0, 0.1);
    }
    prev = worst;
  }
}

TEST(Differences, Examples) {
  using V = std::vector<double>;
  EXPECT_EQ(ppha::second_difference(V{1, 1, 1, 1}), (V{0, 0}));
  EXPECT_EQ(ppha::second_difference(V{0, 1, 4, 9}), (V{2, 2}));
  EXPECT_EQ(ppha::second_difference(V{0, 0, 1, 1}), (V{1, -1}));
  EXPECT_EQ(ppha::first_difference(V{3, 3, 3}), (V{0, 0}));
  EXPECT_EQ(ppha::first_difference(V{0, 1, 3}), (V{1, 2}));
  EXPECT_EQ(ppha::first_difference(V{0, 1, 4, 9}), (V{1, 3, 5}));
}

TEST(Differences, LengthErrors) {
  using V = std::vector<double>;
  EXPECT_THROW((void)ppha::second_difference(V{1, 2}), ppha::LengthError);
  EXPECT_THROW((void)ppha::first_difference(V{1}), ppha::LengthError);
}

TEST(Differences, CommuteWithShift) {
  std::mt19937_64 rng(9);
  const auto f = oracle::random_sequence(rng, 20);
  const auto d = ppha::second_difference(f);
  const std::vector<double> shifted(f.begin() + 3, f.end());
  const auto ds = ppha::second_difference(shifted);
  ASSERT_EQ(ds.size(), d.size() - 3);
  for (std::size_t k = 0; k < ds.size(); ++k) EXPECT_EQ(ds[k], d[k + 3]);
}

}  // namespace
