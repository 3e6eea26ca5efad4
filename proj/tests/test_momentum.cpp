#include <cmath>
#include <vector>

#include "doctest.h"
#include "nagalpha/momentum.hpp"

using namespace nagalpha;

TEST_CASE("momentum coefficient frozen values") {
  // alpha = 1 reduces to the classical (k-1)/(k+r)
  CHECK(momentum_coeff({1.0, 3.0}, 4) == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
  // zero numerator at k = 1 for every alpha
  for (double alpha : {0.5, 1.0, 1.7, 2.0, 3.0}) {
    CHECK(momentum_coeff({alpha, 2 * alpha + 1}, 1) == 0.0);
  }
  // direct evaluation: 2^2 / (3^2 + 5*3) = 4/24
  CHECK(momentum_coeff({2.0, 5.0}, 3) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("monotone z coefficient frozen values") {
  // (0 + 3*0^0)/(1 + 3) with 0^0 := 1, matching the classical coefficient
  CHECK(monotone_z_coeff({1.0, 3.0}, 1) == doctest::Approx(0.75).epsilon(1e-15));
  // both numerator powers vanish for alpha > 1
  CHECK(monotone_z_coeff({2.0, 5.0}, 1) == 0.0);
  // (4 + 3)/(5 + 3)
  CHECK(monotone_z_coeff({1.0, 3.0}, 5) == doctest::Approx(7.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("bookkeeping quantities frozen values") {
  CHECK(power_diff(7, 1.0) == 0.0);
  CHECK(power_diff(5, 2.0) == 1.0);
  CHECK(power_diff(4, 3.0) == 7.0);  // 16 - 9

  CHECK(power_sum(7, 1.0) == 2.0);
  CHECK(power_sum(5, 2.0) == 9.0);
  CHECK(power_sum(4, 3.0) == 25.0);

  CHECK(momentum_denominator(4, 1.0, 3.0) == 7.0);
  CHECK(momentum_denominator(3, 2.0, 5.0) == 24.0);
  CHECK(momentum_denominator(1, 2.0, 5.0) == 6.0);

  CHECK(potential_coeff(4, 1.0, 3.0) == 28.0);
  CHECK(potential_coeff(1, 2.0, 5.0) == 6.0);
  for (long k : {1L, 2L, 10L, 1000L}) {
    CHECK(potential_coeff(k, 1.0, 0.0) == double(k) * double(k));
  }
}

TEST_CASE("power conventions") {
  CHECK(power(0.0, 0.0) == 1.0);
  CHECK(power(0.0, 0.5) == 0.0);
  CHECK(power(0.0, 2.0) == 0.0);
  CHECK_THROWS_AS(power(0.0, -0.5), SingularCoefficientError);
  CHECK(power(2.0, 10.0) == 1024.0);
  CHECK(power(3.0, -2.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(power(10.0, 0.5) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
  // 0^0 convention makes alpha = 1 regular at k = 1
  CHECK(power_diff(1, 1.0) == 0.0);
  CHECK(power_sum(1, 1.0) == 2.0);
}

TEST_CASE("classical reduction across k") {
  for (double r : {2.0, 3.0, 5.5}) {
    MomentumParams p{1.0, r};
    for (long k = 1; k <= 10000; ++k) {
      const double classical = double(k - 1) / (double(k) + r);
      const double c = momentum_coeff(p, k);
      if (c != classical) {
        CHECK(std::abs(c - classical) <= 1e-15 * classical);
      }
    }
  }
}

TEST_CASE("coefficient range and monotonicity on the standard grid") {
  for (double alpha : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    MomentumParams p{alpha, 2 * alpha + 1};
    double prev = momentum_coeff(p, 2);
    for (long k = 2; k <= 5000; ++k) {
      const double c = momentum_coeff(p, k);
      CHECK(c >= 0.0);
      CHECK(c < 1.0);
      CHECK(c >= prev - 1e-16);
      prev = c;
    }
  }
}

TEST_CASE("monotone coefficient identity") {
  // monotone_z_coeff(k) - coeff(k) = r (k-1)^(alpha-1) / B(k, alpha, r)
  for (double alpha : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    MomentumParams p{alpha, 2 * alpha + 1};
    for (long k = 2; k <= 2000; k += 13) {
      const double lhs = monotone_z_coeff(p, k) - momentum_coeff(p, k);
      const double rhs = p.r * power(double(k - 1), alpha - 1.0) /
                         momentum_denominator(k, alpha, p.r);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }
}

TEST_CASE("denominator consistency at alpha = 1") {
  for (double r : {0.0, 1.0, 3.0, 7.25}) {
    for (long k = 1; k <= 100; ++k) {
      CHECK(momentum_denominator(k, 1.0, r) == double(k) + r);
    }
  }
}

TEST_CASE("singular and degenerate configurations") {
  CHECK_THROWS_AS(monotone_z_coeff({0.5, 2.0}, 1), SingularCoefficientError);
  CHECK_THROWS_AS(power_diff(1, 0.5), SingularCoefficientError);
  CHECK_THROWS_AS(power_sum(1, 0.25), SingularCoefficientError);
  // k^alpha + r k^(alpha-1) <= 0 for strongly negative r at small k
  CHECK_THROWS_AS(momentum_coeff({1.0, -10.0}, 2), DegenerateDenominatorError);
  CHECK_THROWS_AS(monotone_z_coeff({1.0, -4.0}, 4), DegenerateDenominatorError);
  CHECK_THROWS_AS(momentum_coeff({-1.0, 3.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(momentum_coeff({1.0, 3.0}, 0), std::invalid_argument);
}

TEST_CASE("certifiability threshold") {
  CHECK(certifiable({1.0, 3.0}));
  CHECK(certifiable({2.0, 5.0}));
  CHECK_FALSE(certifiable({1.0, 2.0}));
  CHECK_FALSE(certifiable({1.0, 1.5}));
}
