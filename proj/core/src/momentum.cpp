#include "nagalpha/momentum.hpp"

#include <cmath>
#include <string>

namespace nagalpha {

namespace {

void require_valid(const MomentumParams& p) {
  if (!(p.alpha > 0.0)) {
    throw std::invalid_argument("momentum: alpha must be > 0, got " +
                                std::to_string(p.alpha));
  }
  if (!std::isfinite(p.r)) {
    throw std::invalid_argument("momentum: r must be finite");
  }
}

void require_k(long k) {
  if (k < 1) {
    throw std::invalid_argument("momentum: k must be >= 1, got " +
                                std::to_string(k));
  }
}

double positive_denominator(long k, double alpha, double r) {
  const double den = momentum_denominator(k, alpha, r);
  if (!(den > 0.0)) {
    throw DegenerateDenominatorError(
        "momentum: k^alpha + r k^(alpha-1) = " + std::to_string(den) +
        " <= 0 at k = " + std::to_string(k));
  }
  return den;
}

}  // namespace

double power(double base, double exponent) {
  if (base < 0.0) {
    throw std::domain_error("power: negative base");
  }
  if (base == 0.0) {
    if (exponent > 0.0) return 0.0;
    if (exponent == 0.0) return 1.0;
    throw SingularCoefficientError("power: 0 raised to negative exponent " +
                                   std::to_string(exponent));
  }
  // Exact fast path for integer exponents (binary exponentiation).
  if (exponent == std::nearbyint(exponent) && std::abs(exponent) <= 512.0) {
    long e = static_cast<long>(exponent);
    const bool negative = e < 0;
    unsigned long n = static_cast<unsigned long>(negative ? -e : e);
    double result = 1.0;
    double factor = base;
    while (n != 0) {
      if (n & 1UL) result *= factor;
      factor *= factor;
      n >>= 1UL;
    }
    return negative ? 1.0 / result : result;
  }
  return std::exp(exponent * std::log(base));
}

double momentum_coeff(const MomentumParams& p, long k) {
  require_valid(p);
  require_k(k);
  const double den = positive_denominator(k, p.alpha, p.r);
  return power(static_cast<double>(k - 1), p.alpha) / den;
}

double monotone_z_coeff(const MomentumParams& p, long k) {
  require_valid(p);
  require_k(k);
  const double den = positive_denominator(k, p.alpha, p.r);
  const double km1 = static_cast<double>(k - 1);
  const double num = power(km1, p.alpha) + p.r * power(km1, p.alpha - 1.0);
  return num / den;
}

double power_diff(long k, double alpha) {
  require_k(k);
  return power(static_cast<double>(k), alpha - 1.0) -
         power(static_cast<double>(k - 1), alpha - 1.0);
}

double power_sum(long k, double alpha) {
  require_k(k);
  return power(static_cast<double>(k), alpha - 1.0) +
         power(static_cast<double>(k - 1), alpha - 1.0);
}

double momentum_denominator(long k, double alpha, double r) {
  require_k(k);
  const double kd = static_cast<double>(k);
  return power(kd, alpha) + r * power(kd, alpha - 1.0);
}

double potential_coeff(long k, double alpha, double r) {
  return power(static_cast<double>(k), alpha) *
         momentum_denominator(k, alpha, r);
}

}  // namespace nagalpha
