#pragma once

#include "nagalpha/common.hpp"

namespace nagalpha {

/// Parameters of the power-family momentum coefficient
/// (k-1)^alpha / (k^alpha + r k^(alpha-1)).
struct MomentumParams {
  double alpha = 1.0;  // power, > 0
  double r = 3.0;      // controllable parameter
};

/// Convergence certificates require r > 2*alpha; other choices run but are
/// flagged non-certifiable.
inline bool certifiable(const MomentumParams& p) { return p.r > 2.0 * p.alpha; }

/// base^exponent with the convention 0^0 := 1 (so alpha = 1 reproduces the
/// classical coefficients at k = 1). Integer exponents take an exact
/// multiplication fast path; everything else goes through exp(e*log(b)).
/// Throws SingularCoefficientError for 0^negative.
double power(double base, double exponent);

/// Momentum coefficient (k-1)^alpha / (k^alpha + r k^(alpha-1)), k >= 1.
double momentum_coeff(const MomentumParams& p, long k);

/// Coefficient of (z_{k-1} - x_k) in the monotone variants:
/// ((k-1)^alpha + r (k-1)^(alpha-1)) / (k^alpha + r k^(alpha-1)).
/// Singular at k = 1 when alpha < 1.
double monotone_z_coeff(const MomentumParams& p, long k);

/// k^(alpha-1) - (k-1)^(alpha-1). Singular at k = 1 when alpha < 1.
double power_diff(long k, double alpha);

/// k^(alpha-1) + (k-1)^(alpha-1). Singular at k = 1 when alpha < 1.
double power_sum(long k, double alpha);

/// k^alpha + r k^(alpha-1), the momentum denominator.
double momentum_denominator(long k, double alpha, double r);

/// k^alpha * (k^alpha + r k^(alpha-1)), the scale of the potential energy.
double potential_coeff(long k, double alpha, double r);

}  // namespace nagalpha
