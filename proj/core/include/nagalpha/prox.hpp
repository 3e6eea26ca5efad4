#pragma once

#include <functional>

#include "nagalpha/problems.hpp"

namespace nagalpha {

/// Forward-backward point and the generalized gradient it induces.
/// subgradient == (x - point)/step exactly as computed.
struct ProxResult {
  Vector point;        // P_s(x)
  Vector subgradient;  // G_s(x)
  double step = 0.0;   // s
};

/// Componentwise soft threshold: (|u_i| - t)_+ sgn(u_i), with sgn(0) := 0
/// (immaterial, the (.)_+ factor vanishes there).
Vector soft_threshold(const Vector& u, double t);

/// P_s(x) = argmin_y ||y - (x - s grad f(x))||^2/(2s) + g(y), taken as the
/// gradient step followed by the regularizer prox, and G_s(x) = (x - P_s(x))/s.
/// Requires 0 < s <= 1/L.
ProxResult proximal_value(const CompositeProblem& p, const Vector& x, double s);

/// Grid minimization of ||y - u||^2/(2s) + g(y) over [box_lo, box_hi]^d,
/// d <= 2, g convex. Validation oracle: evaluates the objective only. Ties
/// break toward the lexicographically smallest grid point. In 2-D, fine
/// resolutions are reached by exhaustive passes over a shrinking window; a
/// window whose argmin touches its edge is re-expanded, which is sound
/// because the objective is strictly convex. Signals if the minimizer lands
/// on the original box boundary.
Vector brute_force_prox(const std::function<double(const Vector&)>& g_value,
                        const Vector& u, double s, double box_lo,
                        double box_hi, double resolution);

}  // namespace nagalpha
