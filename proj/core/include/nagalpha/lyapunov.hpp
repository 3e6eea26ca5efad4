#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nagalpha/solvers.hpp"

namespace nagalpha {

enum class EnergyForm { velocity_form, xy_form };

/// total = potential + mixed exactly as computed; potential is the scaled
/// objective gap s * k^alpha (k^alpha + r k^(alpha-1)) (f(x_k) - f(x*)).
struct EnergyBreakdown {
  long k = 0;
  double potential = 0.0;
  double mixed = 0.0;
  double total = 0.0;
  EnergyForm form = EnergyForm::velocity_form;
};

/// Mixed term from the velocity representation:
/// 1/2 || sqrt(s) (k-1)^alpha v_k + r (k-1)^(alpha-1) (x_k - x*) ||^2.
/// Defined for k >= 1 (k >= 2 when alpha < 1).
EnergyBreakdown energy_velocity_form(const SolverState& state,
                                     const Problem& problem,
                                     const SolverConfig& config);

/// Mixed term written in the iterates alone:
/// 1/2 || [k^alpha + r(k^(alpha-1) - (k-1)^(alpha-1))](y_k - x_k)
///        + r (k-1)^(alpha-1) (y_k - x*) ||^2.
/// Coincides with the velocity form whenever y_k = x_k + coeff(k) sqrt(s) v_k,
/// and is the form that applies to the monotone variants.
EnergyBreakdown energy_xy_form(const SolverState& state, const Problem& problem,
                               const SolverConfig& config);

struct InequalityReport {
  long checked_pairs = 0;
  long violations = 0;
  long first_violation_k = -1;
  double max_excess = 0.0;  // max residual beyond tol*scale (<= 0 when clean)
  long monotone_violations = 0;
  long first_monotone_violation_k = -1;
};

/// Checks, along the trace, the descent inequality instantiated at
/// (x_k, y_k) and at (x*, y_k) -- with the proximal subgradient standing in
/// for the gradient on composite problems -- and, for monotone variants, that
/// the objective at x_{k+1} never exceeds the objective at the fresh
/// forward-backward point z_k. Violations are report entries, not errors.
InequalityReport check_fundamental_inequalities(const Trace& trace,
                                                const Problem& problem,
                                                const SolverConfig& config,
                                                double tol = 1e-9);

/// Smallest K in the trace such that
///   E(k+1) <= E(k) (1 + slack) + slack * E(K)   for all k in [K, k_max],
/// with K <= k_max/2 so the certified tail is meaningfully long.
/// Requires at least 10 entries with contiguous k.
std::optional<long> detect_K(
    const std::vector<std::pair<long, double>>& trace_energies, double slack);

/// Gap level below which comparisons are dominated by rounding in
/// f(x_k) - f(x*): 1e3 * eps * |f*| + 1e-300.
double rounding_floor(double f_star);

}  // namespace nagalpha
