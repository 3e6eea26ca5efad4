#include "nagalpha/lyapunov.hpp"

#include <cmath>
#include <limits>

#include "nagalpha/prox.hpp"

namespace nagalpha {

namespace {

void require_defined(long k, double alpha) {
  if (k < 1 || (alpha < 1.0 && k < 2)) {
    throw SingularCoefficientError(
        "energy: not defined at k = " + std::to_string(k) +
        " for alpha = " + std::to_string(alpha));
  }
}

double pair_scale(double a, double b) {
  return std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

EnergyBreakdown energy_velocity_form(const SolverState& state,
                                     const Problem& problem,
                                     const SolverConfig& config) {
  const double alpha = config.params.alpha;
  const double r = config.params.r;
  const double s = config.step_s;
  require_defined(state.k, alpha);

  EnergyBreakdown out;
  out.k = state.k;
  out.form = EnergyForm::velocity_form;
  const double gap = state.f_x - objective_min(problem);
  out.potential = s * potential_coeff(state.k, alpha, r) * gap;
  const double km1 = static_cast<double>(state.k - 1);
  const Vector w = std::sqrt(s) * power(km1, alpha) * state.v +
                   r * power(km1, alpha - 1.0) * (state.x - minimizer_of(problem));
  out.mixed = 0.5 * w.squaredNorm();
  out.total = out.potential + out.mixed;
  return out;
}

EnergyBreakdown energy_xy_form(const SolverState& state, const Problem& problem,
                               const SolverConfig& config) {
  const double alpha = config.params.alpha;
  const double r = config.params.r;
  const double s = config.step_s;
  require_defined(state.k, alpha);

  EnergyBreakdown out;
  out.k = state.k;
  out.form = EnergyForm::xy_form;
  const double gap = state.f_x - objective_min(problem);
  out.potential = s * potential_coeff(state.k, alpha, r) * gap;
  const double bracket =
      power(static_cast<double>(state.k), alpha) + r * power_diff(state.k, alpha);
  const double km1 = static_cast<double>(state.k - 1);
  const Vector w = bracket * (state.y - state.x) +
                   r * power(km1, alpha - 1.0) * (state.y - minimizer_of(problem));
  out.mixed = 0.5 * w.squaredNorm();
  out.total = out.potential + out.mixed;
  return out;
}

InequalityReport check_fundamental_inequalities(const Trace& trace,
                                                const Problem& problem,
                                                const SolverConfig& config,
                                                double tol) {
  InequalityReport report;
  report.max_excess = -std::numeric_limits<double>::infinity();
  if (trace.states.size() < 2) return report;

  const SmoothProblem& f = smooth_part(problem);
  const double mu = f.strong_mu;
  const double s = config.step_s;
  const double f_star = objective_min(problem);
  const Vector& x_star = minimizer_of(problem);
  const bool proximal = is_proximal(config.variant);
  const bool monotone = is_monotone(config.variant);

  const auto note = [&](long k, double excess) {
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > 0.0) {
      ++report.violations;
      if (report.first_violation_k < 0) report.first_violation_k = k;
    }
  };

  for (std::size_t i = 0; i + 1 < trace.states.size(); ++i) {
    const SolverState& cur = trace.states[i];
    const SolverState& nxt = trace.states[i + 1];
    const Vector g = proximal
                         ? proximal_value(std::get<CompositeProblem>(problem),
                                          cur.y, s)
                               .subgradient
                         : f.gradient(cur.y);
    const double g_term = 0.5 * s * g.squaredNorm();

    // Descent inequality against the previous iterate.
    {
      const double lhs = nxt.f_x - cur.f_x;
      const double rhs = g.dot(cur.y - cur.x) -
                         0.5 * mu * (cur.y - cur.x).squaredNorm() - g_term;
      note(nxt.k, lhs - rhs - tol * pair_scale(nxt.f_x, cur.f_x));
    }
    // Descent inequality against the minimizer.
    {
      const double lhs = nxt.f_x - f_star;
      const double rhs = g.dot(cur.y - x_star) -
                         0.5 * mu * (cur.y - x_star).squaredNorm() - g_term;
      note(nxt.k, lhs - rhs - tol * pair_scale(nxt.f_x, f_star));
    }
    report.checked_pairs += 2;

    if (monotone) {
      const double obj_z = objective(problem, nxt.z);
      if (!(nxt.f_x <= obj_z)) {
        ++report.monotone_violations;
        if (report.first_monotone_violation_k < 0) {
          report.first_monotone_violation_k = nxt.k;
        }
      }
    }
  }
  return report;
}

std::optional<long> detect_K(
    const std::vector<std::pair<long, double>>& trace_energies, double slack) {
  if (trace_energies.size() < 10) {
    throw std::invalid_argument(
        "detect_K: need at least 10 iterations, got " +
        std::to_string(trace_energies.size()));
  }
  if (slack < 0.0) throw std::invalid_argument("detect_K: slack must be >= 0");
  for (std::size_t i = 0; i + 1 < trace_energies.size(); ++i) {
    if (trace_energies[i + 1].first != trace_energies[i].first + 1) {
      throw std::invalid_argument("detect_K: iteration index not contiguous");
    }
  }

  const std::size_t n = trace_energies.size();
  // excess[i] = E(k_{i+1}) - E(k_i) (1 + slack); candidate K at index c works
  // iff max_{i >= c} excess[i] <= slack * E(K).
  std::vector<double> suffix_max(n, -std::numeric_limits<double>::infinity());
  for (std::size_t i = n - 1; i-- > 0;) {
    const double excess = trace_energies[i + 1].second -
                          trace_energies[i].second * (1.0 + slack);
    suffix_max[i] = std::max(excess, suffix_max[i + 1]);
  }
  const long k_max = trace_energies.back().first;
  for (std::size_t c = 0; c + 1 < n; ++c) {
    const long k = trace_energies[c].first;
    if (2 * k > k_max) break;
    if (suffix_max[c] <= slack * trace_energies[c].second) return k;
  }
  return std::nullopt;
}

double rounding_floor(double f_star) {
  return 1e3 * std::numeric_limits<double>::epsilon() * std::abs(f_star) +
         1e-300;
}

}  // namespace nagalpha
