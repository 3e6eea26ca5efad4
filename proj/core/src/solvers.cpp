#include "nagalpha/solvers.hpp"

#include <cmath>

#include "nagalpha/lyapunov.hpp"
#include "nagalpha/prox.hpp"

namespace nagalpha {

namespace {

void check_finite(const SolverState& st) {
  if (!st.x.allFinite() || !st.y.allFinite() || !std::isfinite(st.f_x)) {
    throw DivergenceError(st.k, "solver diverged at k = " +
                                    std::to_string(st.k));
  }
}

double objective_at(const Problem& problem, const Vector& x) {
  return objective(problem, x);
}

}  // namespace

bool is_monotone(Variant v) {
  return v == Variant::m_nag_alpha || v == Variant::m_fista_alpha;
}

bool is_proximal(Variant v) {
  return v == Variant::fista_alpha || v == Variant::m_fista_alpha;
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::nag_alpha: return "nag_alpha";
    case Variant::m_nag_alpha: return "m_nag_alpha";
    case Variant::fista_alpha: return "fista_alpha";
    case Variant::m_fista_alpha: return "m_fista_alpha";
  }
  return "unknown";
}

Variant variant_from_name(const std::string& name) {
  if (name == "nag_alpha" || name == "nag") return Variant::nag_alpha;
  if (name == "m_nag_alpha" || name == "m-nag" || name == "mnag") {
    return Variant::m_nag_alpha;
  }
  if (name == "fista_alpha" || name == "fista") return Variant::fista_alpha;
  if (name == "m_fista_alpha" || name == "m-fista" || name == "mfista") {
    return Variant::m_fista_alpha;
  }
  throw std::invalid_argument("unknown variant '" + name + "'");
}

SolverState init(const Problem& problem, const SolverConfig& config,
                 const Vector& x0) {
  const SmoothProblem& f = smooth_part(problem);
  if (x0.size() != f.dimension) {
    throw std::invalid_argument("init: x0 has dimension " +
                                std::to_string(x0.size()) + ", problem needs " +
                                std::to_string(f.dimension));
  }
  if (!x0.allFinite()) throw std::invalid_argument("init: x0 not finite");
  if (!(config.step_s > 0.0)) {
    throw std::invalid_argument("init: step size must be > 0");
  }
  if (config.max_iter < 0) {
    throw std::invalid_argument("init: max_iter must be >= 0");
  }
  if (config.stepping == Stepping::phase_space &&
      config.variant != Variant::nag_alpha) {
    throw std::invalid_argument(
        "init: phase-space stepping is only defined for nag_alpha");
  }
  if (is_proximal(config.variant)) {
    if (!is_composite(problem)) {
      throw std::invalid_argument(
          "init: proximal variants need a composite problem");
    }
    if (config.step_s > 1.0 / f.lipschitz) {
      throw std::invalid_argument(
          "init: proximal variants require s <= 1/L");
    }
  } else if (is_composite(problem)) {
    throw std::invalid_argument(
        "init: smooth variants cannot run on a composite problem");
  }
  if (!(config.params.alpha > 0.0)) {
    throw std::invalid_argument("init: alpha must be > 0");
  }

  SolverState st;
  st.k = 0;
  st.x = x0;
  st.y = x0;
  st.v = Vector::Zero(x0.size());
  st.z = x0;
  st.f_x = objective_at(problem, x0);
  st.accepted_z = true;
  check_finite(st);
  return st;
}

SolverState step_nag_alpha(const SolverState& state, const SmoothProblem& f,
                           const SolverConfig& config) {
  const double s = config.step_s;
  const double sqrt_s = std::sqrt(s);
  const Vector grad = f.gradient(state.y);
  const long k = state.k + 1;

  SolverState next;
  next.k = k;
  next.x = state.y - s * grad;
  const Vector dx = next.x - state.x;
  next.y = next.x + momentum_coeff(config.params, k) * dx;
  next.v = dx / sqrt_s;
  next.z = next.x;
  next.f_x = f.value(next.x);
  next.accepted_z = true;
  check_finite(next);
  return next;
}

SolverState step_nag_alpha_phase_space(const SolverState& state,
                                       const SmoothProblem& f,
                                       const SolverConfig& config) {
  const double s = config.step_s;
  const double sqrt_s = std::sqrt(s);
  const Vector grad = f.gradient(state.y);
  const long k = state.k + 1;
  // v_0 = 0, so the momentum factor at k = 0 multiplies a zero vector.
  const double ck =
      state.k >= 1 ? momentum_coeff(config.params, state.k) : 0.0;

  SolverState next;
  next.k = k;
  next.v = ck * state.v - sqrt_s * grad;
  next.x = state.x + sqrt_s * next.v;
  next.y = next.x + momentum_coeff(config.params, k) * sqrt_s * next.v;
  next.z = next.x;
  next.f_x = f.value(next.x);
  next.accepted_z = true;
  check_finite(next);
  return next;
}

SolverState step_m_nag_alpha(const SolverState& state, const SmoothProblem& f,
                             const SolverConfig& config) {
  const double s = config.step_s;
  const double sqrt_s = std::sqrt(s);
  const Vector grad = f.gradient(state.y);
  const long k = state.k + 1;

  SolverState next;
  next.k = k;
  next.z = state.y - s * grad;
  const double f_z = f.value(next.z);
  next.accepted_z = f_z <= state.f_x;
  next.x = next.accepted_z ? next.z : state.x;
  next.f_x = next.accepted_z ? f_z : state.f_x;
  const double c = momentum_coeff(config.params, k);
  const double cz = monotone_z_coeff(config.params, k);
  next.y = next.x + c * (next.x - state.x) + cz * (next.z - next.x);
  next.v = (next.x - state.x) / sqrt_s;
  check_finite(next);
  return next;
}

SolverState step_fista_alpha(const SolverState& state,
                             const CompositeProblem& phi,
                             const SolverConfig& config) {
  const double sqrt_s = std::sqrt(config.step_s);
  const ProxResult prox = proximal_value(phi, state.y, config.step_s);
  const long k = state.k + 1;

  SolverState next;
  next.k = k;
  next.x = prox.point;
  const Vector dx = next.x - state.x;
  next.y = next.x + momentum_coeff(config.params, k) * dx;
  next.v = dx / sqrt_s;
  next.z = next.x;
  next.f_x = objective(phi, next.x);
  next.accepted_z = true;
  check_finite(next);
  return next;
}

SolverState step_m_fista_alpha(const SolverState& state,
                               const CompositeProblem& phi,
                               const SolverConfig& config) {
  const double sqrt_s = std::sqrt(config.step_s);
  const ProxResult prox = proximal_value(phi, state.y, config.step_s);
  const long k = state.k + 1;

  SolverState next;
  next.k = k;
  next.z = prox.point;
  // The comparison uses the full composite objective: the rate bound controls
  // Phi, and comparing the smooth part alone would break Phi-monotonicity.
  const double phi_z = objective(phi, next.z);
  next.accepted_z = phi_z <= state.f_x;
  next.x = next.accepted_z ? next.z : state.x;
  next.f_x = next.accepted_z ? phi_z : state.f_x;
  const double c = momentum_coeff(config.params, k);
  const double cz = monotone_z_coeff(config.params, k);
  next.y = next.x + c * (next.x - state.x) + cz * (next.z - next.x);
  next.v = (next.x - state.x) / sqrt_s;
  check_finite(next);
  return next;
}

SolverState step(const SolverState& state, const Problem& problem,
                 const SolverConfig& config) {
  switch (config.variant) {
    case Variant::nag_alpha:
      return config.stepping == Stepping::phase_space
                 ? step_nag_alpha_phase_space(state, smooth_part(problem),
                                              config)
                 : step_nag_alpha(state, smooth_part(problem), config);
    case Variant::m_nag_alpha:
      return step_m_nag_alpha(state, smooth_part(problem), config);
    case Variant::fista_alpha:
      return step_fista_alpha(state, std::get<CompositeProblem>(problem),
                              config);
    case Variant::m_fista_alpha:
      return step_m_fista_alpha(state, std::get<CompositeProblem>(problem),
                                config);
  }
  throw std::logic_error("step: unknown variant");
}

namespace {

IterationRecord make_record(const SolverState& st, const Problem& problem,
                            const SolverConfig& config) {
  IterationRecord rec;
  rec.k = st.k;
  rec.f_gap = st.f_x - objective_min(problem);
  if (is_proximal(config.variant)) {
    rec.grad_norm =
        proximal_value(std::get<CompositeProblem>(problem), st.y,
                       config.step_s)
            .subgradient.norm();
  } else {
    rec.grad_norm = smooth_part(problem).gradient(st.y).norm();
  }
  rec.coeff = st.k >= 1 ? momentum_coeff(config.params, st.k) : 0.0;
  const long first_defined = config.params.alpha < 1.0 ? 2 : 1;
  if (st.k >= first_defined) {
    const EnergyBreakdown energy =
        is_monotone(config.variant)
            ? energy_xy_form(st, problem, config)
            : energy_velocity_form(st, problem, config);
    rec.lyap_total = energy.total;
    rec.lyap_pot = energy.potential;
    rec.lyap_mix = energy.mixed;
  }
  rec.accepted_z = st.accepted_z ? 1 : 0;
  return rec;
}

}  // namespace

Trace run(const Problem& problem, const SolverConfig& config, const Vector& x0,
          const std::vector<Observer>& observers) {
  Trace trace;
  trace.states.reserve(static_cast<std::size_t>(config.max_iter) + 1);
  trace.records.reserve(static_cast<std::size_t>(config.max_iter) + 1);

  SolverState st = init(problem, config, x0);
  const auto record_and_notify = [&](const SolverState& s) {
    trace.states.push_back(s);
    trace.records.push_back(make_record(s, problem, config));
    for (const auto& obs : observers) {
      if (!obs(trace.states.back(), trace.records.back())) return false;
    }
    return true;
  };

  if (!record_and_notify(st)) return trace;
  for (long k = 1; k <= config.max_iter; ++k) {
    st = step(st, problem, config);
    if (!record_and_notify(st)) break;
  }
  return trace;
}

Observer stop_at_gap(double tol) {
  return [tol](const SolverState&, const IterationRecord& rec) {
    return rec.f_gap > tol;
  };
}

TraceMetadata make_metadata(const Problem& problem, const SolverConfig& config,
                            std::uint64_t seed) {
  TraceMetadata meta;
  meta.problem = problem_id(problem);
  meta.variant = variant_name(config.variant);
  meta.alpha = config.params.alpha;
  meta.r = config.params.r;
  meta.s = config.step_s;
  meta.seed = seed;
  meta.f_star = objective_min(problem);
  meta.lipschitz = smooth_part(problem).lipschitz;
  meta.mu = smooth_part(problem).strong_mu;
  return meta;
}

}  // namespace nagalpha
