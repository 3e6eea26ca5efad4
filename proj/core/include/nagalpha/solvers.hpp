#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nagalpha/io.hpp"
#include "nagalpha/momentum.hpp"
#include "nagalpha/problems.hpp"

namespace nagalpha {

enum class Variant { nag_alpha, m_nag_alpha, fista_alpha, m_fista_alpha };
enum class Stepping { two_step, phase_space };

bool is_monotone(Variant v);
bool is_proximal(Variant v);
std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct SolverConfig {
  MomentumParams params;
  double step_s = 0.0;
  long max_iter = 10000;
  Variant variant = Variant::nag_alpha;
  Stepping stepping = Stepping::two_step;  // phase_space: nag_alpha only
};

/// One iteration of solver state. v_k = (x_k - x_{k-1})/sqrt(s) is maintained
/// in both stepping modes so energy evaluation never differentiates traces
/// after the fact. z holds the latest forward-backward point z_{k-1}
/// (== x_k for the non-monotone variants). f_x caches the objective at x
/// (the composite objective for proximal variants).
struct SolverState {
  long k = 0;
  Vector x;
  Vector y;
  Vector v;
  Vector z;
  double f_x = 0.0;
  bool accepted_z = true;
};

/// k = 0 state with x = y = x0, v = 0. Validates that the variant matches the
/// problem kind (proximal variants need a composite problem), that
/// phase-space stepping is only used with nag_alpha, and that proximal
/// variants respect s <= 1/L. Smooth variants may run with s > 1/L for
/// exploration; such runs are non-certifiable and may diverge.
SolverState init(const Problem& problem, const SolverConfig& config,
                 const Vector& x0);

SolverState step_nag_alpha(const SolverState& state, const SmoothProblem& f,
                           const SolverConfig& config);
SolverState step_nag_alpha_phase_space(const SolverState& state,
                                       const SmoothProblem& f,
                                       const SolverConfig& config);
SolverState step_m_nag_alpha(const SolverState& state, const SmoothProblem& f,
                             const SolverConfig& config);
SolverState step_fista_alpha(const SolverState& state,
                             const CompositeProblem& phi,
                             const SolverConfig& config);
SolverState step_m_fista_alpha(const SolverState& state,
                               const CompositeProblem& phi,
                               const SolverConfig& config);

/// Dispatches on config.variant / config.stepping.
SolverState step(const SolverState& state, const Problem& problem,
                 const SolverConfig& config);

struct Trace {
  std::vector<SolverState> states;
  std::vector<IterationRecord> records;
};

/// Called after every recorded iteration (including k = 0); return false to
/// stop the run. Observers must not mutate solver state.
using Observer =
    std::function<bool(const SolverState&, const IterationRecord&)>;

/// Drives the step machine max_iter times or until an observer stops it.
/// Deterministic: identical inputs produce identical traces. Each record
/// carries the Lyapunov energies (velocity form for nag/fista, xy form for
/// the monotone variants).
Trace run(const Problem& problem, const SolverConfig& config, const Vector& x0,
          const std::vector<Observer>& observers = {});

/// Observer that stops once the objective gap falls to `tol` or below.
Observer stop_at_gap(double tol);

/// Trace metadata prefilled from the problem and config.
TraceMetadata make_metadata(const Problem& problem, const SolverConfig& config,
                            std::uint64_t seed = 0);

}  // namespace nagalpha
