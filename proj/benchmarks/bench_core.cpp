#include <benchmark/benchmark.h>

#include "nagalpha/analysis.hpp"
#include "nagalpha/lyapunov.hpp"
#include "nagalpha/problems.hpp"
#include "nagalpha/prox.hpp"
#include "nagalpha/solvers.hpp"

namespace {

using namespace nagalpha;

SolverConfig config_for(Variant variant, double alpha, double r, double s,
                        long iters) {
  SolverConfig config;
  config.params = {alpha, r};
  config.step_s = s;
  config.max_iter = iters;
  config.variant = variant;
  return config;
}

void BM_MomentumCoeff(benchmark::State& state) {
  const MomentumParams p{state.range(0) == 0 ? 2.0 : 1.5, 4.0};
  long k = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(momentum_coeff(p, k));
    k = k % 100000 + 1;
  }
}
BENCHMARK(BM_MomentumCoeff)->Arg(0)->Arg(1);  // 0: integer alpha, 1: fractional

void BM_NagStep(benchmark::State& state) {
  const SmoothProblem p =
      make_random_quadratic(static_cast<int>(state.range(0)), 0.1, 10.0, 1);
  const SolverConfig config =
      config_for(Variant::nag_alpha, 2.0, 5.0, 1.0 / p.lipschitz, 1);
  SolverState st = init(p, config, Vector::Ones(p.dimension));
  for (auto _ : state) {
    st = step_nag_alpha(st, p, config);
    if (st.k > 100000) st.k = 1;  // keep coefficients in a steady range
  }
}
BENCHMARK(BM_NagStep)->Arg(10)->Arg(100)->Arg(1000);

void BM_FistaStep(benchmark::State& state) {
  const CompositeProblem p =
      make_random_lasso(static_cast<int>(state.range(0)),
                        static_cast<int>(state.range(0)), 0.1, 1);
  const SolverConfig config = config_for(Variant::fista_alpha, 1.5, 4.0,
                                         1.0 / p.smooth.lipschitz, 1);
  SolverState st = init(p, config, Vector::Zero(p.smooth.dimension));
  for (auto _ : state) {
    st = step_fista_alpha(st, p, config);
    if (st.k > 100000) st.k = 1;
  }
}
BENCHMARK(BM_FistaStep)->Arg(10)->Arg(100);

void BM_EnergyEval(benchmark::State& state) {
  const SmoothProblem p = make_figure1_quadratic();
  const SolverConfig config = config_for(Variant::nag_alpha, 2.0, 5.0, 0.5, 64);
  const Trace trace = run(p, config, Vector::Ones(2));
  const SolverState& st = trace.states.back();
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_velocity_form(st, p, config).total);
  }
}
BENCHMARK(BM_EnergyEval);

void BM_DetectK(benchmark::State& state) {
  std::vector<std::pair<long, double>> energies;
  energies.reserve(10000);
  double e = 1.0;
  for (long k = 1; k <= 10000; ++k) {
    energies.emplace_back(k, e);
    e *= k < 40 ? 1.05 : 0.999;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect_K(energies, 1e-12));
  }
}
BENCHMARK(BM_DetectK);

void BM_CertifiedRun(benchmark::State& state) {
  const Problem p = make_figure1_quadratic();
  const SolverConfig config =
      config_for(Variant::nag_alpha, 2.0, 5.0, 0.5, 10000);
  for (auto _ : state) {
    const Trace trace = run(p, config, Vector::Ones(2));
    benchmark::DoNotOptimize(certify(trace, p, config).pass);
  }
}
BENCHMARK(BM_CertifiedRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
