#include <cmath>

#include "doctest.h"
#include "nagalpha/analysis.hpp"
#include "nagalpha/lyapunov.hpp"
#include "test_support.hpp"

using namespace nagalpha;

namespace {

SolverConfig config_for(Variant variant, double alpha, double r, double s,
                        long iters) {
  SolverConfig config;
  config.params = {alpha, r};
  config.step_s = s;
  config.max_iter = iters;
  config.variant = variant;
  return config;
}

std::vector<std::pair<long, double>> synthetic(
    const std::vector<double>& values) {
  std::vector<std::pair<long, double>> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.emplace_back(static_cast<long>(i) + 1, values[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("energy vanishes at the minimizer") {
  const Problem problem = make_figure1_quadratic();
  SolverState st;
  st.k = 5;
  st.x = Vector::Zero(2);
  st.y = Vector::Zero(2);
  st.v = Vector::Zero(2);
  st.z = Vector::Zero(2);
  st.f_x = 0.0;
  const SolverConfig config = config_for(Variant::nag_alpha, 2.0, 5.0, 0.5, 10);
  CHECK(energy_velocity_form(st, problem, config).total == 0.0);
  CHECK(energy_xy_form(st, problem, config).total == 0.0);
}

TEST_CASE("k = 1 energy for alpha = 2: mixed term vanishes") {
  const Problem problem = make_figure1_quadratic();
  const SolverConfig config = config_for(Variant::nag_alpha, 2.0, 5.0, 0.5, 10);
  const Trace trace = run(problem, config, Vector::Ones(2));
  const EnergyBreakdown e1 =
      energy_velocity_form(trace.states[1], problem, config);
  CHECK(e1.mixed == 0.0);
  // tau(1) = B(1, 2, 5) = 6
  const double gap = trace.states[1].f_x;
  CHECK(e1.total == doctest::Approx(0.5 * 6.0 * gap).epsilon(1e-15));
}

TEST_CASE("velocity form matches a from-scratch evaluation at k = 10") {
  const Problem problem = make_figure1_quadratic();
  const SolverConfig config = config_for(Variant::nag_alpha, 1.0, 3.0, 0.5, 10);
  const Trace trace = run(problem, config, Vector::Ones(2));
  const SolverState& st = trace.states[10];
  REQUIRE(st.k == 10);

  const double s = 0.5, r = 3.0;
  const double tau = 10.0 * (10.0 + 3.0);  // k^a (k^a + r k^(a-1)), a = 1
  const double expected_pot = s * tau * st.f_x;
  const Vector w = std::sqrt(s) * 9.0 * st.v + r * 1.0 * st.x;  // x* = 0
  const double expected_mix = 0.5 * w.squaredNorm();

  const EnergyBreakdown e = energy_velocity_form(st, problem, config);
  CHECK(e.potential == doctest::Approx(expected_pot).epsilon(1e-12));
  CHECK(e.mixed == doctest::Approx(expected_mix).epsilon(1e-12));
  CHECK(e.total == e.potential + e.mixed);
}

TEST_CASE("xy form bracket uses k^a + r (k^(a-1) - (k-1)^(a-1))") {
  // place y at the minimizer so only the (y - x) term survives:
  // bracket at k = 5, alpha = 2, r = 5 is 25 + 5 (5 - 4) = 30
  const Problem problem = make_figure1_quadratic();
  const SolverConfig config =
      config_for(Variant::m_nag_alpha, 2.0, 5.0, 0.5, 10);
  SolverState st;
  st.k = 5;
  st.y = Vector::Zero(2);
  st.x = Vector::Zero(2);
  st.x[0] = -1.0;  // y - x = e1
  st.v = Vector::Zero(2);
  st.z = st.x;
  st.f_x = 5e-3;  // f(-1, 0)
  const EnergyBreakdown e = energy_xy_form(st, problem, config);
  CHECK(e.mixed == doctest::Approx(0.5 * 30.0 * 30.0).epsilon(1e-14));
}

TEST_CASE("both forms agree along accelerated trajectories") {
  const SmoothProblem fig = make_figure1_quadratic();
  for (double alpha : {1.0, 1.5, 2.0}) {
    const SolverConfig config =
        config_for(Variant::nag_alpha, alpha, 2 * alpha + 1, 0.5, 1000);
    const Trace trace = run(fig, config, Vector::Ones(2));
    for (std::size_t i = 2; i < trace.states.size(); ++i) {
      const double vel =
          energy_velocity_form(trace.states[i], fig, config).total;
      const double xy = energy_xy_form(trace.states[i], fig, config).total;
      CHECK(std::abs(vel - xy) <= 1e-10 * std::max(1.0, std::abs(vel)));
    }
  }
}

TEST_CASE("energies are undefined before the first valid index") {
  const Problem problem = make_figure1_quadratic();
  SolverState st;
  st.k = 0;
  st.x = st.y = st.v = st.z = Vector::Zero(2);
  const SolverConfig config = config_for(Variant::nag_alpha, 1.0, 3.0, 0.5, 1);
  CHECK_THROWS_AS(energy_velocity_form(st, problem, config),
                  SingularCoefficientError);
  st.k = 1;
  const SolverConfig half = config_for(Variant::nag_alpha, 0.5, 2.0, 0.5, 1);
  CHECK_THROWS_AS(energy_velocity_form(st, problem, half),
                  SingularCoefficientError);
  CHECK_NOTHROW(energy_velocity_form(st, problem, config));
}

TEST_CASE("inequality checker is clean on a certified run") {
  const Problem problem = make_figure1_quadratic();
  const SolverConfig config =
      config_for(Variant::nag_alpha, 1.0, 3.0, 0.5, 1000);
  const Trace trace = run(problem, config, Vector::Ones(2));
  const InequalityReport report =
      check_fundamental_inequalities(trace, problem, config);
  CHECK(report.checked_pairs == 2000);
  CHECK(report.violations == 0);
  CHECK(report.max_excess <= 0.0);
}

TEST_CASE("inequality checker flags s = 2/L as a negative control") {
  const Problem problem = make_figure1_quadratic();
  const SolverConfig config = config_for(Variant::nag_alpha, 1.0, 3.0, 1.0, 40);
  Trace trace;
  try {
    trace = run(problem, config, Vector::Ones(2));
  } catch (const DivergenceError&) {
    // a short prefix is enough for the control either way
  }
  if (trace.states.size() >= 2) {
    const InequalityReport report =
        check_fundamental_inequalities(trace, problem, config);
    CHECK(report.violations >= 1);
  }
}

TEST_CASE("inequality checker on a stationary trace") {
  const SmoothProblem fig = make_figure1_quadratic();
  const SolverConfig config = config_for(Variant::nag_alpha, 1.0, 3.0, 0.5, 50);
  const Trace trace = run(fig, config, fig.minimizer);
  const InequalityReport report =
      check_fundamental_inequalities(trace, fig, config);
  CHECK(report.violations == 0);
  CHECK(report.max_excess <= 0.0);
}

TEST_CASE("monotone audit inside the checker") {
  const Problem problem = make_figure1_quadratic();
  const SolverConfig config =
      config_for(Variant::m_nag_alpha, 2.0, 5.0, 0.5, 2000);
  const Trace trace = run(problem, config, Vector::Ones(2));
  const InequalityReport report =
      check_fundamental_inequalities(trace, problem, config);
  CHECK(report.monotone_violations == 0);
  CHECK(report.violations == 0);
}

TEST_CASE("detect_K on synthetic sequences") {
  // strictly decreasing: K is the first index
  {
    std::vector<double> vals;
    for (int i = 0; i < 40; ++i) vals.push_back(100.0 / (i + 1.0));
    CHECK(detect_K(synthetic(vals), 1e-12) == 1);
  }
  // increasing up to the peak at k = 7, decreasing afterwards
  {
    std::vector<double> vals;
    for (int i = 0; i < 40; ++i) {
      vals.push_back(i <= 6 ? 10.0 + i : 100.0 / (i + 1.0));
    }
    CHECK(detect_K(synthetic(vals), 1e-12) == 7);
  }
  // oscillating to the end: no valid tail
  {
    std::vector<double> vals;
    for (int i = 0; i < 40; ++i) vals.push_back(i % 2 == 0 ? 1.0 : 2.0);
    CHECK_FALSE(detect_K(synthetic(vals), 1e-12).has_value());
  }
  // slack absorbs sub-tolerance wiggle
  {
    std::vector<double> vals;
    double e = 1.0;
    for (int i = 0; i < 60; ++i) {
      vals.push_back(e);
      e *= (i % 5 == 4) ? (1.0 + 1e-14) : 0.9;
    }
    CHECK(detect_K(synthetic(vals), 1e-12) == 1);
  }
  CHECK_THROWS_AS(detect_K(synthetic({1, 2, 3}), 1e-12),
                  std::invalid_argument);
  // non-contiguous k
  std::vector<std::pair<long, double>> gap_k;
  for (long i = 0; i < 20; ++i) gap_k.emplace_back(2 * i, 1.0);
  CHECK_THROWS_AS(detect_K(gap_k, 1e-12), std::invalid_argument);
}

TEST_CASE("rounding floor scales with |f*|") {
  CHECK(rounding_floor(0.0) == 1e-300);
  CHECK(rounding_floor(1.0) ==
        doctest::Approx(1e3 * std::numeric_limits<double>::epsilon())
            .epsilon(1e-12));
  CHECK(rounding_floor(-2.0) > rounding_floor(1.0));
}
