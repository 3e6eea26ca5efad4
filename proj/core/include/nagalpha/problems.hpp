#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "nagalpha/common.hpp"
#include "nagalpha/io.hpp"

namespace nagalpha {

/// A smooth, mu-strongly convex objective with an L-Lipschitz gradient and a
/// known minimizer. Oracles are immutable after construction and safe to
/// share across threads.
struct SmoothProblem {
  std::string id;
  int dimension = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz = 0.0;  // L > 0
  double strong_mu = 0.0;  // mu in (0, L]; mu ~ 0 permitted for exploration
  Vector minimizer;        // x*
  double min_value = 0.0;  // f(x*)
};

/// Composite objective f + g: the smooth part plus a convex regularizer with
/// a cheap proximal map. reg_prox(u, s) minimizes ||y - u||^2/(2s) + g(y).
/// The composite minimizer has no closed form in general; library
/// constructors cache the reference solution.
struct CompositeProblem {
  std::string id;
  SmoothProblem smooth;
  std::function<double(const Vector&)> reg_value;
  std::function<Vector(const Vector&, double)> reg_prox;
  std::optional<Vector> minimizer;   // x* of f + g
  std::optional<double> min_value;   // (f + g)(x*)
};

using Problem = std::variant<SmoothProblem, CompositeProblem>;

bool is_composite(const Problem& p);
const SmoothProblem& smooth_part(const Problem& p);
const std::string& problem_id(const Problem& p);

/// f(x), or f(x) + g(x) for composite problems.
double objective(const Problem& p, const Vector& x);
double objective(const CompositeProblem& p, const Vector& x);

/// Minimum objective value / minimizer; throws if a composite problem has no
/// cached reference solution.
double objective_min(const Problem& p);
const Vector& minimizer_of(const Problem& p);

/// Wraps a smooth problem as a composite with g == 0 (identity prox).
CompositeProblem with_zero_regularizer(const SmoothProblem& p);

/// The ill-conditioned 2-D benchmark quadratic
/// f(x1, x2) = 5e-3 x1^2 + x2^2, with L = 2, mu = 0.01, x* = 0.
SmoothProblem make_figure1_quadratic();

/// f(x) = 1/2 sum_i lambda_i x_i^2 for the given Hessian eigenvalues.
SmoothProblem make_diagonal_quadratic(const Vector& hessian_eigenvalues);

/// Dense quadratic with spectrum linspace(eig_min, eig_max) in a random
/// orthogonal basis and a random minimizer; deterministic in the seed.
SmoothProblem make_random_quadratic(int dimension, double eig_min,
                                    double eig_max, std::uint64_t seed);

/// f(x) = 1/2 ||Ax - b||^2 + lam ||x||_1 with componentwise soft-threshold
/// prox. A must have full column rank so the smooth part is strongly convex;
/// rank-deficient A is rejected. L = lambda_max(A^T A), mu = lambda_min.
CompositeProblem make_lasso(const Matrix& A, const Vector& b, double lam);

/// Gaussian design lasso, deterministic in the seed. rows >= cols.
CompositeProblem make_random_lasso(int rows, int cols, double lam,
                                   std::uint64_t seed);

/// Ridge-regularized logistic loss, labels in {-1, +1}:
/// f(x) = 1/n sum_i log(1 + exp(-y_i a_i^T x)) + ridge/2 ||x||^2.
/// L = lambda_max(A^T A)/(4n) + ridge, mu = ridge; the minimizer is solved
/// by a damped Newton iteration at construction.
SmoothProblem make_l2_logistic(const Matrix& A, const Vector& labels,
                               double ridge);

/// Random separable-ish logistic instance, deterministic in the seed.
SmoothProblem make_random_logistic(int samples, int features, double ridge,
                                   std::uint64_t seed);

/// Plain proximal-gradient (ISTA) reference solve at s = 1/L: returns x with
/// ||G_s(x)|| <= tol. Throws ConvergenceError with the achieved residual if
/// the cap is exhausted.
Vector reference_minimizer(const CompositeProblem& p, double tol,
                           long max_iter = 1000000);

/// Builds a problem from a parsed `key = value` configuration. Keys:
///   kind = figure1 | quadratic | lasso | l2_logistic
///   quadratic:   eigenvalues=0.01,2  OR  dimension=, eig_min=, eig_max=, seed=
///   lasso:       matrix=, vector=, lambda=  OR  rows=, cols=, lambda=, seed=
///   l2_logistic: samples=, features=, ridge=, seed=
Problem problem_from_config(const ConfigMap& config);
Problem load_problem(const std::filesystem::path& path);

}  // namespace nagalpha
