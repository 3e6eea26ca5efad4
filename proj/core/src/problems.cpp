#include "nagalpha/problems.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <random>

#include "nagalpha/prox.hpp"

namespace nagalpha {

namespace {

double softplus(double t) {
  // log(1 + exp(t)) without overflow
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t))
                  : std::exp(t) / (1.0 + std::exp(t));
}

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

std::string require_key(const ConfigMap& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end()) {
    throw std::invalid_argument("problem config: missing key '" + key + "'");
  }
  return it->second;
}

std::uint64_t seed_or_zero(const ConfigMap& config) {
  const auto it = config.find("seed");
  return it == config.end() ? 0 : std::stoull(it->second);
}

}  // namespace

bool is_composite(const Problem& p) {
  return std::holds_alternative<CompositeProblem>(p);
}

const SmoothProblem& smooth_part(const Problem& p) {
  if (const auto* sp = std::get_if<SmoothProblem>(&p)) return *sp;
  return std::get<CompositeProblem>(p).smooth;
}

const std::string& problem_id(const Problem& p) {
  if (const auto* sp = std::get_if<SmoothProblem>(&p)) return sp->id;
  return std::get<CompositeProblem>(p).id;
}

double objective(const CompositeProblem& p, const Vector& x) {
  return p.smooth.value(x) + p.reg_value(x);
}

double objective(const Problem& p, const Vector& x) {
  if (const auto* sp = std::get_if<SmoothProblem>(&p)) return sp->value(x);
  return objective(std::get<CompositeProblem>(p), x);
}

double objective_min(const Problem& p) {
  if (const auto* sp = std::get_if<SmoothProblem>(&p)) return sp->min_value;
  const auto& cp = std::get<CompositeProblem>(p);
  if (!cp.min_value) {
    throw std::logic_error("problem '" + cp.id +
                           "' has no cached composite minimum value");
  }
  return *cp.min_value;
}

const Vector& minimizer_of(const Problem& p) {
  if (const auto* sp = std::get_if<SmoothProblem>(&p)) return sp->minimizer;
  const auto& cp = std::get<CompositeProblem>(p);
  if (!cp.minimizer) {
    throw std::logic_error("problem '" + cp.id +
                           "' has no cached composite minimizer");
  }
  return *cp.minimizer;
}

CompositeProblem with_zero_regularizer(const SmoothProblem& p) {
  CompositeProblem cp;
  cp.id = p.id;
  cp.smooth = p;
  cp.reg_value = [](const Vector&) { return 0.0; };
  cp.reg_prox = [](const Vector& u, double) { return u; };
  cp.minimizer = p.minimizer;
  cp.min_value = p.min_value;
  return cp;
}

SmoothProblem make_figure1_quadratic() {
  SmoothProblem p;
  p.id = "figure1";
  p.dimension = 2;
  p.value = [](const Vector& x) {
    return 5e-3 * x[0] * x[0] + x[1] * x[1];
  };
  p.gradient = [](const Vector& x) {
    Vector g(2);
    g << 1e-2 * x[0], 2.0 * x[1];
    return g;
  };
  p.lipschitz = 2.0;
  p.strong_mu = 0.01;
  p.minimizer = Vector::Zero(2);
  p.min_value = 0.0;
  return p;
}

SmoothProblem make_diagonal_quadratic(const Vector& hessian_eigenvalues) {
  if (hessian_eigenvalues.size() == 0) {
    throw std::invalid_argument("diagonal quadratic: empty spectrum");
  }
  if ((hessian_eigenvalues.array() < 0.0).any()) {
    throw std::invalid_argument("diagonal quadratic: negative eigenvalue");
  }
  const double L = hessian_eigenvalues.maxCoeff();
  if (!(L > 0.0)) {
    throw std::invalid_argument("diagonal quadratic: zero spectrum");
  }
  auto evals = std::make_shared<Vector>(hessian_eigenvalues);
  SmoothProblem p;
  p.id = "diag_quadratic_d" + std::to_string(hessian_eigenvalues.size());
  p.dimension = static_cast<int>(hessian_eigenvalues.size());
  p.value = [evals](const Vector& x) {
    return 0.5 * (evals->array() * x.array().square()).sum();
  };
  p.gradient = [evals](const Vector& x) -> Vector {
    return evals->array() * x.array();
  };
  p.lipschitz = L;
  p.strong_mu = hessian_eigenvalues.minCoeff();
  p.minimizer = Vector::Zero(p.dimension);
  p.min_value = 0.0;
  return p;
}

SmoothProblem make_random_quadratic(int dimension, double eig_min,
                                    double eig_max, std::uint64_t seed) {
  if (dimension < 1) throw std::invalid_argument("quadratic: dimension < 1");
  if (!(0.0 < eig_min && eig_min <= eig_max)) {
    throw std::invalid_argument("quadratic: need 0 < eig_min <= eig_max");
  }
  std::mt19937_64 rng(seed);
  Vector evals(dimension);
  for (int i = 0; i < dimension; ++i) {
    evals[i] = dimension == 1
                   ? eig_min
                   : eig_min + (eig_max - eig_min) * i / (dimension - 1.0);
  }
  const Matrix gauss = random_gaussian(dimension, dimension, rng);
  const Matrix q = Eigen::HouseholderQR<Matrix>(gauss).householderQ();
  auto hessian = std::make_shared<Matrix>(q * evals.asDiagonal() * q.transpose());
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector center(dimension);
  for (int i = 0; i < dimension; ++i) center[i] = normal(rng);
  auto xstar = std::make_shared<Vector>(center);

  SmoothProblem p;
  p.id = "rand_quadratic_d" + std::to_string(dimension);
  p.dimension = dimension;
  p.value = [hessian, xstar](const Vector& x) {
    const Vector d = x - *xstar;
    return 0.5 * d.dot(*hessian * d);
  };
  p.gradient = [hessian, xstar](const Vector& x) -> Vector {
    return *hessian * (x - *xstar);
  };
  p.lipschitz = evals.maxCoeff();
  p.strong_mu = evals.minCoeff();
  p.minimizer = center;
  p.min_value = 0.0;
  return p;
}

CompositeProblem make_lasso(const Matrix& A, const Vector& b, double lam) {
  if (A.rows() != b.size()) {
    throw std::invalid_argument("lasso: A rows must match b size");
  }
  if (lam < 0.0) throw std::invalid_argument("lasso: lambda must be >= 0");
  const Matrix gram = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const double eig_max = eig.eigenvalues().maxCoeff();
  const double eig_min = eig.eigenvalues().minCoeff();
  if (!(eig_min > 1e-12 * std::max(1.0, eig_max))) {
    throw std::invalid_argument(
        "lasso: A is rank deficient, smooth part is not strongly convex");
  }

  auto A_ptr = std::make_shared<Matrix>(A);
  auto b_ptr = std::make_shared<Vector>(b);
  SmoothProblem smooth;
  smooth.id = "lasso_smooth";
  smooth.dimension = static_cast<int>(A.cols());
  smooth.value = [A_ptr, b_ptr](const Vector& x) {
    return 0.5 * (*A_ptr * x - *b_ptr).squaredNorm();
  };
  smooth.gradient = [A_ptr, b_ptr](const Vector& x) -> Vector {
    return A_ptr->transpose() * (*A_ptr * x - *b_ptr);
  };
  smooth.lipschitz = eig_max;
  smooth.strong_mu = eig_min;
  smooth.minimizer = A.colPivHouseholderQr().solve(b);
  smooth.min_value = smooth.value(smooth.minimizer);

  CompositeProblem cp;
  cp.id = "lasso_" + std::to_string(A.rows()) + "x" + std::to_string(A.cols());
  cp.smooth = std::move(smooth);
  cp.reg_value = [lam](const Vector& x) { return lam * x.lpNorm<1>(); };
  cp.reg_prox = [lam](const Vector& u, double s) {
    return soft_threshold(u, lam * s);
  };
  cp.minimizer = reference_minimizer(cp, 1e-12);
  cp.min_value = objective(cp, *cp.minimizer);
  return cp;
}

CompositeProblem make_random_lasso(int rows, int cols, double lam,
                                   std::uint64_t seed) {
  if (rows < cols) throw std::invalid_argument("lasso: need rows >= cols");
  std::mt19937_64 rng(seed);
  const Matrix A = random_gaussian(rows, cols, rng) / std::sqrt(double(rows));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector b(rows);
  for (int i = 0; i < rows; ++i) b[i] = normal(rng);
  return make_lasso(A, b, lam);
}

SmoothProblem make_l2_logistic(const Matrix& A, const Vector& labels,
                               double ridge) {
  const auto n = A.rows();
  if (n != labels.size()) {
    throw std::invalid_argument("logistic: label count must match rows");
  }
  if (!(ridge > 0.0)) {
    throw std::invalid_argument("logistic: ridge must be > 0");
  }
  if (((labels.array() != 1.0) && (labels.array() != -1.0)).any()) {
    throw std::invalid_argument("logistic: labels must be +-1");
  }
  auto A_ptr = std::make_shared<Matrix>(A);
  auto y_ptr = std::make_shared<Vector>(labels);
  const double inv_n = 1.0 / static_cast<double>(n);

  SmoothProblem p;
  p.id = "l2_logistic_" + std::to_string(n) + "x" + std::to_string(A.cols());
  p.dimension = static_cast<int>(A.cols());
  p.value = [A_ptr, y_ptr, ridge, inv_n](const Vector& x) {
    const Vector margins = y_ptr->array() * (*A_ptr * x).array();
    double loss = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      loss += softplus(-margins[i]);
    }
    return inv_n * loss + 0.5 * ridge * x.squaredNorm();
  };
  p.gradient = [A_ptr, y_ptr, ridge, inv_n](const Vector& x) -> Vector {
    const Vector margins = y_ptr->array() * (*A_ptr * x).array();
    Vector weights(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      weights[i] = -(*y_ptr)[i] * sigmoid(-margins[i]);
    }
    return inv_n * (A_ptr->transpose() * weights) + ridge * x;
  };
  // sigma'(t) <= 1/4 with equality at t = 0, so the Hessian is largest at
  // x = 0 and flattens to ridge*I far out.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A.transpose() * A);
  p.lipschitz = eig.eigenvalues().maxCoeff() * inv_n / 4.0 + ridge;
  p.strong_mu = ridge;

  // Damped Newton for the reference minimizer.
  Vector x = Vector::Zero(p.dimension);
  for (int iter = 0; iter < 200; ++iter) {
    const Vector g = p.gradient(x);
    if (g.norm() <= 1e-13 * std::max(1.0, x.norm())) break;
    const Vector margins = labels.array() * (A * x).array();
    Matrix hess = ridge * Matrix::Identity(p.dimension, p.dimension);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sig = sigmoid(-margins[i]);
      hess += (inv_n * sig * (1.0 - sig)) * A.row(i).transpose() * A.row(i);
    }
    const Vector step = hess.ldlt().solve(g);
    double t = 1.0;
    const double f0 = p.value(x);
    while (t > 1e-8 && p.value(x - t * step) > f0) t *= 0.5;
    x -= t * step;
  }
  p.minimizer = x;
  p.min_value = p.value(x);
  return p;
}

SmoothProblem make_random_logistic(int samples, int features, double ridge,
                                   std::uint64_t seed) {
  if (samples < 1 || features < 1) {
    throw std::invalid_argument("logistic: bad shape");
  }
  std::mt19937_64 rng(seed);
  const Matrix A = random_gaussian(samples, features, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w(features);
  for (int j = 0; j < features; ++j) w[j] = normal(rng);
  Vector labels(samples);
  for (int i = 0; i < samples; ++i) {
    const double score = A.row(i).dot(w) + 0.3 * normal(rng);
    labels[i] = score >= 0.0 ? 1.0 : -1.0;
  }
  return make_l2_logistic(A, labels, ridge);
}

Vector reference_minimizer(const CompositeProblem& p, double tol,
                           long max_iter) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("reference_minimizer: tol must be > 0");
  }
  const double s = 1.0 / p.smooth.lipschitz;
  Vector x = Vector::Zero(p.smooth.dimension);
  double residual = std::numeric_limits<double>::infinity();
  for (long it = 0; it <= max_iter; ++it) {
    const Vector u = x - s * p.smooth.gradient(x);
    const Vector px = p.reg_prox(u, s);
    residual = (x - px).norm() / s;
    if (residual <= tol) return x;
    x = px;
  }
  throw ConvergenceError(
      max_iter, residual,
      "reference_minimizer: residual " + std::to_string(residual) +
          " above tol after " + std::to_string(max_iter) + " iterations");
}

Problem problem_from_config(const ConfigMap& config) {
  const std::string kind = require_key(config, "kind");
  if (kind == "figure1") return make_figure1_quadratic();
  if (kind == "quadratic") {
    if (const auto it = config.find("eigenvalues"); it != config.end()) {
      return make_diagonal_quadratic(parse_vector_literal(it->second));
    }
    return make_random_quadratic(std::stoi(require_key(config, "dimension")),
                                 parse_double(require_key(config, "eig_min")),
                                 parse_double(require_key(config, "eig_max")),
                                 seed_or_zero(config));
  }
  if (kind == "lasso") {
    const double lam = parse_double(require_key(config, "lambda"));
    if (const auto it = config.find("matrix"); it != config.end()) {
      return make_lasso(parse_matrix_literal(it->second),
                        parse_vector_literal(require_key(config, "vector")),
                        lam);
    }
    return make_random_lasso(std::stoi(require_key(config, "rows")),
                             std::stoi(require_key(config, "cols")), lam,
                             seed_or_zero(config));
  }
  if (kind == "l2_logistic") {
    return make_random_logistic(std::stoi(require_key(config, "samples")),
                                std::stoi(require_key(config, "features")),
                                parse_double(require_key(config, "ridge")),
                                seed_or_zero(config));
  }
  throw std::invalid_argument("problem config: unknown kind '" + kind + "'");
}

Problem load_problem(const std::filesystem::path& path) {
  return problem_from_config(read_config_file(path));
}

}  // namespace nagalpha
