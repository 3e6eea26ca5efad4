#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nagalpha {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr std::string_view kVersion = "0.1.0";

/// An iterate left the finite range; carries the iteration that failed.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long k, const std::string& what)
      : std::runtime_error(what), k_(k) {}
  long iteration() const noexcept { return k_; }

 private:
  long k_;
};

/// (k-1)^(alpha-1) diverges at k = 1 for alpha < 1.
class SingularCoefficientError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// k^alpha + r k^(alpha-1) <= 0, possible for sufficiently negative r at small k.
class DegenerateDenominatorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A reference solve did not reach the requested residual within its cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(long cap, double residual, const std::string& what)
      : std::runtime_error(what), cap_(cap), residual_(residual) {}
  long cap() const noexcept { return cap_; }
  double residual() const noexcept { return residual_; }

 private:
  long cap_;
  double residual_;
};

}  // namespace nagalpha
