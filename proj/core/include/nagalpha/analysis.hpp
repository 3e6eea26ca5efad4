#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nagalpha/lyapunov.hpp"
#include "nagalpha/solvers.hpp"

namespace nagalpha {

/// Least-squares line through (log k, log gap); slope estimates the decay
/// exponent of the objective gap.
struct RateFit {
  long k_lo = 0;
  long k_hi = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

/// The window [k_lo, k_hi] contains a zero/negative gap or too few points.
class UnusableWindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw log-log fit over points with k in [k_lo, k_hi]. Requires k_lo >= 2 and
/// k_hi > 2*k_lo; throws UnusableWindowError on nonpositive gaps.
RateFit fit_rate(const std::vector<std::pair<long, double>>& gaps, long k_lo,
                 long k_hi);

/// Running-maximum envelope over dyadic blocks [k_lo 2^j, k_lo 2^(j+1)):
/// momentum traces oscillate, and the rate bound controls the envelope.
std::vector<std::pair<long, double>> dyadic_envelope(
    const std::vector<std::pair<long, double>>& gaps, long k_lo, long k_hi);

/// Envelope fit with the window auto-shrunk to gaps above `floor`; the
/// shrunk window must still span at least one decade.
RateFit fit_rate_envelope(const std::vector<std::pair<long, double>>& gaps,
                          long k_lo, long k_hi, double floor);

std::vector<std::pair<long, double>> gaps_of(
    const std::vector<IterationRecord>& records);

struct AlphaComparison {
  double alpha = 0.0;
  double r = 0.0;
  double gap_at_probe = 0.0;
  bool diverged = false;
};

/// Runs the variant once per distinct alpha (duplicates collapse) with
/// r = r_rule(alpha), reporting the objective gap at k_probe. Divergent runs
/// are flagged and excluded from ordering checks. Results are ordered by
/// alpha, then r.
std::vector<AlphaComparison> compare_alphas(
    const Problem& problem, Variant variant, const std::vector<double>& alphas,
    const std::function<double(double)>& r_rule, double s, long k_probe,
    const Vector& x0, Stepping stepping = Stepping::two_step);

/// True when every non-divergent consecutive pair has the larger alpha
/// strictly ahead (smaller gap).
bool ordered_by_alpha(const std::vector<AlphaComparison>& rows);

struct Certificate {
  bool certifiable = false;  // r > 2*alpha and s <= 1/L
  bool k_found = false;
  long K = -1;
  bool bound_ok = false;
  long first_bound_violation_k = -1;
  bool monotone_ok = true;
  long first_monotone_violation_k = -1;
  long inequality_violations = 0;
  long floor_truncated_at = -1;  // first k excluded as rounding-dominated
  bool pass = false;
};

/// Scalar-level certificate: detect_K on the recorded energies (above the
/// rounding floor), the pointwise rate bound
///   gap(k) <= E(K) / (s k^alpha (k^alpha + r k^(alpha-1))) + 1e-12 * scale,
/// and the exact objective audit for monotone variants. Everything here is
/// re-checkable from a written trace alone.
Certificate certify_records(const std::vector<IterationRecord>& records,
                            double alpha, double r, double s, double f_star,
                            bool monotone);

/// Full certificate: certify_records plus the along-trace inequality checker.
/// Non-certifiable configurations return a marker and assert nothing.
Certificate certify(const Trace& trace, const Problem& problem,
                    const SolverConfig& config);

}  // namespace nagalpha
