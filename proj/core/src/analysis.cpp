#include "nagalpha/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nagalpha {

RateFit fit_rate(const std::vector<std::pair<long, double>>& gaps, long k_lo,
                 long k_hi) {
  if (k_lo < 2) throw std::invalid_argument("fit_rate: k_lo must be >= 2");
  if (k_hi <= 2 * k_lo) {
    throw std::invalid_argument("fit_rate: k_hi must exceed 2*k_lo");
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [k, gap] : gaps) {
    if (k < k_lo || k > k_hi) continue;
    if (!(gap > 0.0)) {
      throw UnusableWindowError("fit_rate: nonpositive gap at k = " +
                                std::to_string(k));
    }
    pts.emplace_back(std::log(static_cast<double>(k)), std::log(gap));
  }
  if (pts.size() < 2) {
    throw UnusableWindowError("fit_rate: fewer than 2 points in window");
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : pts) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= static_cast<double>(pts.size());
  mean_y /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (!(sxx > 0.0)) {
    throw UnusableWindowError("fit_rate: degenerate abscissa in window");
  }
  RateFit fit;
  fit.k_lo = k_lo;
  fit.k_hi = k_hi;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss = 0.0;
  for (const auto& [x, y] : pts) {
    const double resid = y - (fit.intercept + fit.slope * x);
    ss += resid * resid;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(pts.size()));
  return fit;
}

std::vector<std::pair<long, double>> dyadic_envelope(
    const std::vector<std::pair<long, double>>& gaps, long k_lo, long k_hi) {
  std::vector<std::pair<long, double>> env;
  long block_lo = k_lo;
  while (block_lo <= k_hi) {
    const long block_hi = std::min(k_hi, 2 * block_lo - 1);
    long best_k = -1;
    double best_gap = -std::numeric_limits<double>::infinity();
    for (const auto& [k, gap] : gaps) {
      if (k < block_lo || k > block_hi) continue;
      if (gap > best_gap) {
        best_gap = gap;
        best_k = k;
      }
    }
    if (best_k >= 0) env.emplace_back(best_k, best_gap);
    block_lo = 2 * block_lo;
  }
  return env;
}

RateFit fit_rate_envelope(const std::vector<std::pair<long, double>>& gaps,
                          long k_lo, long k_hi, double floor) {
  long shrunk_hi = k_lo - 1;
  for (const auto& [k, gap] : gaps) {
    if (k < k_lo || k > k_hi) continue;
    if (gap <= floor) break;  // rounding-dominated tail
    shrunk_hi = std::max(shrunk_hi, k);
  }
  if (shrunk_hi < 10 * k_lo) {
    throw UnusableWindowError(
        "fit_rate_envelope: window above the rounding floor spans less than "
        "one decade");
  }
  const auto env = dyadic_envelope(gaps, k_lo, shrunk_hi);
  return fit_rate(env, k_lo, shrunk_hi);
}

std::vector<std::pair<long, double>> gaps_of(
    const std::vector<IterationRecord>& records) {
  std::vector<std::pair<long, double>> out;
  out.reserve(records.size());
  for (const auto& rec : records) out.emplace_back(rec.k, rec.f_gap);
  return out;
}

std::vector<AlphaComparison> compare_alphas(
    const Problem& problem, Variant variant, const std::vector<double>& alphas,
    const std::function<double(double)>& r_rule, double s, long k_probe,
    const Vector& x0, Stepping stepping) {
  std::set<double> distinct(alphas.begin(), alphas.end());
  std::vector<AlphaComparison> rows;
  rows.reserve(distinct.size());
  for (const double alpha : distinct) {
    AlphaComparison row;
    row.alpha = alpha;
    row.r = r_rule(alpha);
    SolverConfig config;
    config.params = {alpha, row.r};
    config.step_s = s;
    config.max_iter = k_probe;
    config.variant = variant;
    config.stepping = stepping;
    try {
      const Trace trace = run(problem, config, x0);
      row.gap_at_probe = trace.records.back().f_gap;
    } catch (const DivergenceError&) {
      row.diverged = true;
      row.gap_at_probe = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

bool ordered_by_alpha(const std::vector<AlphaComparison>& rows) {
  const AlphaComparison* prev = nullptr;
  for (const auto& row : rows) {
    if (row.diverged) continue;
    if (prev && !(row.gap_at_probe < prev->gap_at_probe)) return false;
    prev = &row;
  }
  return true;
}

Certificate certify_records(const std::vector<IterationRecord>& records,
                            double alpha, double r, double s, double f_star,
                            bool monotone) {
  Certificate cert;
  cert.certifiable = r > 2.0 * alpha && s > 0.0;
  if (!cert.certifiable) return cert;

  const double floor = rounding_floor(f_star);
  const long first_defined = alpha < 1.0 ? 2 : 1;
  std::vector<std::pair<long, double>> energies;
  std::vector<const IterationRecord*> usable;
  for (const auto& rec : records) {
    if (rec.k < first_defined) continue;
    if (rec.f_gap < floor) {
      cert.floor_truncated_at = rec.k;
      break;
    }
    energies.emplace_back(rec.k, rec.lyap_total);
    usable.push_back(&rec);
  }

  if (energies.size() >= 10) {
    const auto K = detect_K(energies, 1e-12);
    if (K) {
      cert.k_found = true;
      cert.K = *K;
    }
  }

  if (cert.k_found) {
    double energy_at_K = 0.0;
    for (const auto& [k, e] : energies) {
      if (k == cert.K) {
        energy_at_K = e;
        break;
      }
    }
    cert.bound_ok = true;
    for (const IterationRecord* rec : usable) {
      if (rec->k < cert.K) continue;
      const double bound =
          energy_at_K / (s * potential_coeff(rec->k, alpha, r));
      const double scale =
          std::max({1.0, std::abs(rec->f_gap + f_star), std::abs(f_star)});
      if (rec->f_gap > bound + 1e-12 * scale) {
        cert.bound_ok = false;
        cert.first_bound_violation_k = rec->k;
        break;
      }
    }
  }

  if (monotone) {
    // Exact by selection; no tolerance.
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
      if (records[i + 1].f_gap > records[i].f_gap) {
        cert.monotone_ok = false;
        cert.first_monotone_violation_k = records[i + 1].k;
        break;
      }
    }
  }

  cert.pass = cert.k_found && cert.bound_ok && cert.monotone_ok;
  return cert;
}

Certificate certify(const Trace& trace, const Problem& problem,
                    const SolverConfig& config) {
  const double critical = 1.0 / smooth_part(problem).lipschitz;
  Certificate cert = certify_records(
      trace.records, config.params.alpha, config.params.r, config.step_s,
      objective_min(problem), is_monotone(config.variant));
  if (config.step_s > critical) {
    cert.certifiable = false;
    cert.pass = false;
    return cert;
  }
  if (!cert.certifiable) return cert;

  const InequalityReport report =
      check_fundamental_inequalities(trace, problem, config);
  cert.inequality_violations =
      report.violations + report.monotone_violations;
  cert.pass = cert.pass && cert.inequality_violations == 0;
  return cert;
}

}  // namespace nagalpha
