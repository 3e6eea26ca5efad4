#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nagalpha/analysis.hpp"
#include "nagalpha/lyapunov.hpp"
#include "nagalpha/problems.hpp"
#include "nagalpha/solvers.hpp"

namespace {

using namespace nagalpha;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertFailure = 2;

double resolve_step(const std::string& text, const Problem& problem) {
  if (text == "critical") return 1.0 / smooth_part(problem).lipschitz;
  return parse_double(text);
}

std::function<double(double)> parse_r_rule(std::string rule) {
  rule.erase(std::remove_if(rule.begin(), rule.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             rule.end());
  const auto a_pos = rule.find('a');
  if (a_pos == std::string::npos) {
    const double value = parse_double(rule);
    return [value](double) { return value; };
  }
  const std::string pre = rule.substr(0, a_pos);
  std::string post = rule.substr(a_pos + 1);
  const double scale = pre.empty() ? 1.0 : parse_double(pre);
  if (!post.empty() && post.front() == '+') post.erase(post.begin());
  const double offset = post.empty() ? 0.0 : parse_double(post);
  return [scale, offset](double alpha) { return scale * alpha + offset; };
}

std::string run_stem(const std::string& problem, const SolverConfig& config) {
  std::ostringstream os;
  os << problem << '_' << variant_name(config.variant) << "_a"
     << format_double(config.params.alpha) << "_r"
     << format_double(config.params.r) << "_s"
     << format_double(config.step_s);
  return os.str();
}

struct RunResult {
  SolverConfig config;
  std::string trace_file;
  bool diverged = false;
  long diverged_at = -1;
  double final_gap = 0.0;
  double probe_gap = 0.0;
  bool certified_requested = false;
  Certificate cert;
  std::optional<double> slope;
  std::string slope_note;
};

enum class CertOutcome { not_requested, non_certifiable, pass, fail };

CertOutcome outcome_of(const RunResult& res) {
  if (!res.certified_requested || res.diverged) {
    return CertOutcome::not_requested;
  }
  if (!res.cert.certifiable) return CertOutcome::non_certifiable;
  return res.cert.pass ? CertOutcome::pass : CertOutcome::fail;
}

int cmd_run(const std::string& problem_arg, bool figure1,
            const std::string& variant_arg, std::vector<double> alphas,
            const std::vector<double>& r_list, const std::string& r_rule_arg,
            const std::string& s_arg, long iters, const std::string& out_dir,
            const std::string& x0_arg, bool certify_flag, bool fit_flag,
            long k_probe, int workers, bool phase_space) {
  std::uint64_t problem_seed = 0;
  Problem problem = make_figure1_quadratic();
  if (!figure1) {
    const ConfigMap config_map = read_config_file(problem_arg);
    if (const auto it = config_map.find("seed"); it != config_map.end()) {
      problem_seed = std::stoull(it->second);
    }
    problem = problem_from_config(config_map);
  }
  Variant variant = variant_from_name(variant_arg);
  if (is_proximal(variant) && !is_composite(problem)) {
    problem = with_zero_regularizer(smooth_part(problem));
  }
  if (!is_proximal(variant) && is_composite(problem)) {
    std::cerr << "error: variant " << variant_name(variant)
              << " cannot run on a composite problem\n";
    return kExitUsage;
  }

  const double s = resolve_step(s_arg, problem);
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  std::vector<SolverConfig> sweep;
  for (const double alpha : alphas) {
    std::vector<double> rs = r_list;
    if (rs.empty()) rs.push_back(parse_r_rule(r_rule_arg)(alpha));
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    for (const double r : rs) {
      SolverConfig config;
      config.params = {alpha, r};
      config.step_s = s;
      config.max_iter = iters;
      config.variant = variant;
      config.stepping = phase_space ? Stepping::phase_space : Stepping::two_step;
      sweep.push_back(config);
    }
  }
  if (sweep.empty()) {
    std::cerr << "error: empty sweep (need at least one alpha)\n";
    return kExitUsage;
  }
  std::cout << "sweep: " << sweep.size() << " run(s), problem="
            << problem_id(problem) << ", variant=" << variant_name(variant)
            << ", s=" << format_double(s) << ", iters=" << iters << "\n";

  const Vector x0 = x0_arg.empty()
                        ? Vector(Vector::Ones(smooth_part(problem).dimension))
                        : parse_vector_literal(x0_arg);
  std::filesystem::create_directories(out_dir);

  const long probe = std::min(k_probe, iters);
  std::vector<RunResult> results(sweep.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  const auto worker = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= sweep.size() || failed.load()) break;
      RunResult& res = results[idx];
      res.config = sweep[idx];
      res.certified_requested = certify_flag;
      try {
        const Trace trace = run(problem, res.config, x0);
        const std::string stem = run_stem(problem_id(problem), res.config);
        const std::filesystem::path path =
            std::filesystem::path(out_dir) / (stem + ".csv");
        write_trace_file(trace.records,
                         make_metadata(problem, res.config, problem_seed),
                         path);
        res.trace_file = path.filename().string();
        res.final_gap = trace.records.back().f_gap;
        res.probe_gap = probe < static_cast<long>(trace.records.size())
                            ? trace.records[probe].f_gap
                            : res.final_gap;
        if (certify_flag) res.cert = certify(trace, problem, res.config);
        if (fit_flag) {
          try {
            const RateFit fit = fit_rate_envelope(
                gaps_of(trace.records), 100, iters,
                rounding_floor(objective_min(problem)));
            res.slope = fit.slope;
          } catch (const UnusableWindowError& e) {
            res.slope_note = e.what();
          }
        }
      } catch (const DivergenceError& e) {
        res.diverged = true;
        res.diverged_at = e.iteration();
      } catch (const std::exception& e) {
        std::scoped_lock lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
        break;
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(workers, static_cast<int>(sweep.size())));
  std::vector<std::thread> threads;
  for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  if (failed.load()) {
    std::cerr << "error: " << first_error << "\n";
    return kExitUsage;
  }

  // Summary, assembled in sweep order.
  std::ostringstream summary;
  summary << "# problem=" << problem_id(problem) << "\n# variant="
          << variant_name(variant) << "\n# s=" << format_double(s)
          << "\n# version=" << kVersion << "\n";
  summary << "alpha,r,iters,final_gap,probe_gap,K,certified,slope,trace\n";
  bool any_cert_failed = false;
  for (const auto& res : results) {
    const CertOutcome outcome = outcome_of(res);
    if (outcome == CertOutcome::fail) any_cert_failed = true;
    summary << format_double(res.config.params.alpha) << ','
            << format_double(res.config.params.r) << ',' << iters << ',';
    if (res.diverged) {
      summary << "diverged@" << res.diverged_at << ",,,,";
    } else {
      summary << format_double(res.final_gap) << ','
              << format_double(res.probe_gap) << ',';
      summary << (res.cert.k_found ? std::to_string(res.cert.K) : "") << ',';
      switch (outcome) {
        case CertOutcome::not_requested: summary << ""; break;
        case CertOutcome::non_certifiable: summary << "non-certifiable"; break;
        case CertOutcome::pass: summary << "pass"; break;
        case CertOutcome::fail: summary << "fail"; break;
      }
      summary << ',';
      if (res.slope) summary << format_double(*res.slope);
    }
    summary << ',' << res.trace_file << '\n';
  }
  const std::string summary_text = summary.str();
  {
    const std::filesystem::path path =
        std::filesystem::path(out_dir) / "summary.csv";
    const std::filesystem::path tmp = path.string() + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot write " << tmp << "\n";
      return kExitUsage;
    }
    out << summary_text;
    out.close();
    std::filesystem::rename(tmp, path);
  }
  std::cout << summary_text;

  // Qualitative ordering note across the alpha sweep.
  if (alphas.size() >= 2 && r_list.empty()) {
    bool ordered = true;
    const RunResult* prev = nullptr;
    for (const auto& res : results) {
      if (res.diverged) continue;
      if (prev && !(res.probe_gap < prev->probe_gap)) ordered = false;
      prev = &res;
    }
    std::cout << "ordering at k=" << probe
              << ": gap strictly decreases with alpha: "
              << (ordered ? "yes" : "no") << "\n";
  }
  for (const auto& res : results) {
    if (res.diverged) {
      std::cerr << "note: run a=" << format_double(res.config.params.alpha)
                << " r=" << format_double(res.config.params.r)
                << " diverged at k=" << res.diverged_at << "\n";
    } else if (outcome_of(res) == CertOutcome::non_certifiable) {
      std::cout << "note: a=" << format_double(res.config.params.alpha)
                << " r=" << format_double(res.config.params.r)
                << " is non-certifiable (needs r > 2*alpha and s <= 1/L); "
                   "run executed, certification skipped\n";
    }
  }
  return any_cert_failed ? kExitCertFailure : kExitOk;
}

int cmd_check(const std::string& trace_arg) {
  const auto [records, meta] = read_trace_file(trace_arg);
  if (!(meta.alpha > 0.0) || !(meta.s > 0.0) || meta.variant.empty()) {
    std::cerr << "error: trace metadata incomplete (need alpha, r, s, "
                 "variant, f_star)\n";
    return kExitUsage;
  }
  const bool monotone = is_monotone(variant_from_name(meta.variant));
  Certificate cert = certify_records(records, meta.alpha, meta.r, meta.s,
                                     meta.f_star, monotone);
  if (meta.lipschitz > 0.0 && meta.s > 1.0 / meta.lipschitz) {
    cert.certifiable = false;
    cert.pass = false;
  }
  if (!cert.certifiable) {
    std::cout << "non-certifiable: needs r > 2*alpha and s <= 1/L\n";
    return kExitOk;
  }
  std::cout << "K=" << (cert.k_found ? std::to_string(cert.K) : "none")
            << " bound=" << (cert.bound_ok ? "ok" : "violated")
            << " monotone=" << (cert.monotone_ok ? "ok" : "violated");
  if (cert.first_bound_violation_k >= 0) {
    std::cout << " first_bound_violation_k=" << cert.first_bound_violation_k;
  }
  if (cert.first_monotone_violation_k >= 0) {
    std::cout << " first_monotone_violation_k="
              << cert.first_monotone_violation_k;
  }
  if (cert.floor_truncated_at >= 0) {
    std::cout << " floor_truncated_at=" << cert.floor_truncated_at;
  }
  std::cout << "\ncertificate: " << (cert.pass ? "pass" : "fail") << "\n";
  return cert.pass ? kExitOk : kExitCertFailure;
}

int cmd_fit(const std::string& trace_arg, const std::string& window_arg,
            bool envelope) {
  const auto [records, meta] = read_trace_file(trace_arg);
  long k_lo = 100;
  long k_hi = records.empty() ? 0 : records.back().k;
  if (!window_arg.empty()) {
    const auto colon = window_arg.find(':');
    if (colon == std::string::npos) {
      std::cerr << "error: --window expects LO:HI\n";
      return kExitUsage;
    }
    k_lo = std::stol(window_arg.substr(0, colon));
    k_hi = std::stol(window_arg.substr(colon + 1));
  }
  try {
    const RateFit fit =
        envelope ? fit_rate_envelope(gaps_of(records), k_lo, k_hi,
                                     rounding_floor(meta.f_star))
                 : fit_rate(gaps_of(records), k_lo, k_hi);
    std::cout << "window=[" << fit.k_lo << ',' << fit.k_hi << "]"
              << " slope=" << format_double(fit.slope)
              << " intercept=" << format_double(fit.intercept)
              << " residual_rms=" << format_double(fit.residual_rms) << "\n";
  } catch (const UnusableWindowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllable-momentum forward-backward solvers with "
               "convergence certificates"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a sweep and write traces");
  bool figure1 = false;
  std::string problem_file, variant_arg = "nag", s_arg = "critical";
  std::string r_rule_arg = "2a+1", out_dir = "traces", x0_arg;
  std::vector<double> alphas, r_list;
  long iters = 10000, k_probe = 1000;
  int workers = 1;
  bool certify_flag = false, fit_flag = false, phase_space = false;
  run_cmd->add_flag("--figure1", figure1,
                    "Use the built-in ill-conditioned 2-D quadratic");
  run_cmd->add_option("--problem", problem_file,
                      "Problem configuration file (key = value)");
  run_cmd->add_option("--variant", variant_arg,
                      "nag | m-nag | fista | m-fista");
  run_cmd->add_option("--alpha", alphas, "Momentum powers (comma separated)")
      ->required()
      ->delimiter(',');
  run_cmd->add_option("--r", r_list, "Explicit r values (crossed with alpha)")
      ->delimiter(',');
  run_cmd->add_option("--r-rule", r_rule_arg,
                      "Rule mapping alpha to r, e.g. 2a+1");
  run_cmd->add_option("--s", s_arg, "Step size, or 'critical' for 1/L");
  run_cmd->add_option("--iters", iters, "Iteration budget");
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--x0", x0_arg, "Initial point (comma separated)");
  run_cmd->add_flag("--certify", certify_flag,
                    "Certify each run (exit 2 on failure)");
  run_cmd->add_flag("--fit", fit_flag, "Envelope rate fit per run");
  run_cmd->add_option("--k-probe", k_probe, "Gap probe iteration");
  run_cmd->add_option("--workers", workers, "Concurrent runs");
  run_cmd->add_flag("--phase-space", phase_space,
                    "Phase-space stepping (nag only)");

  // check
  auto* check_cmd =
      app.add_subcommand("check", "Re-certify a written trace file");
  std::string check_trace;
  check_cmd->add_option("trace", check_trace, "Trace file")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Log-log rate fit on a trace");
  std::string fit_trace, window_arg;
  bool envelope = false;
  fit_cmd->add_option("trace", fit_trace, "Trace file")->required();
  fit_cmd->add_option("--window", window_arg, "Fit window LO:HI");
  fit_cmd->add_flag("--envelope", envelope, "Fit the dyadic-block envelope");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;  // --help exits 0
  }

  try {
    if (run_cmd->parsed()) {
      if (figure1 == !problem_file.empty()) {
        std::cerr << "error: give exactly one of --figure1 / --problem\n";
        return kExitUsage;
      }
      return cmd_run(problem_file, figure1, variant_arg, alphas, r_list,
                     r_rule_arg, s_arg, iters, out_dir, x0_arg, certify_flag,
                     fit_flag, k_probe, workers, phase_space);
    }
    if (check_cmd->parsed()) return cmd_check(check_trace);
    if (fit_cmd->parsed()) return cmd_fit(fit_trace, window_arg, envelope);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
