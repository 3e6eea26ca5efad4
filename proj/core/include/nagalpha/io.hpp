#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nagalpha/common.hpp"

namespace nagalpha {

/// One trace row. f_gap is f(x_k) - f(x*) (the composite objective gap for
/// proximal variants); grad_norm is ||grad f(y_k)|| or ||G_s(y_k)||;
/// accepted_z records whether the monotone comparison kept the fresh
/// forward-backward point. Energy columns are 0 where the energy is not
/// defined (k = 0, and k = 1 for alpha < 1).
struct IterationRecord {
  long k = 0;
  double f_gap = 0.0;
  double grad_norm = 0.0;
  double coeff = 0.0;
  double lyap_total = 0.0;
  double lyap_pot = 0.0;
  double lyap_mix = 0.0;
  int accepted_z = 1;
};

/// Trace header metadata, written as `# key=value` comment lines.
struct TraceMetadata {
  std::string problem;
  std::string variant;
  double alpha = 0.0;
  double r = 0.0;
  double s = 0.0;
  std::uint64_t seed = 0;
  std::string version{kVersion};
  double f_star = 0.0;
  double lipschitz = 0.0;
  double mu = 0.0;
  std::map<std::string, std::string> extra;  // unknown keys, preserved on read
};

/// Shortest round-trip decimal rendering (std::to_chars).
std::string format_double(double value);
double parse_double(std::string_view text);

void write_trace(const std::vector<IterationRecord>& records,
                 const TraceMetadata& meta, std::ostream& out);

/// Atomic variant: writes `<path>.tmp` then renames.
void write_trace_file(const std::vector<IterationRecord>& records,
                      const TraceMetadata& meta,
                      const std::filesystem::path& path);

std::pair<std::vector<IterationRecord>, TraceMetadata> read_trace(
    std::istream& in);
std::pair<std::vector<IterationRecord>, TraceMetadata> read_trace_file(
    const std::filesystem::path& path);

/// Plain `key = value` configuration text: '#' starts a comment, blank lines
/// are skipped, later keys overwrite earlier ones.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap read_config_file(const std::filesystem::path& path);

/// "1,0,2.5" -> vector; "2,0;0,1" -> row-major matrix.
Vector parse_vector_literal(const std::string& text);
Matrix parse_matrix_literal(const std::string& text);

}  // namespace nagalpha
