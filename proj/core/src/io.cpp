#include "nagalpha/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace nagalpha {

namespace {

constexpr const char* kHeader =
    "k,f_gap,grad_norm,coeff,lyap_total,lyap_pot,lyap_mix,accepted_z";

std::string trim(std::string_view sv) {
  const char* ws = " \t\r\n";
  const auto begin = sv.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = sv.find_last_not_of(ws);
  return std::string(sv.substr(begin, end - begin + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

void put_meta(std::ostream& out, const std::string& key,
              const std::string& value) {
  out << "# " << key << '=' << value << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("io: malformed real value '" +
                                std::string(text) + "'");
  }
  return value;
}

void write_trace(const std::vector<IterationRecord>& records,
                 const TraceMetadata& meta, std::ostream& out) {
  if (records.empty()) {
    throw std::invalid_argument("io: refusing to write an empty trace");
  }
  put_meta(out, "problem", meta.problem);
  put_meta(out, "variant", meta.variant);
  put_meta(out, "alpha", format_double(meta.alpha));
  put_meta(out, "r", format_double(meta.r));
  put_meta(out, "s", format_double(meta.s));
  put_meta(out, "seed", std::to_string(meta.seed));
  put_meta(out, "version", meta.version);
  put_meta(out, "f_star", format_double(meta.f_star));
  put_meta(out, "L", format_double(meta.lipschitz));
  put_meta(out, "mu", format_double(meta.mu));
  for (const auto& [key, value] : meta.extra) put_meta(out, key, value);
  out << kHeader << '\n';
  for (const auto& rec : records) {
    out << rec.k << ',' << format_double(rec.f_gap) << ','
        << format_double(rec.grad_norm) << ',' << format_double(rec.coeff)
        << ',' << format_double(rec.lyap_total) << ','
        << format_double(rec.lyap_pot) << ',' << format_double(rec.lyap_mix)
        << ',' << rec.accepted_z << '\n';
  }
  if (!out) throw std::runtime_error("io: trace stream write failed");
}

void write_trace_file(const std::vector<IterationRecord>& records,
                      const TraceMetadata& meta,
                      const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("io: cannot open '" + tmp.string() +
                               "' for writing");
    }
    write_trace(records, meta, out);
  }
  std::filesystem::rename(tmp, path);
}

std::pair<std::vector<IterationRecord>, TraceMetadata> read_trace(
    std::istream& in) {
  TraceMetadata meta;
  std::vector<IterationRecord> records;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(1, eq - 1));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "problem") meta.problem = value;
      else if (key == "variant") meta.variant = value;
      else if (key == "alpha") meta.alpha = parse_double(value);
      else if (key == "r") meta.r = parse_double(value);
      else if (key == "s") meta.s = parse_double(value);
      else if (key == "seed") meta.seed = std::stoull(value);
      else if (key == "version") meta.version = value;
      else if (key == "f_star") meta.f_star = parse_double(value);
      else if (key == "L") meta.lipschitz = parse_double(value);
      else if (key == "mu") meta.mu = parse_double(value);
      else meta.extra[key] = value;
      continue;
    }
    if (!saw_header) {
      if (line != kHeader) {
        throw std::runtime_error("io: malformed trace header '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 8) {
      throw std::runtime_error("io: expected 8 fields, got " +
                               std::to_string(fields.size()));
    }
    IterationRecord rec;
    rec.k = std::stol(fields[0]);
    rec.f_gap = parse_double(fields[1]);
    rec.grad_norm = parse_double(fields[2]);
    rec.coeff = parse_double(fields[3]);
    rec.lyap_total = parse_double(fields[4]);
    rec.lyap_pot = parse_double(fields[5]);
    rec.lyap_mix = parse_double(fields[6]);
    rec.accepted_z = std::stoi(fields[7]);
    if (!records.empty() && rec.k <= records.back().k) {
      throw std::runtime_error("io: non-monotone iteration index at k=" +
                               std::to_string(rec.k));
    }
    records.push_back(rec);
  }
  if (!saw_header) throw std::runtime_error("io: trace has no header line");
  return {std::move(records), std::move(meta)};
}

std::pair<std::vector<IterationRecord>, TraceMetadata> read_trace_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("io: cannot open '" + path.string() + "'");
  }
  return read_trace(in);
}

ConfigMap parse_config(std::istream& in) {
  ConfigMap map;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected 'key = value', got '" +
                                  stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: empty key in '" + stripped + "'");
    }
    map[key] = value;
  }
  return map;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open '" + path.string() + "'");
  }
  return parse_config(in);
}

Vector parse_vector_literal(const std::string& text) {
  const auto parts = split(text, ',');
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = parse_double(trim(parts[i]));
  }
  return v;
}

Matrix parse_matrix_literal(const std::string& text) {
  const auto rows = split(text, ';');
  if (rows.empty()) throw std::invalid_argument("config: empty matrix literal");
  std::vector<Vector> parsed;
  parsed.reserve(rows.size());
  for (const auto& row : rows) parsed.push_back(parse_vector_literal(row));
  const Eigen::Index cols = parsed.front().size();
  Matrix m(static_cast<Eigen::Index>(parsed.size()), cols);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].size() != cols) {
      throw std::invalid_argument("config: ragged matrix literal");
    }
    m.row(static_cast<Eigen::Index>(i)) = parsed[i].transpose();
  }
  return m;
}

}  // namespace nagalpha
