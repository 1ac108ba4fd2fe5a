#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bpg/errors.hpp"
#include "bpg/solvers.hpp"

namespace bpg {

inline constexpr const char* kTraceCsvHeader =
    "iter,s,k,psi,norm_G,norm_D,norm_restricted_G,step,dist_boundary,samples,"
    "flag_boundary,flag_prox_boundary";

namespace detail {
// 17 significant digits round-trip doubles exactly; absent (NaN) -> empty.
inline std::string fmt_field(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
inline double parse_field(const std::string& s) {
  if (s.empty()) return kNaN;
  return std::stod(s);
}
}  // namespace detail

inline std::string trace_to_csv(const Trace& trace) {
  std::string out(kTraceCsvHeader);
  out += '\n';
  for (const IterRecord& r : trace.records) {
    out += std::to_string(r.iter);
    out += ',';
    out += std::to_string(r.s);
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += detail::fmt_field(r.psi);
    out += ',';
    out += detail::fmt_field(r.norm_G);
    out += ',';
    out += detail::fmt_field(r.norm_D);
    out += ',';
    out += detail::fmt_field(r.norm_restricted_G);
    out += ',';
    out += detail::fmt_field(r.step);
    out += ',';
    out += detail::fmt_field(r.dist_boundary);
    out += ',';
    out += std::to_string(r.samples);
    out += ',';
    out += r.flag_boundary ? "1" : "0";
    out += ',';
    out += r.flag_prox_boundary ? "1" : "0";
    out += '\n';
  }
  return out;
}

inline void emit_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("emit_trace_csv: cannot open " + path);
  file << trace_to_csv(trace);
  if (!file) throw ConfigError("emit_trace_csv: write failed for " + path);
}

inline std::vector<IterRecord> parse_trace_csv(std::istream& in) {
  std::vector<IterRecord> records;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("parse_trace_csv: empty input");
  if (line != kTraceCsvHeader) throw ConfigError("parse_trace_csv: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    while (fields.size() < 12) fields.emplace_back();
    IterRecord r;
    r.iter = std::stol(fields[0]);
    r.s = std::stoi(fields[1]);
    r.k = std::stoi(fields[2]);
    r.psi = detail::parse_field(fields[3]);
    r.norm_G = detail::parse_field(fields[4]);
    r.norm_D = detail::parse_field(fields[5]);
    r.norm_restricted_G = detail::parse_field(fields[6]);
    r.step = detail::parse_field(fields[7]);
    r.dist_boundary = detail::parse_field(fields[8]);
    r.samples = std::stol(fields[9]);
    r.flag_boundary = fields[10] == "1";
    r.flag_prox_boundary = fields[11] == "1";
    records.push_back(r);
  }
  return records;
}

inline std::vector<IterRecord> parse_trace_csv_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("parse_trace_csv: cannot open " + path);
  return parse_trace_csv(file);
}

}  // namespace bpg
