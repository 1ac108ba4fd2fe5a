#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bpg/errors.hpp"
#include "bpg/problems.hpp"
#include "bpg/solvers.hpp"

namespace bpg {

// Flat TOML-style key/value configuration: `key = value` lines, `#` comments,
// strings optionally quoted, lists comma-separated. Keys are documented in
// the README schema table.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& origin = "<stream>") {
    Config cfg;
    cfg.origin_ = origin;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
      }
      std::string key = trim(trimmed.substr(0, eq));
      std::string value = trim(trimmed.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        value = value.substr(1, value.size() - 2);
      }
      if (key.empty()) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
      }
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("config: cannot open " + path);
    return parse(file, path);
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing key `" + key + "`");
    return it->second;
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      return std::stod(it->second);
    } catch (...) {
      throw ConfigError(origin_ + ": key `" + key + "` is not a number: " + it->second);
    }
  }

  long get_long(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "auto") return -1;
    try {
      return std::stol(it->second);
    } catch (...) {
      throw ConfigError(origin_ + ": key `" + key + "` is not an integer: " + it->second);
    }
  }

  // "auto" (or absence) maps to the sentinel -1 handled by the solvers.
  double get_auto_double(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end() || it->second == "auto") return -1.0;
    try {
      return std::stod(it->second);
    } catch (...) {
      throw ConfigError(origin_ + ": key `" + key + "` is not a number: " + it->second);
    }
  }

  std::vector<double> get_list(const std::string& key) const {
    std::vector<double> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      out.push_back(std::stod(t));
    }
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }
  const std::string& origin() const { return origin_; }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return std::string(b, e);
  }

  std::map<std::string, std::string> values_;
  std::string origin_ = "<stream>";
};

// Builders shared by the CLI and tests.

inline KernelModel kernel_from_config(const Config& cfg) {
  const std::string kind = cfg.get_string("kernel", "polynomial");
  const int r = static_cast<int>(cfg.get_long("kernel_r", cfg.get_long("r", 1)));
  if (kind == "polynomial") return KernelModel::polynomial(r);
  if (kind == "quadratic") return KernelModel::quadratic();
  if (kind == "monomial") return KernelModel::monomial_only(r);
  throw ConfigError(cfg.origin() + ": unknown kernel `" + kind + "`");
}

inline Problem problem_from_config(const Config& cfg) {
  const std::string name = cfg.get_string("problem");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("problem_seed", 1));
  Problem p;
  if (name == "example1") {
    p = make_example1(static_cast<int>(cfg.get_long("r", 4)));
  } else if (name == "example2") {
    p = make_example2(static_cast<int>(cfg.get_long("r", 4)));
  } else if (name == "cubic_fs") {
    p = make_cubic_finite_sum(static_cast<int>(cfg.get_long("n", 64)),
                              static_cast<int>(cfg.get_long("dim", 4)), seed,
                              cfg.get_double("l1_weight", 0.0));
  } else if (name == "cubic_exp") {
    p = make_cubic_expectation(seed);
  } else {
    throw ConfigError(cfg.origin() + ": unknown problem `" + name + "`");
  }
  if (cfg.has("x0")) {
    const std::vector<double> coords = cfg.get_list("x0");
    if (static_cast<int>(coords.size()) != p.dim) {
      throw ConfigError(cfg.origin() + ": x0 must have " + std::to_string(p.dim) + " entries");
    }
    p.x0 = Eigen::Map<const Eigen::VectorXd>(coords.data(), coords.size());
  }
  return p;
}

inline SolverConfig solver_config_from(const Config& cfg) {
  SolverConfig sc;
  sc.lambda = cfg.get_auto_double("lambda");
  sc.eta = cfg.get_auto_double("eta");
  sc.gamma = cfg.get_auto_double("gamma");
  sc.tau = cfg.get_long("tau", -1);
  sc.b = cfg.get_long("b", -1);
  sc.S = cfg.get_long("S", -1);
  sc.epsilon = cfg.get_double("epsilon", 1e-3);
  sc.q = cfg.get_double("q", 0.1);
  sc.max_total_samples = cfg.get_long("max_total_samples", 200'000'000L);
  sc.max_iter = cfg.get_long("max_iter", 100000);
  sc.seed = static_cast<std::uint64_t>(cfg.get_long("seed", 0));
  sc.delta_psi = cfg.get_double("delta_psi", -1.0);
  const std::string diag = cfg.get_string("diagnostics", "census");
  if (diag == "none" || diag == "0") {
    sc.diagnostics = SolverConfig::Diagnostics::None;
  } else if (diag == "mapping") {
    sc.diagnostics = SolverConfig::Diagnostics::Mapping;
  } else if (diag == "census" || diag == "1") {
    sc.diagnostics = SolverConfig::Diagnostics::Census;
  } else {
    throw ConfigError(cfg.origin() + ": unknown diagnostics level `" + diag + "`");
  }
  const std::string sel = cfg.get_string("output_selection", "interior");
  if (sel == "all" || sel == "uniform_all") {
    sc.output_selection = SolverConfig::OutputSelection::UniformAll;
  } else if (sel == "interior" || sel == "uniform_interior") {
    sc.output_selection = SolverConfig::OutputSelection::UniformInteriorDeltaQuarter;
  } else {
    throw ConfigError(cfg.origin() + ": unknown output_selection `" + sel + "`");
  }
  return sc;
}

}  // namespace bpg
