// Command-line front end: single runs, parameter sweeps, the property
// verification suites, the brute-force oracle suite, and trace replay.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "bpg/config.hpp"
#include "bpg/harness.hpp"
#include "bpg/trace_io.hpp"
#include "bpg/verify.hpp"

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("BPG_OUT_DIR")) return env;
  return ".";
}

void write_iterates_csv(const bpg::Trace& trace, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw bpg::ConfigError("cannot open " + path);
  const int dim = trace.iterates.empty() ? 0 : static_cast<int>(trace.iterates.front().size());
  file << "iter";
  for (int i = 0; i < dim; ++i) file << ",x" << i;
  file << "\n";
  char buf[40];
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    file << trace.records[k].iter;
    for (int i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", trace.iterates[k](i));
      file << ',' << buf;
    }
    file << "\n";
  }
}

int print_checks(const std::string& suite, const std::vector<bpg::CheckResult>& checks) {
  int failures = 0;
  for (const bpg::CheckResult& c : checks) {
    std::printf("[%s] %s/%s: value %.3g (bound %.3g)\n", c.pass ? "PASS" : "FAIL", suite.c_str(),
                c.name.c_str(), c.value, c.bound);
    if (!c.pass) ++failures;
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bregman proximal gradient solvers and benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir, axis_spec, trace_path, suite;
  int seeds = 20, threads = 0;
  std::uint64_t seed = 1;
  bool dump_iterates = false;

  CLI::App* run = app.add_subcommand("run", "execute one configured run, write trace.csv");
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--out", out_dir, "output directory (or $BPG_OUT_DIR)");
  run->add_flag("--iterates", dump_iterates, "also write iterates.csv (small dimensions)");

  CLI::App* sweep = app.add_subcommand("sweep", "samples-to-accuracy sweep over one axis");
  sweep->add_option("--config", config_path, "configuration file")->required();
  sweep->add_option("--axis", axis_spec, "axis spec, e.g. n=64,256,1024 or eps=1e-2,3e-3,1e-3")
      ->required();
  sweep->add_option("--seeds", seeds, "seeds per point (default 20)");
  sweep->add_option("--threads", threads, "worker threads (default: hardware)");
  sweep->add_option("--out", out_dir, "output directory (or $BPG_OUT_DIR)");

  CLI::App* verify = app.add_subcommand("verify", "run module property suites");
  verify->add_option("--suite", suite,
                     "one of numerics/kernels/prox/mappings/problems/solvers/harness");
  verify->add_option("--seed", seed, "suite seed (default 1)");

  CLI::App* oracle = app.add_subcommand("oracle", "run the brute-force oracle suite");
  oracle->add_option("--seed", seed, "oracle seed (default 1)");

  CLI::App* replay = app.add_subcommand("replay", "re-run a config and compare to a stored trace");
  replay->add_option("--config", config_path, "configuration file")->required();
  replay->add_option("--trace", trace_path, "stored trace CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const bpg::Config cfg = bpg::Config::parse_file(config_path);
      const bpg::RunOutput out = bpg::execute_run(cfg);
      const std::string dir = resolve_out_dir(out_dir);
      std::filesystem::create_directories(dir);
      const std::string trace_file = dir + "/trace.csv";
      bpg::emit_trace_csv(out.trace, trace_file);
      std::printf("%s\n", out.summary.c_str());
      std::printf("trace: %s (%zu records)\n", trace_file.c_str(), out.trace.records.size());
      if (dump_iterates && !out.trace.iterates.empty()) {
        write_iterates_csv(out.trace, dir + "/iterates.csv");
        std::printf("iterates: %s/iterates.csv\n", dir.c_str());
      }
      return 0;
    }

    if (sweep->parsed()) {
      const auto eq = axis_spec.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "config error: --axis expects name=v1,v2,...\n");
        return 2;
      }
      const std::string axis = axis_spec.substr(0, eq);
      std::vector<double> values;
      std::stringstream ss(axis_spec.substr(eq + 1));
      std::string item;
      while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
      if (axis != "n" && axis != "eps" && axis != "b") {
        std::fprintf(stderr, "config error: axis must be n, eps, or b\n");
        return 2;
      }
      if (values.size() < 2) {
        std::fprintf(stderr, "config error: need at least two axis values\n");
        return 2;
      }
      const bpg::Config cfg = bpg::Config::parse_file(config_path);
      const bpg::SweepResult res = bpg::sweep_samples_to_eps(cfg, axis, values, seeds, threads);
      const std::string dir = resolve_out_dir(out_dir);
      std::filesystem::create_directories(dir);
      std::ofstream file(dir + "/sweep.csv", std::ios::binary);
      file << axis << ",mean_samples_to_eps,hits,runs\n";
      for (const bpg::SweepPoint& p : res.points) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%d\n", p.axis_value,
                      p.mean_samples_to_eps, p.hits, p.runs);
        file << buf;
        std::printf("%s=%g  mean samples-to-eps %.4g  (%d/%d hits)\n", axis.c_str(), p.axis_value,
                    p.mean_samples_to_eps, p.hits, p.runs);
      }
      if (res.fit) {
        std::printf("trend: slope %.4f vs %s (R^2 %.4f)\n", res.fit->slope, res.fit->axis.c_str(),
                    res.fit->r_squared);
      }
      std::printf("sweep table: %s/sweep.csv\n", dir.c_str());
      return 0;
    }

    if (verify->parsed()) {
      int failures = 0;
      if (!suite.empty()) {
        failures = print_checks(suite, bpg::run_verify_suite(suite, seed));
      } else {
        for (const std::string& name : bpg::verify_suite_names()) {
          failures += print_checks(name, bpg::run_verify_suite(name, seed));
        }
      }
      if (failures == 0) {
        std::printf("verify: all checks passed\n");
      } else {
        std::printf("verify: %d check(s) failed\n", failures);
      }
      return failures == 0 ? 0 : 1;
    }

    if (oracle->parsed()) {
      const int failures = print_checks("oracle", bpg::oracle_suite(seed));
      return failures == 0 ? 0 : 1;
    }

    if (replay->parsed()) {
      const bpg::Config cfg = bpg::Config::parse_file(config_path);
      const bpg::RunOutput out = bpg::execute_run(cfg);
      std::ifstream stored(trace_path, std::ios::binary);
      if (!stored) {
        std::fprintf(stderr, "config error: cannot open %s\n", trace_path.c_str());
        return 2;
      }
      std::stringstream buffer;
      buffer << stored.rdbuf();
      if (bpg::trace_to_csv(out.trace) == buffer.str()) {
        std::printf("replay: byte-identical\n");
        return 0;
      }
      std::printf("replay: MISMATCH against %s\n", trace_path.c_str());
      return 1;
    }
  } catch (const bpg::ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 2;
}
