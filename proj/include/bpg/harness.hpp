#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bpg/config.hpp"
#include "bpg/solvers.hpp"
#include "bpg/trace_io.hpp"
#include "bpg/trend.hpp"

namespace bpg {

// Bounded worker pool for seed ensembles and parameter sweeps. Each job owns
// its stream and trace; aggregation happens after the joins.
inline void parallel_for_jobs(std::size_t n_jobs, const std::function<void(std::size_t)>& body,
                              int threads = 0) {
  if (threads <= 0) {
    if (const char* env = std::getenv("BPG_THREADS")) threads = std::atoi(env);
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 2;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int used = std::min<std::size_t>(threads, n_jobs);
  pool.reserve(used);
  for (int t = 0; t < used; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_jobs) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct RunOutput {
  Trace trace;
  std::string summary;
};

// Executes one configured run and returns its trace.
inline RunOutput execute_run(const Config& cfg) {
  const Problem problem = problem_from_config(cfg);
  const KernelModel kernel =
      cfg.has("kernel") ? kernel_from_config(cfg) : problem.kernel;
  SolverConfig sc = solver_config_from(cfg);
  const std::string algorithm = cfg.get_string("algorithm", "bpg");

  RunOutput out;
  char buf[256];
  if (algorithm == "bpg") {
    const double lambda =
        sc.lambda > 0 ? sc.lambda : 1.0 / (2.0 * problem.smad_L);
    const Eigen::VectorXd x0 = sc.x0.size() > 0 ? sc.x0 : problem.x0;
    out.trace = bpg_deterministic(problem, kernel, lambda, x0, sc.max_iter);
    std::snprintf(buf, sizeof(buf), "bpg: %zu iterations, final psi %.6g",
                  out.trace.records.size(), problem.psi(out.trace.x_final));
  } else if (algorithm == "alg1" || algorithm == "alg2" || algorithm == "alg2_exp") {
    EpochRunResult res;
    if (algorithm == "alg1") {
      res = alg1_run(problem, kernel, sc);
    } else if (algorithm == "alg2") {
      res = alg2_run(problem, kernel, sc);
    } else {
      res = alg2_expectation_run(problem, kernel, sc);
    }
    std::snprintf(buf, sizeof(buf),
                  "%s: S=%ld tau=%ld b=%ld samples=%ld |I1|=%zu |I2|=%zu out=(%d,%d)",
                  algorithm.c_str(), res.trace.S, res.trace.tau, res.trace.b,
                  res.trace.total_samples, res.census.I1.size(), res.census.I2.size(), res.out_s,
                  res.out_k);
    out.trace = std::move(res.trace);
  } else if (algorithm == "tbpg") {
    TbpgResult res = tbpg_run(problem, kernel, sc);
    std::snprintf(buf, sizeof(buf), "tbpg: %s T_eps=%ld R_eps=%.6g samples=%ld",
                  res.found ? "hit" : "budget-exhausted", res.T_eps, res.R_eps,
                  res.trace.total_samples);
    out.trace = std::move(res.trace);
  } else if (algorithm == "tbpg_svr") {
    TbpgSvrResult res = tbpg_svr_run(problem, kernel, sc);
    std::snprintf(buf, sizeof(buf),
                  "tbpg_svr: %s (S,K)=(%d,%d) R_eps=%.6g exact|D|^2=%.6g samples=%ld",
                  res.found ? "hit" : "budget-exhausted", res.S_eps, res.K_eps, res.R_eps,
                  res.final_exact_D_sq, res.trace.total_samples);
    out.trace = std::move(res.trace);
  } else {
    throw ConfigError("unknown algorithm `" + algorithm + "`");
  }
  out.summary = buf;
  return out;
}

struct SweepPoint {
  double axis_value = 0.0;
  double mean_samples_to_eps = 0.0;
  int hits = 0;
  int runs = 0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepPoint> points;
  std::optional<TrendFit> fit;
};

// Samples-to-target sweep along `axis` in {"n", "eps", "b"}. For each axis
// value, `seeds` runs measure the first cumulative sample count at which the
// exact mapping satisfies ||G||^2 <= eps; points average over the hitting
// runs, and a log-log trend is fitted against the axis (1/eps for eps).
inline SweepResult sweep_samples_to_eps(const Config& base, const std::string& axis,
                                        const std::vector<double>& values, int seeds,
                                        int threads = 0) {
  SweepResult result;
  result.axis = axis;
  for (const double value : values) {
    SweepPoint point;
    point.axis_value = value;
    std::vector<long> hits(seeds, -1);
    parallel_for_jobs(seeds, [&](std::size_t job) {
      const int n = axis == "n" ? static_cast<int>(value)
                                : static_cast<int>(base.get_long("n", 64));
      const double eps = axis == "eps" ? value : base.get_double("epsilon", 1e-3);
      const Problem problem = make_cubic_finite_sum(
          n, static_cast<int>(base.get_long("dim", 10)),
          static_cast<std::uint64_t>(base.get_long("problem_seed", 1)),
          base.get_double("l1_weight", 0.0));
      SolverConfig sc = solver_config_from(base);
      sc.seed = static_cast<std::uint64_t>(base.get_long("seed", 0)) + 1 + job;
      sc.epsilon = eps;
      if (axis == "b") sc.b = static_cast<long>(value);
      sc.diagnostics = SolverConfig::Diagnostics::Mapping;
      sc.record_iterates = false;
      sc.stop_when_G_sq_below = eps;
      const EpochRunResult res = alg2_run(problem, problem.kernel, sc);
      for (const IterRecord& r : res.trace.records) {
        if (!std::isnan(r.norm_G) && r.norm_G * r.norm_G <= eps) {
          hits[job] = r.samples;
          break;
        }
      }
    }, threads);
    for (const long h : hits) {
      ++point.runs;
      if (h > 0) {
        ++point.hits;
        point.mean_samples_to_eps += static_cast<double>(h);
      }
    }
    if (point.hits > 0) point.mean_samples_to_eps /= point.hits;
    result.points.push_back(point);
  }
  std::vector<std::pair<double, double>> fit_pts;
  for (const SweepPoint& p : result.points) {
    if (p.hits == 0) continue;
    const double x = axis == "eps" ? 1.0 / p.axis_value : p.axis_value;
    fit_pts.push_back({x, p.mean_samples_to_eps});
  }
  if (fit_pts.size() >= 3) {
    result.fit = fit_trend(fit_pts, axis == "eps" ? "1/eps" : axis);
  }
  return result;
}

}  // namespace bpg
