#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bpg/problems.hpp"

namespace bpg {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SolverConfig {
  // step sizes; values <= 0 mean "auto" (resolved from the run constants)
  double lambda = -1.0;
  double eta = -1.0;
  double gamma = -1.0;
  long tau = -1;  // epoch length
  long b = -1;    // mini-batch size
  long S = -1;    // epoch count
  double epsilon = 1e-3;
  double q = 0.1;  // failure-probability budget, in (0, 1/2)
  long max_total_samples = 200'000'000;
  long max_iter = 100000;  // deterministic methods
  std::uint64_t seed = 0;
  enum class OutputSelection { UniformAll, UniformInteriorDeltaQuarter };
  OutputSelection output_selection = OutputSelection::UniformInteriorDeltaQuarter;
  double delta_psi = -1.0;  // objective gap estimate; <= 0 derives from the problem
  bool record_iterates = true;
  // Per-step exact-mapping replay: None is cheapest, Mapping adds the true
  // (unrestricted) mappings and the estimator error, Census additionally
  // recomputes the restricted prox for the boundary-event sets.
  enum class Diagnostics { None, Mapping, Census };
  Diagnostics diagnostics = Diagnostics::Census;
  // Hitting-time instrumentation: stop an epoch run once the exact mapping
  // norm squared (diagnostics >= Mapping) drops to this value. 0 disables.
  double stop_when_G_sq_below = 0.0;
  Eigen::VectorXd x0;       // empty: use the problem default
};

struct IterRecord {
  long iter = 0;
  int s = 0;
  int k = 0;
  double psi = kNaN;
  double norm_G = kNaN;
  double norm_D = kNaN;
  double norm_restricted_G = kNaN;
  double norm_D_surrogate = kNaN;
  double step = kNaN;
  double dist_boundary = kNaN;
  long samples = 0;
  bool flag_boundary = false;       // next iterate triggered epoch-boundary proximity
  bool flag_prox_boundary = false;  // exact-gradient restricted prox landed on the boundary
  bool flag_full_batch = false;     // estimator refreshed from a full/anchor batch
  // in-memory diagnostics, not serialized
  bool eligible = false;
  double err_estimator = kNaN;  // || grad f(x) - v ||
};

struct EpochInfo {
  Eigen::VectorXd center;
  double radius = 0.0;
  long tau_realized = 0;
};

struct Trace {
  std::string algorithm;
  std::vector<IterRecord> records;
  std::vector<Eigen::VectorXd> iterates;  // aligned with records
  Eigen::VectorXd x_final;
  std::vector<EpochInfo> epochs;

  // resolved run constants
  double lambda = kNaN, eta = kNaN, gamma = kNaN;
  long tau = 0, b = 0, S = 0;
  double delta = kNaN, kappa = kNaN, mu = kNaN, smad_L = kNaN, rho = 0.0;
  double epsilon = kNaN, q = kNaN, delta_psi = kNaN;
  long total_samples = 0;
  bool budget_capped = false;

  double prox_step() const { return std::isnan(eta) ? lambda : eta; }
};

// Realized event sets of one epoch-bounded run: epochs that traveled
// delta/4 from their anchor (I1), steps whose exact-gradient restricted prox
// landed on the epoch boundary while the previous iterate was still deep
// inside (I2), plus the travel radius and surrogate hitting time.
struct EventCensus {
  std::vector<int> I1;
  std::vector<std::pair<int, int>> I2;
  double R_eps = 0.0;
  long T_eps = -1;
  bool has_T = false;
};

struct EpochRunResult {
  Trace trace;
  EventCensus census;
  Eigen::VectorXd x_out;
  int out_s = -1, out_k = -1;
  bool out_eligible = false;
};

struct TbpgResult {
  Trace trace;
  long T_eps = -1;
  bool found = false;
  double R_eps = 0.0;
  Eigen::VectorXd x_stop;       // x_{T_eps}
  Eigen::VectorXd x_after;      // x_{T_eps + 1}
  double lambda_at_stop = kNaN;
};

struct TbpgSvrResult {
  Trace trace;
  int S_eps = -1, K_eps = -1;
  bool found = false;
  double R_eps = 0.0;
  double final_exact_D_sq = kNaN;  // || D(x) ||^2 at the stopping point, exact gradient
  double final_err_norm = kNaN;    // || grad f - v || at the stopping point
  double final_eta = kNaN;
  double max_bar_step = 0.0;  // max || xbar_{s,k+1} - x_{s,k} ||
};

// --------------------------------------------------------------------------
// shared pieces

namespace detail {

inline double resolve_delta_psi(const Problem& p, const SolverConfig& cfg,
                                const Eigen::VectorXd& x0) {
  if (cfg.delta_psi > 0.0) return cfg.delta_psi;
  if (p.has_lower_bound) return std::max(1e-12, p.psi(x0) - p.psi_lower_bound);
  return 1.0;
}

inline Eigen::VectorXd resolve_x0(const Problem& p, const SolverConfig& cfg) {
  return cfg.x0.size() > 0 ? cfg.x0 : p.x0;
}

// Epoch ball B(x_{s,0}, max{1/(2r), ||x_{s,0}||/(2r+1)}) for polynomial
// kernels keeps the local condition number within kappa_h^delta while
// containing B(x_{s,0}, delta/2).
inline double epoch_radius(const KernelModel& k, const KernelRegularity& reg,
                           const Eigen::VectorXd& center) {
  if (k.kind == KernelModel::Kind::Quadratic) return reg.delta / 2.0;
  const double r = static_cast<double>(k.r);
  return std::max(1.0 / (2.0 * r), center.norm() / (2.0 * r + 1.0));
}

inline std::vector<int> draw_batch(RandomStream& stream, long b, int n) {
  std::vector<int> ids(static_cast<std::size_t>(b));
  for (auto& id : ids) id = static_cast<int>(stream.uniform_int(n));
  return ids;
}

}  // namespace detail

// SARAH recursion v <- v_prev + mean over the batch of the gradient deltas.
inline Eigen::VectorXd sarah_step(const Eigen::VectorXd& v_prev, const Problem& p,
                                  const std::vector<int>& batch, const Eigen::VectorXd& x_cur,
                                  const Eigen::VectorXd& x_prev) {
  if (p.batch_grad_delta) return v_prev + p.batch_grad_delta(batch, x_cur, x_prev);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(x_cur.size());
  for (const int i : batch) acc += p.grad_component(i, x_cur) - p.grad_component(i, x_prev);
  return v_prev + acc / static_cast<double>(batch.size());
}

// i.i.d.-sampling counterpart; each draw is evaluated at both points.
inline Eigen::VectorXd sarah_step_expectation(const Eigen::VectorXd& v_prev, const Problem& p,
                                              RandomStream& stream, long b,
                                              const Eigen::VectorXd& x_cur,
                                              const Eigen::VectorXd& x_prev) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(x_cur.size());
  for (long j = 0; j < b; ++j) {
    auto [gn, go] = p.sample_grad_pair(stream, x_cur, x_prev);
    acc += gn - go;
  }
  return v_prev + acc / static_cast<double>(b);
}

// --------------------------------------------------------------------------
// deterministic BPG

inline Trace bpg_deterministic(const Problem& p, const KernelModel& kernel, double lambda,
                               const Eigen::VectorXd& x0, long max_iter,
                               bool record_iterates = true) {
  Trace trace;
  trace.algorithm = "bpg";
  trace.lambda = lambda;
  trace.smad_L = p.smad_L;
  trace.records.reserve(static_cast<std::size_t>(max_iter));
  Eigen::VectorXd x = x0;
  long samples = 0;
  const long grad_cost = p.structure == Problem::Structure::FiniteSum ? p.n : 1;
  for (long k = 0; k < max_iter; ++k) {
    const Eigen::VectorXd g = p.eval_grad(x);
    samples += grad_cost;
    const ProxResult pr = prox_map(kernel, p.phi, x, g, lambda);
    IterRecord rec;
    rec.iter = k;
    rec.s = 0;
    rec.k = static_cast<int>(k);
    rec.psi = p.psi(x);
    rec.norm_G = (x - pr.y).norm() / lambda;
    rec.norm_D = (grad_h(kernel, x) - grad_h(kernel, pr.y)).norm() / lambda;
    rec.step = lambda;
    rec.samples = samples;
    trace.records.push_back(rec);
    if (record_iterates) trace.iterates.push_back(x);
    x = pr.y;
  }
  trace.x_final = x;
  trace.total_samples = samples;
  return trace;
}

// --------------------------------------------------------------------------
// Epoch-bounded variance-reduced runs (large-batch variant and the
// interpolated variant with early epoch restarts), sharing one loop.

namespace detail {

struct EpochLoopSpec {
  bool interpolated = false;   // interpolation + early break (the improved variant)
  bool expectation = false;    // i.i.d. sampling and adaptive anchor batches
};

inline EpochRunResult run_epoch_algorithm(const Problem& p, const KernelModel& kernel,
                                          const SolverConfig& cfg, const EpochLoopSpec& spec) {
  if (!spec.expectation && p.structure != Problem::Structure::FiniteSum) {
    throw ConfigError("epoch solver: problem must be a finite sum");
  }
  if (spec.expectation && !p.sample_grad) {
    throw ConfigError("epoch solver: problem must provide a gradient sampler");
  }
  const KernelRegularity reg = regularity_constants(kernel);
  const double L = p.smad_L;
  const double mu = reg.mu;
  const double delta = reg.delta;
  const double kappa = reg.kappa_delta;
  const double eps = cfg.epsilon;

  Trace trace;
  trace.smad_L = L;
  trace.mu = mu;
  trace.delta = delta;
  trace.kappa = kappa;
  trace.epsilon = eps;
  trace.q = cfg.q;
  trace.rho = p.rho();

  long tau, b;
  double B_anchor = 0.0;
  if (spec.expectation) {
    b = cfg.b > 0 ? cfg.b : 1;
    tau = cfg.tau > 0 ? cfg.tau : static_cast<long>(std::ceil(cfg.q / (eps * b)));
    B_anchor = 320.0 * b * tau / (mu * delta * delta * L * L * kappa * kappa * cfg.q);
  } else if (spec.interpolated) {
    b = cfg.b > 0 ? cfg.b : static_cast<long>(std::ceil(std::sqrt(double(p.n))));
    tau = cfg.tau > 0 ? cfg.tau : (p.n + b - 1) / b;  // ceil(n / b)
  } else {
    b = cfg.b > 0 ? cfg.b : static_cast<long>(std::ceil(std::sqrt(double(p.n))));
    tau = cfg.tau > 0 ? cfg.tau : b;
  }

  double lambda, eta = kNaN, gamma = kNaN;
  if (spec.interpolated || spec.expectation) {
    eta = cfg.eta > 0 ? cfg.eta
                      : std::sqrt(2.0 * tau) / (std::sqrt(7.0 * tau) + std::sqrt(2.0 * b));
    gamma = cfg.gamma > 0 ? cfg.gamma : std::sqrt(double(b)) / (L * kappa * std::sqrt(double(tau)));
    gamma = std::min(gamma, 1.0);
    lambda = eta;
  } else {
    lambda = cfg.lambda > 0 ? cfg.lambda : 1.0 / ((2.0 * kappa + 1.0) * L);
  }

  const Eigen::VectorXd x_start = resolve_x0(p, cfg);
  const double delta_psi = resolve_delta_psi(p, cfg, x_start);
  long S_formula;
  if (spec.expectation) {
    S_formula = static_cast<long>(std::ceil(256.0 * gamma * tau * delta_psi /
                                            (mu * eta * delta * delta * cfg.q)));
  } else if (spec.interpolated) {
    S_formula = static_cast<long>(std::ceil(16.0 * delta_psi / (tau * gamma * eta * mu * eps)));
  } else {
    S_formula = static_cast<long>(std::ceil(32.0 * delta_psi / (lambda * mu * tau * eps)));
  }
  S_formula = std::max<long>(1, S_formula);
  // Budget accounting uses the worst-case anchor size for the expectation
  // variant only loosely; realized consumption is tracked exactly below.
  const long epoch_cost = spec.expectation ? (64 + (tau - 1) * b) : (p.n + (tau - 1) * b);
  const long S_cap = std::max<long>(1, cfg.max_total_samples / std::max<long>(1, epoch_cost));
  long S;
  if (cfg.S > 0) {
    S = cfg.S;
    if (S * epoch_cost > cfg.max_total_samples) {
      throw InsufficientBudget("epoch solver: requested S exceeds max_total_samples");
    }
  } else {
    S = std::min(S_formula, S_cap);
    trace.budget_capped = S < S_formula;
  }

  trace.algorithm = spec.expectation ? "alg2_exp" : (spec.interpolated ? "alg2" : "alg1");
  trace.lambda = spec.interpolated || spec.expectation ? kNaN : lambda;
  trace.eta = eta;
  trace.gamma = gamma;
  trace.tau = tau;
  trace.b = b;
  trace.S = S;
  trace.delta_psi = delta_psi;

  RandomStream root(cfg.seed);
  EventCensus census;
  Eigen::VectorXd x = x_start;
  const Eigen::VectorXd x_origin = x_start;
  long samples = 0;
  long iter = 0;
  const double prox_step = spec.interpolated || spec.expectation ? eta : lambda;

  for (int s = 1; s <= S; ++s) {
    const Eigen::VectorXd center = x;
    const double radius = epoch_radius(kernel, reg, center);
    const CompositeTerm restricted = with_ball(p.phi, center, radius);
    trace.epochs.push_back({center, radius, 0});

    Eigen::VectorXd v;
    Eigen::VectorXd x_prev = x;
    bool epoch_traveled = false;
    long tau_s = tau;

    for (int k = 0; k < tau; ++k) {
      bool full_batch = false;
      if (k == 0) {
        if (spec.expectation) {
          const auto mu_ball = mu_L_over_ball(kernel, center, radius).first;
          const double sig = p.sigma_fn ? p.sigma_fn(center) : 0.0;
          const long anchor =
              std::max<long>(1, static_cast<long>(std::ceil(sig * sig / mu_ball * B_anchor)));
          RandomStream sub = root.substream(s, 0);
          Eigen::VectorXd acc = Eigen::VectorXd::Zero(p.dim);
          for (long j = 0; j < anchor; ++j) acc += p.sample_grad(sub, x);
          v = acc / static_cast<double>(anchor);
          samples += anchor;
        } else {
          v = p.eval_grad(x);
          samples += p.n;
        }
        full_batch = true;
      } else {
        RandomStream sub = root.substream(s, k);
        if (spec.expectation) {
          v = sarah_step_expectation(v, p, sub, b, x, x_prev);
        } else {
          const std::vector<int> batch = detail::draw_batch(sub, b, p.n);
          v = sarah_step(v, p, batch, x, x_prev);
        }
        samples += b;
      }

      const ProxResult pr = prox_map(kernel, restricted, x, v, prox_step);
      Eigen::VectorXd x_next;
      if (spec.interpolated || spec.expectation) {
        x_next = x + gamma * (pr.y - x);
      } else {
        x_next = pr.y;
      }

      IterRecord rec;
      rec.iter = iter++;
      rec.s = s;
      rec.k = k;
      rec.psi = p.psi(x);
      rec.step = prox_step;
      rec.samples = samples;
      rec.flag_full_batch = full_batch;
      rec.dist_boundary = radius - (x - center).norm();
      rec.eligible = rec.dist_boundary >= delta / 4.0;
      rec.norm_D_surrogate =
          (grad_h(kernel, x) - grad_h(kernel, pr.y)).norm() / prox_step;

      if (cfg.diagnostics != SolverConfig::Diagnostics::None) {
        const Eigen::VectorXd g = p.eval_grad(x);
        rec.err_estimator = (g - v).norm();
        const ProxResult free = prox_map(kernel, p.phi, x, g, prox_step);
        rec.norm_G = (x - free.y).norm() / prox_step;
        rec.norm_D = (grad_h(kernel, x) - grad_h(kernel, free.y)).norm() / prox_step;
        if (cfg.diagnostics == SolverConfig::Diagnostics::Census) {
          const ProxResult hat = prox_map(kernel, restricted, x, g, prox_step);
          rec.norm_restricted_G = (x - hat.y).norm() / prox_step;
          const double hat_slack = radius - (hat.y - center).norm();
          rec.flag_prox_boundary = hat_slack <= 1e-9 * (1.0 + radius);
          if (rec.flag_prox_boundary && (x - center).norm() <= delta / 4.0) {
            census.I2.emplace_back(s, k + 1);
          }
        }
      }

      const double next_slack = radius - (x_next - center).norm();
      rec.flag_boundary = next_slack <= 1e-9 * (1.0 + radius);
      trace.records.push_back(rec);
      if (cfg.record_iterates) trace.iterates.push_back(x);
      census.R_eps = std::max(census.R_eps, (x - x_origin).norm());
      if ((x - center).norm() >= delta / 4.0) epoch_traveled = true;

      if (cfg.stop_when_G_sq_below > 0.0 && !std::isnan(rec.norm_G) &&
          rec.norm_G * rec.norm_G <= cfg.stop_when_G_sq_below) {
        trace.epochs.back().tau_realized = k + 1;
        trace.x_final = x_next;
        trace.total_samples = samples;
        census.R_eps = std::max(census.R_eps, (x_next - x_origin).norm());
        EpochRunResult early;
        early.census = census;
        early.x_out = x;
        early.out_s = s;
        early.out_k = k;
        early.out_eligible = rec.eligible;
        early.trace = std::move(trace);
        return early;
      }

      x_prev = x;
      x = x_next;

      if (spec.interpolated || spec.expectation) {
        if (next_slack <= delta / 4.0) {
          tau_s = k + 1;
          break;
        }
      }
    }

    trace.epochs.back().tau_realized = tau_s;
    if (spec.interpolated || spec.expectation) {
      if (tau_s < tau) census.I1.push_back(s);
    } else if (epoch_traveled) {
      census.I1.push_back(s);
    }
    if (samples >= cfg.max_total_samples) {
      trace.budget_capped = true;
      break;
    }
  }
  trace.x_final = x;
  trace.total_samples = samples;
  census.R_eps = std::max(census.R_eps, (x - x_origin).norm());

  EpochRunResult result;
  result.census = census;

  // Output selection from a reserved substream so the trajectory draws stay
  // aligned across variants with the same seed.
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const bool ok = (!spec.interpolated && !spec.expectation &&
                     cfg.output_selection == SolverConfig::OutputSelection::UniformInteriorDeltaQuarter)
                        ? trace.records[i].eligible
                        : true;
    if (ok) pool.push_back(i);
  }
  if (!pool.empty() && cfg.record_iterates) {
    RandomStream pick = root.substream(0, 0xA11CEull);
    const std::size_t chosen = pool[static_cast<std::size_t>(
        pick.uniform_int(static_cast<std::int64_t>(pool.size())))];
    result.x_out = trace.iterates[chosen];
    result.out_s = trace.records[chosen].s;
    result.out_k = trace.records[chosen].k;
    result.out_eligible = trace.records[chosen].eligible;
  }
  result.trace = std::move(trace);
  return result;
}

}  // namespace detail

// Large-batch variant: b = tau = ceil(sqrt(n)) by default, epoch ball
// constraint, full-length epochs, output drawn from iterates that stay
// delta/4 inside the epoch boundary.
inline EpochRunResult alg1_run(const Problem& p, const KernelModel& kernel,
                               const SolverConfig& cfg) {
  return detail::run_epoch_algorithm(p, kernel, cfg, {false, false});
}

// Interpolated variant: arbitrary batch size, x_{s,k+1} = (1-gamma) x + gamma xbar,
// early epoch restart when the iterate comes delta/4-close to the boundary.
inline EpochRunResult alg2_run(const Problem& p, const KernelModel& kernel,
                               const SolverConfig& cfg) {
  return detail::run_epoch_algorithm(p, kernel, cfg, {true, false});
}

// General-expectation variant: i.i.d. sampling with anchor batches sized by
// the local strong-convexity of the kernel.
inline EpochRunResult alg2_expectation_run(const Problem& p, const KernelModel& kernel,
                                           const SolverConfig& cfg) {
  return detail::run_epoch_algorithm(p, kernel, cfg, {true, true});
}

// --------------------------------------------------------------------------
// Adaptive deterministic step-size control

inline TbpgResult tbpg_run(const Problem& p, const KernelModel& kernel, const SolverConfig& cfg) {
  const KernelRegularity reg = regularity_constants(kernel);
  const double L = p.smad_L;
  const double mu = reg.mu;
  const double delta = reg.delta;
  const double rho = p.rho();
  const double eps = cfg.epsilon;

  TbpgResult result;
  Trace& trace = result.trace;
  trace.algorithm = "tbpg";
  trace.smad_L = L;
  trace.mu = mu;
  trace.delta = delta;
  trace.kappa = reg.kappa_delta;
  trace.rho = rho;
  trace.epsilon = eps;

  Eigen::VectorXd x = detail::resolve_x0(p, cfg);
  const Eigen::VectorXd x_origin = x;
  long samples = 0;
  const long grad_cost = p.structure == Problem::Structure::FiniteSum ? p.n : 1;

  for (long k = 0; k < cfg.max_iter; ++k) {
    const Eigen::VectorXd g = p.eval_grad(x);
    samples += grad_cost;
    double lam = 1.0 / (2.0 * L);
    if (rho > 0.0) lam = std::min(lam, mu * delta / (3.0 * rho));
    const double denom = g.norm() + rho;
    if (denom > 0.0) lam = std::min(lam, mu * delta / denom);

    const ProxResult pr = prox_map(kernel, p.phi, x, g, lam);
    const double norm_D = (grad_h(kernel, x) - grad_h(kernel, pr.y)).norm() / lam;

    IterRecord rec;
    rec.iter = k;
    rec.k = static_cast<int>(k);
    rec.psi = p.psi(x);
    rec.norm_G = (x - pr.y).norm() / lam;
    rec.norm_D = norm_D;
    rec.step = lam;
    rec.samples = samples;
    trace.records.push_back(rec);
    if (cfg.record_iterates) trace.iterates.push_back(x);

    result.R_eps = std::max(result.R_eps, (x - x_origin).norm());
    if (norm_D * norm_D <= eps) {
      result.found = true;
      result.T_eps = k;
      result.x_stop = x;
      result.x_after = pr.y;
      result.lambda_at_stop = lam;
      trace.x_final = pr.y;
      trace.total_samples = samples;
      return result;
    }
    x = pr.y;
  }
  // Budget exhausted: partial trace, no hitting time.
  trace.x_final = x;
  trace.total_samples = samples;
  return result;
}

// --------------------------------------------------------------------------
// Adaptive stochastic variance-reduced control (finite sums)

inline TbpgSvrResult tbpg_svr_run(const Problem& p, const KernelModel& kernel,
                                  const SolverConfig& cfg) {
  if (p.structure != Problem::Structure::FiniteSum) {
    throw ConfigError("tbpg_svr: problem must be a finite sum");
  }
  const KernelRegularity reg = regularity_constants(kernel);
  const double L = p.smad_L;
  const double L_max = p.L_max > 0.0 ? p.L_max : L;
  const double mu = reg.mu;
  const double delta = reg.delta;
  const double kappa = reg.kappa_delta;
  const double rho = p.rho();
  const double eps = cfg.epsilon;
  const double q = cfg.q;

  TbpgSvrResult result;
  Trace& trace = result.trace;
  trace.algorithm = "tbpg_svr";
  trace.smad_L = L;
  trace.mu = mu;
  trace.delta = delta;
  trace.kappa = kappa;
  trace.rho = rho;
  trace.epsilon = eps;
  trace.q = q;

  const long tau = cfg.tau > 0 ? cfg.tau : static_cast<long>(std::ceil(std::sqrt(double(p.n))));
  trace.tau = tau;

  RandomStream root(cfg.seed);
  Eigen::VectorXd x = detail::resolve_x0(p, cfg);
  const Eigen::VectorXd x_origin = x;
  long samples = 0;
  long iter = 0;

  for (int s = 1;; ++s) {
    const double p_s = 6.0 * q / (M_PI * M_PI * double(s) * double(s) * double(tau));
    const long b_s = cfg.b > 0
                         ? cfg.b
                         : static_cast<long>(std::ceil(8.0 * tau * (2.0 + 6.0 * std::log(1.0 / p_s)) *
                                                       L_max * L_max / (L * L)));
    Eigen::VectorXd v;
    Eigen::VectorXd x_prev = x;
    for (int k = 0; k < tau; ++k) {
      bool full_batch = false;
      if (k == 0) {
        v = p.eval_grad(x);
        samples += p.n;
        full_batch = true;
      } else {
        RandomStream sub = root.substream(s, k);
        const std::vector<int> batch = detail::draw_batch(sub, b_s, p.n);
        v = sarah_step(v, p, batch, x, x_prev);
        samples += b_s;
      }

      double eta = 1.0 / (2.0 * kappa * L);
      if (rho > 0.0) eta = std::min(eta, mu * delta / (3.0 * rho));
      const double denom = v.norm() + rho;
      if (denom > 0.0) eta = std::min(eta, mu * delta / denom);

      const ProxResult pr = prox_map(kernel, p.phi, x, v, eta);
      const Eigen::VectorXd dual_disp = grad_h(kernel, x) - grad_h(kernel, pr.y);
      const double norm_D_sur = dual_disp.norm() / eta;
      result.max_bar_step = std::max(result.max_bar_step, (pr.y - x).norm());

      IterRecord rec;
      rec.iter = iter++;
      rec.s = s;
      rec.k = k;
      rec.psi = p.psi(x);
      rec.norm_D_surrogate = norm_D_sur;
      rec.step = eta;
      rec.samples = samples;
      rec.flag_full_batch = full_batch;
      if (cfg.diagnostics != SolverConfig::Diagnostics::None) {
        const Eigen::VectorXd g = p.eval_grad(x);
        rec.err_estimator = (g - v).norm();
        const ProxResult exact = prox_map(kernel, p.phi, x, g, eta);
        rec.norm_G = (x - exact.y).norm() / eta;
        rec.norm_D = (grad_h(kernel, x) - grad_h(kernel, exact.y)).norm() / eta;
      }
      trace.records.push_back(rec);
      if (cfg.record_iterates) trace.iterates.push_back(x);
      result.R_eps = std::max(result.R_eps, (x - x_origin).norm());

      if (norm_D_sur * norm_D_sur <= eps) {
        const Eigen::VectorXd g = p.eval_grad(x);
        const ProxResult exact = prox_map(kernel, p.phi, x, g, eta);
        const double exact_norm = (grad_h(kernel, x) - grad_h(kernel, exact.y)).norm() / eta;
        result.found = true;
        result.S_eps = s;
        result.K_eps = k;
        result.final_exact_D_sq = exact_norm * exact_norm;
        result.final_err_norm = (g - v).norm();
        result.final_eta = eta;
        trace.x_final = x;
        trace.total_samples = samples;
        return result;
      }

      double gamma = 1.0;
      const double dd = dual_disp.norm();
      if (dd > 0.0) gamma = std::min(1.0, (std::sqrt(eps) / (2.0 * L * kappa * kappa)) / dd);
      x_prev = x;
      x = x + gamma * (pr.y - x);
    }
    if (samples >= cfg.max_total_samples) break;
  }
  trace.x_final = x;
  trace.total_samples = samples;
  return result;  // budget exhausted; partial trace, stopping pair absent
}

// --------------------------------------------------------------------------
// Offline census recomputation from a stored trace.

inline EventCensus event_census(const Problem& p, const KernelModel& kernel, const Trace& trace) {
  EventCensus census;
  if (trace.iterates.size() != trace.records.size() || trace.epochs.empty()) {
    throw ConfigError("event_census: trace must carry iterates and epoch geometry");
  }
  const double delta = trace.delta;
  const double step = trace.prox_step();
  const Eigen::VectorXd origin = trace.iterates.front();
  const bool improved = trace.algorithm != "alg1";
  census.R_eps = (trace.x_final - origin).norm();

  std::size_t idx = 0;
  for (std::size_t e = 0; e < trace.epochs.size(); ++e) {
    const EpochInfo& ep = trace.epochs[e];
    const CompositeTerm restricted = with_ball(p.phi, ep.center, ep.radius);
    bool traveled = false;
    for (long k = 0; k < ep.tau_realized && idx < trace.records.size(); ++k, ++idx) {
      const Eigen::VectorXd& xk = trace.iterates[idx];
      census.R_eps = std::max(census.R_eps, (xk - origin).norm());
      if ((xk - ep.center).norm() >= delta / 4.0) traveled = true;
      const ProxResult hat = prox_map(kernel, restricted, xk, p.eval_grad(xk), step);
      const bool on_boundary =
          ep.radius - (hat.y - ep.center).norm() <= 1e-9 * (1.0 + ep.radius);
      if (on_boundary && (xk - ep.center).norm() <= delta / 4.0) {
        census.I2.emplace_back(static_cast<int>(e) + 1, static_cast<int>(k) + 1);
      }
    }
    if (improved) {
      if (ep.tau_realized < trace.tau) census.I1.push_back(static_cast<int>(e) + 1);
    } else if (traveled) {
      census.I1.push_back(static_cast<int>(e) + 1);
    }
  }
  return census;
}

}  // namespace bpg
