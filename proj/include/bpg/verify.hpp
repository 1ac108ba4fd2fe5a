#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bpg/finite_diff.hpp"
#include "bpg/mappings.hpp"
#include "bpg/problems.hpp"
#include "bpg/rng.hpp"
#include "bpg/solvers.hpp"
#include "bpg/trace_io.hpp"
#include "bpg/trend.hpp"

namespace bpg {

// One property check: `value` is the worst observed residual/violation and
// `bound` the acceptance threshold (value <= bound passes). Checks that count
// events instead report the failing count with bound 0.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

namespace detail {
inline void add_check(std::vector<CheckResult>& out, const std::string& name, double value,
                      double bound) {
  out.push_back({name, value <= bound, value, bound});
}
inline Eigen::VectorXd rand_vec(RandomStream& rng, int d, double scale) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = scale * rng.normal();
  return v;
}
}  // namespace detail

inline std::vector<CheckResult> verify_numerics(std::uint64_t seed) {
  std::vector<CheckResult> out;
  RandomStream rng(seed);

  double worst_root = 0.0;
  for (int it = 0; it < 100; ++it) {
    const int r = 1 + static_cast<int>(rng.uniform_int(8));
    const double target = std::exp(4.0 * rng.uniform() - 1.0);
    ScalarRootSpec spec;
    spec.target = target;
    spec.bracket_hi = target + 1.0;
    const double t = solve_monotone([r](double u) { return u + std::pow(u, r + 1); }, spec);
    worst_root = std::max(worst_root, std::abs(t + std::pow(t, r + 1) - target));
  }
  detail::add_check(out, "root-residual", worst_root, 1e-12);

  const Problem probs[] = {make_example1(4), make_cubic_finite_sum(12, 3, seed + 1)};
  double worst_fd = 0.0;
  for (const Problem& p : probs) {
    for (int it = 0; it < 100; ++it) {
      const Eigen::VectorXd x = detail::rand_vec(rng, p.dim, 2.0);
      const Eigen::VectorXd ga = p.eval_grad(x);
      worst_fd = std::max(worst_fd,
                          (ga - fd_gradient(p.eval_f, x, 1e-5)).norm() / (1.0 + ga.norm()));
    }
  }
  detail::add_check(out, "fd-gradient-relative", worst_fd, 1e-6);

  double worst_seg = 0.0;
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd a = detail::rand_vec(rng, 3, 2.0);
    const Eigen::VectorXd b = detail::rand_vec(rng, 3, 2.0);
    const auto [mn, mx] = segment_norm_extrema(a, b);
    for (int rep = 0; rep < 10; ++rep) {
      const double u = rng.uniform();
      const double nrm = (a + u * (b - a)).norm();
      worst_seg = std::max({worst_seg, mn - nrm, nrm - mx});
    }
  }
  detail::add_check(out, "segment-extrema-envelope", worst_seg, 1e-12);

  RandomStream s1(seed + 7), s2(seed + 7);
  long mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    if (s1.next_u64() != s2.next_u64()) ++mismatches;
  }
  detail::add_check(out, "stream-determinism", static_cast<double>(mismatches), 0.0);
  return out;
}

inline std::vector<CheckResult> verify_kernels(std::uint64_t seed) {
  std::vector<CheckResult> out;
  RandomStream rng(seed);

  double worst_kappa = 0.0, worst_ball = 0.0, worst_sc = 0.0, worst_inv = 0.0, worst_sand = 0.0;
  for (const int r : {1, 2, 4, 8}) {
    const KernelModel k = KernelModel::polynomial(r);
    for (int it = 0; it < 500; ++it) {
      const Eigen::VectorXd x = detail::rand_vec(rng, 3, 3.0);
      const auto [lo, hi] = hess_eig_bounds(k, x);
      worst_kappa = std::max(worst_kappa, hi / lo - (r + 1.0));

      const double radius = 0.5 / r * rng.uniform();
      const auto [mu, L] = mu_L_over_ball(k, x, radius);
      worst_ball = std::max(worst_ball, L / mu - (3.0 * r + 4.0));

      const Eigen::VectorXd y = detail::rand_vec(rng, 3, 3.0);
      worst_sc = std::max(worst_sc, 0.5 * (y - x).squaredNorm() - bregman_div(k, y, x));

      worst_inv =
          std::max(worst_inv, (grad_h_inverse(k, grad_h(k, x)) - x).norm() / (1.0 + x.norm()));

      const auto [ms, Ls] = mu_L_over_segment(k, x, y);
      const double disp = (grad_h(k, y) - grad_h(k, x)).norm();
      const double step = (y - x).norm();
      worst_sand = std::max({worst_sand, ms * step - disp - 1e-9 * (1.0 + disp),
                             disp - Ls * step - 1e-9 * (1.0 + disp)});
    }
  }
  detail::add_check(out, "pointwise-kappa<=r+1", worst_kappa, 1e-12);
  detail::add_check(out, "ball-kappa<=3r+4", worst_ball, 1e-12);
  detail::add_check(out, "strong-convexity-mu=1", worst_sc, 1e-10);
  detail::add_check(out, "grad-inverse-roundtrip", worst_inv, 1e-9);
  detail::add_check(out, "gradient-displacement-sandwich", worst_sand, 0.0);
  return out;
}

inline std::vector<CheckResult> verify_prox(std::uint64_t seed) {
  std::vector<CheckResult> out;
  RandomStream rng(seed);

  double worst_kkt = 0.0, worst_tseng = 0.0, worst_sand = 0.0, worst_unique = 0.0;
  for (int it = 0; it < 100; ++it) {
    const int r = 1 + static_cast<int>(rng.uniform_int(4));
    const KernelModel k = KernelModel::polynomial(r);
    const Eigen::VectorXd x = detail::rand_vec(rng, 3, 1.2);
    const Eigen::VectorXd v = detail::rand_vec(rng, 3, 1.5);
    const double lambda = 0.2 + rng.uniform();
    const CompositeTerm phi = it % 2 == 0 ? CompositeTerm::zero() : CompositeTerm::l1(0.2);
    const ProxResult pr = prox_map(k, phi, x, v, lambda);
    worst_kkt = std::max(worst_kkt, pr.kkt_residual / (1.0 + v.norm()));

    auto scaled = [&](const Eigen::VectorXd& y) { return lambda * (y.dot(v) + phi.value(y)); };
    for (int probe = 0; probe < 20; ++probe) {
      const Eigen::VectorXd pnt = detail::rand_vec(rng, 3, 1.5);
      const double lhs = scaled(pnt) + bregman_div(k, pnt, x);
      const double rhs = scaled(pr.y) + bregman_div(k, pr.y, x) + bregman_div(k, pnt, pr.y);
      worst_tseng = std::max(worst_tseng, (rhs - lhs) / (1.0 + std::abs(lhs)));
    }

    const double disp = (x - pr.y).norm();
    if (disp > 1e-12) {
      const auto [mu, L] = mu_L_over_segment(k, x, pr.y);
      const double lam_vu = lambda * (v + pr.u).norm();
      worst_sand = std::max({worst_sand, mu * disp - lam_vu - 1e-8 * (1.0 + lam_vu),
                             lam_vu - L * disp - 1e-8 * (1.0 + lam_vu)});
    }

    if (it % 5 == 0) {
      const Eigen::VectorXd center = detail::rand_vec(rng, 3, 0.5);
      const double radius = 0.3 + 0.4 * rng.uniform();
      const CompositeTerm caged = with_ball(phi, center, radius);
      const Eigen::VectorXd xc = center + 0.5 * radius * detail::rand_vec(rng, 3, 0.3).normalized();
      ProxOptions opt;
      const Eigen::VectorXd sa = center;
      const Eigen::VectorXd ya = prox_map_constrained_inner(k, caged, xc, v, lambda, opt, nullptr, &sa);
      const Eigen::VectorXd yb = prox_map_constrained_inner(k, caged, xc, v, lambda, opt);
      worst_unique = std::max(worst_unique, (ya - yb).norm());
    }
  }
  detail::add_check(out, "kkt-residual-relative", worst_kkt, 1e-9);
  detail::add_check(out, "three-point-property", worst_tseng, 1e-8);
  detail::add_check(out, "witness-sandwich", worst_sand, 0.0);
  detail::add_check(out, "inner-solver-uniqueness", worst_unique, 1e-8);
  return out;
}

inline std::vector<CheckResult> verify_mappings(std::uint64_t seed) {
  std::vector<CheckResult> out;
  RandomStream rng(seed);
  const Problem cubic = make_cubic_finite_sum(16, 3, seed + 2);

  double worst_ratio = 0.0, worst_smooth = 0.0, worst_near = 0.0;
  double worst_lim_order = 10.0;
  const KernelRegularity reg = regularity_constants(cubic.kernel);
  for (int it = 0; it < 500; ++it) {
    const int r = 1 + static_cast<int>(rng.uniform_int(4));
    const KernelModel k = KernelModel::polynomial(r);
    const Eigen::VectorXd x = detail::rand_vec(rng, 3, 1.5);
    const Eigen::VectorXd g = cubic.eval_grad(x);
    const double lambda = 0.05 + rng.uniform();
    const CompositeTerm phi = it % 2 == 0 ? CompositeTerm::zero() : CompositeTerm::l1(0.1);
    const Eigen::VectorXd y = prox_map(k, phi, x, g, lambda).y;
    const double nG = (x - y).norm() / lambda;
    if (nG > 1e-10) {
      const double nD = (grad_h(k, x) - grad_h(k, y)).norm() / lambda;
      const auto [mu, L] = mu_L_over_segment(k, x, y);
      worst_ratio = std::max({worst_ratio, mu - nD / nG - 1e-7, nD / nG - L - 1e-7});
    }
    // kernel and step independence of the dual mapping in the smooth case
    const Eigen::VectorXd d = grad_map_D(k, CompositeTerm::zero(), x, g, lambda);
    worst_smooth = std::max(worst_smooth, (d - g).norm() / (1.0 + g.norm()));
  }
  for (int it = 0; it < 50; ++it) {
    const Eigen::VectorXd x = detail::rand_vec(rng, 3, 1.2);
    const Eigen::VectorXd g = cubic.eval_grad(x);
    if (g.norm() < 1e-4) continue;
    const Eigen::VectorXd lim = limiting_map(cubic.kernel, x, g);
    std::vector<std::pair<double, double>> pts;
    for (const double lambda : {1e-2, 1e-3, 1e-4}) {
      const double err =
          (grad_map_G(cubic.kernel, CompositeTerm::zero(), x, g, lambda) - lim).norm();
      pts.push_back({lambda, std::max(err, 1e-15)});
    }
    worst_lim_order = std::min(worst_lim_order, fit_trend(pts, "lambda").slope);
  }
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd x = detail::rand_vec(rng, 3, 1.0);
    const double lambda = 0.02 + 0.2 * rng.uniform();
    const CompositeTerm phi = it % 2 == 0 ? CompositeTerm::zero() : CompositeTerm::l1(0.15);
    const Eigen::VectorXd g = cubic.eval_grad(x);
    const ProxResult pr = prox_map(cubic.kernel, phi, x, g, lambda);
    if ((x - pr.y).norm() > reg.delta) continue;
    const double eps =
        (grad_h(cubic.kernel, x) - grad_h(cubic.kernel, pr.y)).squaredNorm() / (lambda * lambda);
    const double dist = dist_to_subdifferential(cubic.eval_grad(pr.y), phi, pr.y);
    const double factor = 1.0 + cubic.smad_L * lambda * reg.kappa_delta;
    worst_near = std::max(worst_near, dist * dist - factor * factor * eps - 1e-10);
  }
  detail::add_check(out, "dual/primal-ratio-sandwich", worst_ratio, 0.0);
  detail::add_check(out, "smooth-dual-equals-gradient", worst_smooth, 1e-9);
  detail::add_check(out, "limiting-map-order", 0.9 - worst_lim_order, 0.0);
  detail::add_check(out, "near-stationarity-transfer", worst_near, 0.0);
  return out;
}

inline std::vector<CheckResult> verify_problems(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const Problem pc = make_cubic_finite_sum(16, 4, seed + 3);
  RandomStream rng(seed);

  double worst_mean = 0.0;
  for (int it = 0; it < 20; ++it) {
    const Eigen::VectorXd x = detail::rand_vec(rng, 4, 1.5);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
    for (int i = 0; i < pc.n; ++i) mean += pc.grad_component(i, x);
    mean /= pc.n;
    worst_mean = std::max(worst_mean, (mean - pc.eval_grad(x)).norm());
  }
  detail::add_check(out, "finite-sum-mean-identity", worst_mean, 1e-13);

  double acc = 0.0;
  for (const double li : pc.component_L) acc += li * li;
  detail::add_check(out, "aggregate-L-recompute", std::abs(std::sqrt(acc / pc.n) - pc.smad_L),
                    1e-12);

  const SmadReport rep = smad_check(pc, pc.kernel, pc.smad_L, 200, seed + 4);
  detail::add_check(out, "smad-eig-certificate", rep.max_eig_violation, 2e-4);
  detail::add_check(out, "smad-descent-certificate", rep.max_descent_violation, 1e-7);

  const Problem pe = make_cubic_expectation(seed);
  double worst_var = 0.0;
  for (const double xv : {0.0, 1.0, 3.0}) {
    Eigen::VectorXd x(1);
    x << xv;
    RandomStream draw(seed + 5);
    double mean = 0.0, sq = 0.0;
    const long N = 200000;
    for (long i = 0; i < N; ++i) {
      const double g = pe.sample_grad(draw, x)(0);
      mean += g;
      sq += g * g;
    }
    mean /= N;
    sq /= N;
    const double var = sq - mean * mean;
    worst_var = std::max(worst_var, var / std::pow(pe.sigma_fn(x), 2) - 1.05);
  }
  detail::add_check(out, "variance-envelope", worst_var, 0.0);
  return out;
}

inline std::vector<CheckResult> verify_solvers(std::uint64_t seed) {
  std::vector<CheckResult> out;

  // divergent 1D replay
  const Problem p2 = make_example2(4);
  const Trace t2 = bpg_deterministic(p2, p2.kernel, 1.0, p2.x0, 500);
  double worst_replay = 0.0, worst_dual = 0.0;
  for (int k = 0; k < 500; ++k) {
    worst_replay = std::max(worst_replay, std::abs(t2.iterates[k](0) -
                                                   std::pow(static_cast<double>(k), 1.0 / 3.0)));
    worst_dual = std::max(worst_dual, std::abs(t2.records[k].norm_D - 1.0));
  }
  detail::add_check(out, "divergent-replay", worst_replay, 1e-9);
  detail::add_check(out, "divergent-dual-mapping", worst_dual, 1e-9);

  // monotone descent and divergence summability on the hard 2D instance
  const Problem p1 = make_example1(4);
  const double lambda = 1.0 / (2.0 * p1.smad_L);
  const Trace t1 = bpg_deterministic(p1, p1.kernel, lambda, p1.x0, 1000);
  double worst_descent = 0.0, div_sum = 0.0;
  for (std::size_t k = 0; k + 1 < t1.iterates.size(); ++k) {
    worst_descent = std::max(worst_descent, t1.records[k + 1].psi - t1.records[k].psi);
    div_sum += bregman_div(p1.kernel, t1.iterates[k + 1], t1.iterates[k]);
  }
  const double horizon = t1.records.front().psi - p1.psi(t1.x_final);
  detail::add_check(out, "bpg-monotone-descent", worst_descent, 1e-10);
  detail::add_check(out, "divergence-summability",
                    div_sum - horizon / (1.0 / lambda - p1.smad_L), 1e-10);

  // restricted-mapping bound along a stochastic run
  const Problem pc = make_cubic_finite_sum(16, 4, seed + 6);
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.epsilon = 1e-3;
  cfg.delta_psi = 1.0;
  cfg.max_total_samples = 20000;
  const EpochRunResult res = alg1_run(pc, pc.kernel, cfg);
  double worst_bound = 0.0;
  std::size_t idx = 0;
  for (std::size_t e = 0; e < res.trace.epochs.size(); ++e) {
    for (long k = 0; k < res.trace.epochs[e].tau_realized; ++k, ++idx) {
      const IterRecord& r = res.trace.records[idx];
      const Eigen::VectorXd& xk = res.trace.iterates[idx];
      const Eigen::VectorXd& xk1 =
          idx + 1 < res.trace.iterates.size() ? res.trace.iterates[idx + 1] : res.trace.x_final;
      const double lhs = r.norm_restricted_G * r.norm_restricted_G;
      const double rhs = 2.0 * (xk - xk1).squaredNorm() / (res.trace.lambda * res.trace.lambda) +
                         2.0 * r.err_estimator * r.err_estimator;
      worst_bound = std::max(worst_bound, lhs - rhs - 1e-9 * (1.0 + lhs));
    }
  }
  detail::add_check(out, "restricted-mapping-bound", worst_bound, 0.0);

  // census replay identity
  const EventCensus replay = event_census(pc, pc.kernel, res.trace);
  const bool census_same = replay.I1 == res.census.I1 && replay.I2 == res.census.I2;
  detail::add_check(out, "census-replay-identity", census_same ? 0.0 : 1.0, 0.0);

  // adaptive control: delta-close steps and per-step descent
  const Problem pl1 = make_cubic_finite_sum(16, 4, seed + 7, 0.1);
  SolverConfig tcfg;
  tcfg.epsilon = 1e-4;
  tcfg.max_iter = 20000;
  const TbpgResult tres = tbpg_run(pl1, pl1.kernel, tcfg);
  const KernelRegularity reg = regularity_constants(pl1.kernel);
  double worst_step = 0.0, worst_tdesc = 0.0;
  for (std::size_t k = 0; k + 1 < tres.trace.iterates.size(); ++k) {
    const Eigen::VectorXd& xk = tres.trace.iterates[k];
    const Eigen::VectorXd& xk1 = tres.trace.iterates[k + 1];
    worst_step = std::max(worst_step, (xk1 - xk).norm() - reg.delta);
    const double mu_seg = mu_L_over_segment(pl1.kernel, xk, xk1).first;
    const double drop = 1.5 * pl1.smad_L * mu_seg * (xk1 - xk).squaredNorm();
    worst_tdesc = std::max(worst_tdesc, pl1.psi(xk1) - (pl1.psi(xk) - drop));
  }
  detail::add_check(out, "adaptive-steps-delta-close", worst_step, 1e-9);
  detail::add_check(out, "adaptive-per-step-descent", worst_tdesc, 1e-10);
  return out;
}

inline std::vector<CheckResult> verify_harness(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const Problem p = make_cubic_finite_sum(8, 3, seed + 8);
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.S = 3;
  cfg.epsilon = 1e-2;
  cfg.delta_psi = 0.5;
  const std::string a = trace_to_csv(alg1_run(p, p.kernel, cfg).trace);
  const std::string b = trace_to_csv(alg1_run(p, p.kernel, cfg).trace);
  detail::add_check(out, "run-reproducibility", a == b ? 0.0 : 1.0, 0.0);

  std::istringstream in(a);
  const auto parsed = parse_trace_csv(in);
  bool lossless = parsed.size() == alg1_run(p, p.kernel, cfg).trace.records.size();
  detail::add_check(out, "csv-round-trip", lossless ? 0.0 : 1.0, 0.0);

  std::vector<std::pair<double, double>> pts;
  for (const double x : {1.0, 2.0, 5.0, 11.0}) pts.push_back({x, 7.0 * std::sqrt(x)});
  detail::add_check(out, "trend-exact-law", std::abs(fit_trend(pts).slope - 0.5), 1e-12);
  return out;
}

// All brute-force oracles behind the frozen expected values: dense grid prox,
// exhaustive estimator enumeration, Monte-Carlo moments, finite differences.
inline std::vector<CheckResult> oracle_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  RandomStream rng(seed);

  // grid oracle for the constrained prox, a few 2D instances
  double worst_grid = 0.0;
  for (int it = 0; it < 5; ++it) {
    const KernelModel k = KernelModel::polynomial(1 + static_cast<int>(rng.uniform_int(3)));
    const Eigen::VectorXd center = detail::rand_vec(rng, 2, 0.8);
    const double radius = 0.3 + 0.5 * rng.uniform();
    const Eigen::VectorXd x = center + radius * 0.5 * detail::rand_vec(rng, 2, 0.4).normalized();
    const Eigen::VectorXd v = detail::rand_vec(rng, 2, 2.0);
    const double lambda = 0.2 + rng.uniform();
    const CompositeTerm phi = it % 2 == 0 ? CompositeTerm::ball(center, radius)
                                          : CompositeTerm::l1_plus_ball(0.25, center, radius);
    const ProxResult pr = prox_map(k, phi, x, v, lambda);
    // local grid refinement around the ball
    Eigen::VectorXd lo = center.array() - radius;
    Eigen::VectorXd hi = center.array() + radius;
    Eigen::VectorXd best = center;
    auto obj = [&](const Eigen::VectorXd& y) {
      return y.dot(v) + phi.value(y) + bregman_div(k, y, x) / lambda;
    };
    double best_val = obj(best);
    for (int round = 0; round < 8; ++round) {
      const int nsteps = 80;
      Eigen::VectorXd cand(2);
      for (int i = 0; i <= nsteps; ++i) {
        for (int j = 0; j <= nsteps; ++j) {
          cand(0) = lo(0) + (hi(0) - lo(0)) * i / nsteps;
          cand(1) = lo(1) + (hi(1) - lo(1)) * j / nsteps;
          const double off = (cand - center).norm();
          if (off > radius) cand = center + (radius / off) * (cand - center);
          const double val = obj(cand);
          if (val < best_val) {
            best_val = val;
            best = cand;
          }
        }
      }
      const Eigen::VectorXd width = (hi - lo) / nsteps * 4.0;
      lo = best - width;
      hi = best + width;
    }
    worst_grid = std::max(worst_grid, (pr.y - best).norm());
  }
  detail::add_check(out, "grid-prox-oracle", worst_grid, 1e-3);

  // exhaustive martingale check on a small finite sum
  const Problem p6 = make_cubic_finite_sum(6, 2, seed + 1);
  Eigen::VectorXd x0(2), x1(2);
  x0 << 0.4, -0.1;
  x1 << 0.25, 0.05;
  const Eigen::VectorXd v0 = p6.eval_grad(x0);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  int count = 0;
  for (int i = 0; i < p6.n; ++i) {
    for (int j = 0; j < p6.n; ++j) {
      mean += sarah_step(v0, p6, {i, j}, x1, x0);
      ++count;
    }
  }
  mean /= count;
  const Eigen::VectorXd expected = v0 + p6.eval_grad(x1) - p6.eval_grad(x0);
  detail::add_check(out, "estimator-martingale", (mean - expected).norm(), 1e-12);

  // Monte-Carlo Gaussian moment identities behind the expectation instance
  double worst_mc = 0.0;
  {
    RandomStream draw(seed + 2);
    const long N = 2'000'000;
    const double xv = 1.0;
    double m1 = 0.0, m2 = 0.0;
    for (long i = 0; i < N; ++i) {
      const double a = draw.normal();
      const double b = draw.normal();
      const double d = a * xv - b;
      m1 += d * d;
      m2 += a * a * d * d;
    }
    m1 /= N;
    m2 /= N;
    const double se = 3.0 * std::sqrt(2.0) * 2.0 / std::sqrt(double(N));
    worst_mc = std::max(std::abs(m1 - 2.0) - se, std::abs(m2 - 4.0) - 10.0 * se);
  }
  detail::add_check(out, "gaussian-moment-oracle", worst_mc, 0.0);

  // finite differences against every analytic gradient in the zoo
  double worst_fd = 0.0;
  const Problem zoo[] = {make_example1(4), make_example2(4), make_cubic_finite_sum(8, 3, seed + 3),
                         make_cubic_expectation(seed)};
  for (const Problem& p : zoo) {
    for (int it = 0; it < 25; ++it) {
      Eigen::VectorXd x(p.dim);
      for (int i = 0; i < p.dim; ++i) {
        x(i) = p.kernel.kind == KernelModel::Kind::MonomialOnly ? 0.5 + 2.0 * rng.uniform()
                                                                : 2.0 * rng.normal();
      }
      const Eigen::VectorXd ga = p.eval_grad(x);
      worst_fd = std::max(worst_fd,
                          (ga - fd_gradient(p.eval_f, x, 1e-5)).norm() / (1.0 + ga.norm()));
    }
  }
  detail::add_check(out, "fd-oracle-zoo", worst_fd, 1e-6);
  return out;
}

inline std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "numerics") return verify_numerics(seed);
  if (suite == "kernels") return verify_kernels(seed);
  if (suite == "prox") return verify_prox(seed);
  if (suite == "mappings") return verify_mappings(seed);
  if (suite == "problems") return verify_problems(seed);
  if (suite == "solvers") return verify_solvers(seed);
  if (suite == "harness") return verify_harness(seed);
  throw ConfigError("unknown verify suite `" + suite + "`");
}

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"numerics", "kernels",  "prox",   "mappings",
                                                 "problems", "solvers",  "harness"};
  return names;
}

}  // namespace bpg
