// Brute-force oracles shared by the unit suites and the acceptance runner.
// These deliberately avoid the library's closed-form code paths.
#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "bpg/prox.hpp"
#include "bpg/rng.hpp"

namespace bpg::testing {

inline Eigen::VectorXd rand_vec(RandomStream& rng, int d, double scale) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = scale * rng.normal();
  return v;
}

inline double prox_objective(const KernelModel& k, const CompositeTerm& phi,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& v, double lambda,
                             const Eigen::VectorXd& y) {
  return y.dot(v) + phi.value(y) + bregman_div(k, y, x) / lambda;
}

// Dense 2D grid over the ball's bounding box, refined around the incumbent;
// infeasible cells are projected onto the boundary so the arc is sampled.
inline Eigen::VectorXd grid_prox_oracle(const KernelModel& k, const CompositeTerm& phi,
                                        const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                        double lambda) {
  Eigen::VectorXd lo = phi.center.array() - phi.radius;
  Eigen::VectorXd hi = phi.center.array() + phi.radius;
  Eigen::VectorXd best = phi.center;
  double best_val = prox_objective(k, phi, x, v, lambda, best);
  for (int round = 0; round < 8; ++round) {
    const int nsteps = 80;
    Eigen::VectorXd cand(2);
    for (int i = 0; i <= nsteps; ++i) {
      for (int j = 0; j <= nsteps; ++j) {
        cand(0) = lo(0) + (hi(0) - lo(0)) * i / nsteps;
        cand(1) = lo(1) + (hi(1) - lo(1)) * j / nsteps;
        const double off = (cand - phi.center).norm();
        if (off > phi.radius) cand = phi.center + (phi.radius / off) * (cand - phi.center);
        const double val = prox_objective(k, phi, x, v, lambda, cand);
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
  return best;
}

// Plain proximal-gradient iteration with Euclidean soft thresholding.
inline Eigen::VectorXd pg_prox_oracle(const KernelModel& k, double l1_weight,
                                      const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                      double lambda) {
  const double reach = x.norm() + lambda * v.norm() + 2.0;
  const double L_h = mu_L_over_ball(k, Eigen::VectorXd::Zero(x.size()), reach).second;
  const double t = lambda / L_h;
  Eigen::VectorXd y = x;
  for (int it = 0; it < 200000; ++it) {
    const Eigen::VectorXd g = v + (grad_h(k, y) - grad_h(k, x)) / lambda;
    const Eigen::VectorXd y_next = soft_threshold(y - t * g, t * l1_weight);
    const double move = (y - y_next).norm();
    y = y_next;
    if (move <= 1e-14 * (1.0 + y.norm())) break;
  }
  return y;
}

}  // namespace bpg::testing
