#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "bpg/composite.hpp"
#include "bpg/kernels.hpp"
#include "bpg/rootfind.hpp"

namespace bpg {

struct ProxResult {
  Eigen::VectorXd y;            // minimizer
  Eigen::VectorXd u;            // subgradient witness, u in dphi(y) up to tolerance
  double kkt_residual = 0.0;    // || lambda(v+u*) + grad h(y) - grad h(x) || minimized over u*
  bool used_closed_form = true;
};

struct ProxOptions {
  double inner_tol = 1e-10;  // composite-gradient-mapping norm of the inner subproblem
  long inner_max_iter = 100000;
};

// u = (grad h(x) - grad h(y)) / lambda - v. Exact KKT rearrangement: if y is
// the prox output then u lies in dphi(y).
inline Eigen::VectorXd subgrad_witness(const KernelModel& k, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& y, const Eigen::VectorXd& v,
                                       double lambda) {
  return (grad_h(k, x) - grad_h(k, y)) / lambda - v;
}

namespace detail {

// Distance from u to the subdifferential of phi at y. The L1 part contributes
// a per-coordinate interval, an active ball constraint contributes the normal
// ray {nu * d : nu >= 0}; for the combined set the distance is convex in nu
// and located by ternary search.
inline double dist_to_subdiff_of_phi(const CompositeTerm& phi, const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& u) {
  const double w = phi.l1_weight();
  const double z_tol = 1e-10 * (1.0 + y.cwiseAbs().maxCoeff());

  auto l1_dist = [&](const Eigen::VectorXd& uu) {
    if (!phi.has_l1()) return uu.norm();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      double di;
      if (y(i) > z_tol) {
        di = uu(i) - w;
      } else if (y(i) < -z_tol) {
        di = uu(i) + w;
      } else {
        di = std::max(0.0, std::abs(uu(i)) - w);
      }
      acc += di * di;
    }
    return std::sqrt(acc);
  };

  bool on_boundary = false;
  Eigen::VectorXd dir;
  if (phi.has_ball()) {
    const Eigen::VectorXd rel = y - phi.center;
    const double rn = rel.norm();
    if (rn >= phi.radius - 1e-9 * (1.0 + phi.radius) && rn > 0.0) {
      on_boundary = true;
      dir = rel / rn;
    }
  }
  if (!on_boundary) return l1_dist(u);
  if (!phi.has_l1()) {
    const double along = std::max(0.0, u.dot(dir));
    return (u - along * dir).norm();
  }
  // min over nu >= 0 of l1_dist(u - nu * dir); convex in nu.
  double lo = 0.0;
  double hi = std::max(0.0, u.dot(dir)) + w * std::sqrt(static_cast<double>(y.size())) +
              u.norm() + 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (l1_dist(u - m1 * dir) <= l1_dist(u - m2 * dir)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return l1_dist(u - 0.5 * (lo + hi) * dir);
}

// Euclidean prox of t*w*||.||_1 + indicator of B(c, R) at point p.
// The KKT system gives u(nu) = soft(p + nu*c, t*w) / (1 + nu) with nu >= 0 the
// ball multiplier; ||u(nu) - c|| decreases to 0, so a scalar solve finds the
// active-constraint multiplier.
inline Eigen::VectorXd prox_l1_ball_euclidean(const Eigen::VectorXd& p, double tw,
                                              const Eigen::VectorXd& c, double R) {
  Eigen::VectorXd u0 = soft_threshold(p, tw);
  if ((u0 - c).norm() <= R) return u0;
  if (tw == 0.0) {
    return c + (R / (p - c).norm()) * (p - c);  // plain projection
  }
  auto q = [&](double nu) {
    return (soft_threshold(p + nu * c, tw) / (1.0 + nu) - c).norm() - R;
  };
  double hi = 1.0;
  int guard = 0;
  while (q(hi) > 0.0 && guard++ < 200) hi *= 2.0;
  ScalarRootSpec spec;
  spec.target = 0.0;
  spec.bracket_lo = 0.0;
  spec.bracket_hi = hi;
  spec.abs_tol = 1e-13 * (1.0 + R);
  spec.max_iter = 400;
  const double nu = solve_monotone(q, spec);
  return soft_threshold(p + nu * c, tw) / (1.0 + nu);
}

// Closed-form unconstrained prox paths (Zero and L1).
inline Eigen::VectorXd prox_unconstrained_closed_form(const KernelModel& k,
                                                      const CompositeTerm& phi,
                                                      const Eigen::VectorXd& x,
                                                      const Eigen::VectorXd& v, double lambda) {
  const Eigen::VectorXd target = grad_h(k, x) - lambda * v;
  if (!phi.has_l1()) {
    return grad_h_inverse(k, target);
  }
  // L1 path: first coordinate-shrink the dual target, then undo the radial
  // scale factor s = 1 + ||y||^r from grad h(y) = (1 + ||y||^r) y.
  if (k.kind == KernelModel::Kind::MonomialOnly) {
    throw UnsupportedKernel("prox: L1 with MonomialOnly kernel is unsupported");
  }
  const Eigen::VectorXd z = soft_threshold(target, lambda * phi.l1_weight());
  if (k.kind == KernelModel::Kind::Quadratic) return z;
  const double zn = z.norm();
  if (zn == 0.0) return Eigen::VectorXd::Zero(x.size());
  const int r = k.r;
  const double znr = std::pow(zn, r);
  ScalarRootSpec spec;
  spec.target = znr;
  spec.bracket_lo = 1.0;
  spec.bracket_hi = 2.0 + zn;
  spec.abs_tol = 1e-13 * (1.0 + znr);
  const double s =
      solve_monotone([r](double t) { return std::pow(t, r + 1) - std::pow(t, r); },
                     [r](double t) { return (r + 1) * std::pow(t, r) - r * std::pow(t, r - 1); },
                     spec);
  return z / s;
}

}  // namespace detail

//                                min over u* in dphi(y)
inline double kkt_residual_check(const KernelModel& k, const CompositeTerm& phi,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& v, double lambda,
                                 const Eigen::VectorXd& y) {
  const Eigen::VectorXd u = subgrad_witness(k, x, y, v, lambda);
  return lambda * detail::dist_to_subdiff_of_phi(phi, y, u);
}

// Inner solver for ball-constrained composites: proximal gradient on the
// smooth part s(y) = <y, v> + D_h(y, x) / lambda with step 1 / L_h(ball),
// Euclidean prox on the remaining L1 + ball term. A Lagrange fast path
// accepts the unconstrained closed form whenever it already lies inside the
// ball. Linear convergence follows from mu_h >= 1 on the ball.
inline Eigen::VectorXd prox_map_constrained_inner(const KernelModel& k, const CompositeTerm& phi,
                                                  const Eigen::VectorXd& x,
                                                  const Eigen::VectorXd& v, double lambda,
                                                  const ProxOptions& opt = {},
                                                  bool* closed_form = nullptr,
                                                  const Eigen::VectorXd* warm_start = nullptr) {
  if (!phi.has_ball()) throw Unsupported("prox_map_constrained_inner: no ball constraint");
  if (k.kind == KernelModel::Kind::MonomialOnly) {
    throw UnsupportedKernel("prox: constrained composites with MonomialOnly kernel");
  }
  const Eigen::VectorXd& c = phi.center;
  const double R = phi.radius;
  const double w = phi.l1_weight();

  CompositeTerm unconstrained = phi.has_l1() ? CompositeTerm::l1(w) : CompositeTerm::zero();
  const Eigen::VectorXd y_free = detail::prox_unconstrained_closed_form(k, unconstrained, x, v, lambda);
  if ((y_free - c).norm() <= R) {
    if (closed_form) *closed_form = true;
    return y_free;
  }
  if (closed_form) *closed_form = false;

  const auto [mu_ball, L_ball] = mu_L_over_ball(k, c, R);
  (void)mu_ball;
  const double t = lambda / L_ball;

  Eigen::VectorXd y;
  if (warm_start && ((*warm_start) - c).norm() <= R * (1.0 + 1e-12)) {
    y = *warm_start;
  } else {
    y = c + (R / (y_free - c).norm()) * (y_free - c);
  }
  const Eigen::VectorXd ghx = grad_h(k, x);
  const double tol = opt.inner_tol * std::max(1.0, v.norm());
  int stalled = 0;
  for (long iter = 0; iter < opt.inner_max_iter; ++iter) {
    const Eigen::VectorXd g = v + (grad_h(k, y) - ghx) / lambda;
    const Eigen::VectorXd y_next = detail::prox_l1_ball_euclidean(y - t * g, t * w, c, R);
    const double diff = (y - y_next).norm();
    y = y_next;
    if (diff / t <= tol) return y;
    // progress at the floating-point floor; further iterations cannot improve
    if (diff <= 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + y.norm())) {
      if (++stalled >= 3) return y;
    } else {
      stalled = 0;
    }
  }
  throw NoConvergence("prox_map_constrained_inner: inner iteration limit reached");
}

// Bregman proximal mapping: argmin_y <y, v> + phi(y) + D_h(y, x) / lambda.
inline ProxResult prox_map(const KernelModel& k, const CompositeTerm& phi,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& v, double lambda,
                           const ProxOptions& opt = {}) {
  ProxResult res;
  if (phi.has_ball()) {
    res.y = prox_map_constrained_inner(k, phi, x, v, lambda, opt, &res.used_closed_form);
  } else {
    res.y = detail::prox_unconstrained_closed_form(k, phi, x, v, lambda);
    res.used_closed_form = true;
  }
  res.u = subgrad_witness(k, x, res.y, v, lambda);
  res.kkt_residual = lambda * detail::dist_to_subdiff_of_phi(phi, res.y, res.u);
  return res;
}

}  // namespace bpg
