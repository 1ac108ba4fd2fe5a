#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>

#include "bpg/errors.hpp"
#include "bpg/geometry.hpp"
#include "bpg/rootfind.hpp"

namespace bpg {

// Bregman kernel models.
//   Quadratic       h(x) = ||x||^2 / 2
//   Polynomial(r)   h(x) = ||x||^2 / 2 + ||x||^{r+2} / (r+2), 1-strongly convex
//   MonomialOnly(r) h(x) = x^r / r in 1D, strictly convex on (0, inf) only;
//                   kept solely for the divergent 1D instance it replays.
struct KernelModel {
  enum class Kind { Quadratic, Polynomial, MonomialOnly };
  Kind kind = Kind::Quadratic;
  int r = 0;

  static KernelModel quadratic() { return {Kind::Quadratic, 0}; }
  static KernelModel polynomial(int r) { return {Kind::Polynomial, r}; }
  static KernelModel monomial_only(int r) { return {Kind::MonomialOnly, r}; }
};

struct KernelRegularity {
  double mu = 1.0;           // global strong-convexity lower bound
  double delta = 0.0;        // diameter budget
  double kappa_delta = 1.0;  // uniform local condition-number bound
};

// Large finite sentinel replacing +inf for the quadratic kernel's delta.
inline constexpr double kQuadraticDeltaSentinel = 1e12;

namespace detail {
inline void check_monomial_domain(const Eigen::VectorXd& x) {
  if (x.size() != 1) throw DomainViolation("MonomialOnly kernel is 1D only");
  if (x(0) < 0.0) throw DomainViolation("MonomialOnly kernel requires x >= 0");
}
}  // namespace detail

inline double h_value(const KernelModel& k, const Eigen::VectorXd& x) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return 0.5 * x.squaredNorm();
    case KernelModel::Kind::Polynomial: {
      const double nrm = x.norm();
      return 0.5 * nrm * nrm + std::pow(nrm, k.r + 2) / static_cast<double>(k.r + 2);
    }
    case KernelModel::Kind::MonomialOnly:
      detail::check_monomial_domain(x);
      return std::pow(x(0), k.r) / static_cast<double>(k.r);
  }
  throw UnsupportedKernel("h_value: unknown kernel kind");
}

inline Eigen::VectorXd grad_h(const KernelModel& k, const Eigen::VectorXd& x) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return x;
    case KernelModel::Kind::Polynomial:
      return (1.0 + std::pow(x.norm(), k.r)) * x;
    case KernelModel::Kind::MonomialOnly: {
      detail::check_monomial_domain(x);
      Eigen::VectorXd g(1);
      g(0) = std::pow(x(0), k.r - 1);
      return g;
    }
  }
  throw UnsupportedKernel("grad_h: unknown kernel kind");
}

// Closed-form Hessian eigenvalue extremes.
// Polynomial(r): hess h(x) = (||x||^r + 1) I + r ||x||^{r-2} x x^T, so
// lambda_max = (r+1)||x||^r + 1 and lambda_min = ||x||^r + 1.
inline std::pair<double, double> hess_eig_bounds(const KernelModel& k, const Eigen::VectorXd& x) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return {1.0, 1.0};
    case KernelModel::Kind::Polynomial: {
      const double nr = std::pow(x.norm(), k.r);
      return {nr + 1.0, (k.r + 1) * nr + 1.0};
    }
    case KernelModel::Kind::MonomialOnly: {
      detail::check_monomial_domain(x);
      const double v = (k.r - 1) * std::pow(x(0), k.r - 2);
      return {v, v};
    }
  }
  throw UnsupportedKernel("hess_eig_bounds: unknown kernel kind");
}

// Exact eigenvalue extremes over the segment [a, b]. Both closed-form
// eigenvalues are monotone in ||x||, so the segment's norm extremes decide.
inline std::pair<double, double> mu_L_over_segment(const KernelModel& k, const Eigen::VectorXd& a,
                                                   const Eigen::VectorXd& b) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return {1.0, 1.0};
    case KernelModel::Kind::Polynomial: {
      const auto [mn, mx] = segment_norm_extrema(a, b);
      return {std::pow(mn, k.r) + 1.0, (k.r + 1) * std::pow(mx, k.r) + 1.0};
    }
    case KernelModel::Kind::MonomialOnly: {
      detail::check_monomial_domain(a);
      detail::check_monomial_domain(b);
      const double lo = std::min(a(0), b(0));
      const double hi = std::max(a(0), b(0));
      return {(k.r - 1) * std::pow(lo, k.r - 2), (k.r - 1) * std::pow(hi, k.r - 2)};
    }
  }
  throw UnsupportedKernel("mu_L_over_segment: unknown kernel kind");
}

// Exact eigenvalue extremes over the closed ball B(center, radius).
inline std::pair<double, double> mu_L_over_ball(const KernelModel& k, const Eigen::VectorXd& center,
                                                double radius) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return {1.0, 1.0};
    case KernelModel::Kind::Polynomial: {
      const double c = center.norm();
      const double mn = std::max(0.0, c - radius);
      const double mx = c + radius;
      return {std::pow(mn, k.r) + 1.0, (k.r + 1) * std::pow(mx, k.r) + 1.0};
    }
    case KernelModel::Kind::MonomialOnly: {
      detail::check_monomial_domain(center);
      const double lo = std::max(0.0, center(0) - radius);
      const double hi = center(0) + radius;
      return {(k.r - 1) * std::pow(lo, k.r - 2), (k.r - 1) * std::pow(hi, k.r - 2)};
    }
  }
  throw UnsupportedKernel("mu_L_over_ball: unknown kernel kind");
}

// D_h(y, x) = h(y) - h(x) - <grad h(x), y - x>.
inline double bregman_div(const KernelModel& k, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& x) {
  return h_value(k, y) - h_value(k, x) - grad_h(k, x).dot(y - x);
}

// Regularity constants: Polynomial(r) admits kappa_h^delta = 3r + 4 for any
// delta <= 1/r; the quadratic kernel has unit condition number everywhere.
inline KernelRegularity regularity_constants(const KernelModel& k) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return {1.0, kQuadraticDeltaSentinel, 1.0};
    case KernelModel::Kind::Polynomial:
      return {1.0, 1.0 / static_cast<double>(k.r), 3.0 * k.r + 4.0};
    case KernelModel::Kind::MonomialOnly:
      throw UnsupportedKernel("regularity_constants: MonomialOnly is not globally strongly convex");
  }
  throw UnsupportedKernel("regularity_constants: unknown kernel kind");
}

// Inverse of grad h. For Polynomial(r) the gradient is radial with magnitude
// t + t^{r+1} at ||y|| = t, so a scalar root solve recovers the radius.
inline Eigen::VectorXd grad_h_inverse(const KernelModel& k, const Eigen::VectorXd& w) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return w;
    case KernelModel::Kind::Polynomial: {
      const double wn = w.norm();
      if (wn == 0.0) return Eigen::VectorXd::Zero(w.size());
      const int r = k.r;
      ScalarRootSpec spec;
      spec.target = wn;
      spec.bracket_lo = 0.0;
      spec.bracket_hi = std::min(wn, std::pow(wn, 1.0 / (r + 1)) + 1.0);
      spec.abs_tol = 1e-13 * (1.0 + wn);
      const double t = solve_monotone([r](double u) { return u + std::pow(u, r + 1); },
                                      [r](double u) { return 1.0 + (r + 1) * std::pow(u, r); },
                                      spec);
      return (t / wn) * w;
    }
    case KernelModel::Kind::MonomialOnly: {
      if (w.size() != 1) throw DomainViolation("MonomialOnly kernel is 1D only");
      if (w(0) < 0.0) {
        throw DomainViolation("grad_h_inverse: MonomialOnly requires a nonnegative target");
      }
      Eigen::VectorXd y(1);
      y(0) = std::pow(w(0), 1.0 / (k.r - 1));
      return y;
    }
  }
  throw UnsupportedKernel("grad_h_inverse: unknown kernel kind");
}

// Solves hess h(x) * g = v. Polynomial kernels use the Sherman-Morrison
// closed form for alpha I + beta x x^T.
inline Eigen::VectorXd hess_solve(const KernelModel& k, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& v) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return v;
    case KernelModel::Kind::Polynomial: {
      const double nrm = x.norm();
      const double alpha = std::pow(nrm, k.r) + 1.0;
      if (nrm == 0.0) return v / alpha;
      const double beta = k.r * std::pow(nrm, k.r - 2);
      return v / alpha - (beta * x.dot(v) / (alpha * (alpha + beta * nrm * nrm))) * x;
    }
    case KernelModel::Kind::MonomialOnly: {
      detail::check_monomial_domain(x);
      const double hxx = (k.r - 1) * std::pow(x(0), k.r - 2);
      if (hxx == 0.0) throw DomainViolation("hess_solve: singular MonomialOnly Hessian at 0");
      return v / hxx;
    }
  }
  throw UnsupportedKernel("hess_solve: unknown kernel kind");
}

// hess h(x) * v, used by tests.
inline Eigen::VectorXd hess_apply(const KernelModel& k, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& v) {
  switch (k.kind) {
    case KernelModel::Kind::Quadratic:
      return v;
    case KernelModel::Kind::Polynomial: {
      const double nrm = x.norm();
      const double alpha = std::pow(nrm, k.r) + 1.0;
      if (nrm == 0.0) return alpha * v;
      const double beta = k.r * std::pow(nrm, k.r - 2);
      return alpha * v + beta * x.dot(v) * x;
    }
    case KernelModel::Kind::MonomialOnly: {
      detail::check_monomial_domain(x);
      return (k.r - 1) * std::pow(x(0), k.r - 2) * v;
    }
  }
  throw UnsupportedKernel("hess_apply: unknown kernel kind");
}

}  // namespace bpg
