#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bpg/composite.hpp"
#include "bpg/finite_diff.hpp"
#include "bpg/kernels.hpp"
#include "bpg/mappings.hpp"
#include "bpg/rng.hpp"

namespace bpg {

// A test problem: smooth part f (deterministic, finite sum of n components,
// or seedable expectation sampler), nonsmooth term phi, certified smooth
// adaptability constant, and the kernel the constants were certified against.
struct Problem {
  enum class Structure { Deterministic, FiniteSum, Expectation };

  std::string name;
  int dim = 1;
  Structure structure = Structure::Deterministic;
  int n = 0;  // finite-sum component count

  std::function<double(const Eigen::VectorXd&)> eval_f;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval_grad;
  std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)> grad_component;
  // mean over the batch of grad f_i(x_new) - grad f_i(x_old); the SARAH hot path
  std::function<Eigen::VectorXd(const std::vector<int>&, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      batch_grad_delta;
  // one i.i.d. stochastic gradient draw
  std::function<Eigen::VectorXd(RandomStream&, const Eigen::VectorXd&)> sample_grad;
  // one draw evaluated at two points (same sample), for the SARAH recursion
  std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(RandomStream&, const Eigen::VectorXd&,
                                                            const Eigen::VectorXd&)>
      sample_grad_pair;

  CompositeTerm phi;
  double smad_L = 1.0;
  std::vector<double> component_L;
  double L_max = 0.0;
  std::function<double(const Eigen::VectorXd&)> sigma_fn;  // variance envelope, may be empty

  KernelModel kernel = KernelModel::quadratic();
  Eigen::VectorXd x0;
  bool has_lower_bound = false;
  double psi_lower_bound = 0.0;

  double psi(const Eigen::VectorXd& x) const { return eval_f(x) + phi.value(x); }
  double rho() const { return phi.rho(dim); }
};

// Problem-facing wrappers for the stationarity measures.
inline Eigen::VectorXd grad_map_G(const KernelModel& k, const Problem& p, const Eigen::VectorXd& x,
                                  double lambda) {
  return grad_map_G(k, p.phi, x, p.eval_grad(x), lambda);
}
inline Eigen::VectorXd grad_map_D(const KernelModel& k, const Problem& p, const Eigen::VectorXd& x,
                                  double lambda) {
  return grad_map_D(k, p.phi, x, p.eval_grad(x), lambda);
}
inline Eigen::VectorXd limiting_map(const KernelModel& k, const Problem& p,
                                    const Eigen::VectorXd& x) {
  return limiting_map(k, x, p.eval_grad(x));
}
inline double dist_to_subdifferential(const Problem& p, const Eigen::VectorXd& x) {
  return dist_to_subdifferential(p.eval_grad(x), p.phi, x);
}

namespace detail {

// Largest |generalized eigenvalue| of (M, H) for 2x2 symmetric M, H with H > 0:
// the smallest L with -L H <= M <= L H.
inline double gen_eig_ratio_2x2(const Eigen::Matrix2d& M, const Eigen::Matrix2d& H) {
  // det(M - t H) = 0  =>  (detH) t^2 - (m11 h22 + m22 h11 - 2 m12 h12) t + detM = 0
  const double a = H.determinant();
  const double b = -(M(0, 0) * H(1, 1) + M(1, 1) * H(0, 0) - 2.0 * M(0, 1) * H(0, 1));
  const double c = M.determinant();
  const double disc = std::max(0.0, b * b - 4.0 * a * c);
  const double s = std::sqrt(disc);
  const double t1 = (-b + s) / (2.0 * a);
  const double t2 = (-b - s) / (2.0 * a);
  return std::max(std::abs(t1), std::abs(t2));
}

struct Example1Fns {
  int r;
  double u(double x1) const { return 1.0 / (std::sqrt(2.0) + std::log1p(x1 * x1)); }
  double f(const Eigen::VectorXd& x) const {
    return u(x(0)) + std::pow(x(0), r) * x(1) * x(1);
  }
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const {
    const double x1 = x(0), x2 = x(1);
    const double uu = u(x1);
    const double A = 2.0 * x1 / (1.0 + x1 * x1);
    Eigen::VectorXd g(2);
    g(0) = -uu * uu * A + r * std::pow(x1, r - 1) * x2 * x2;
    g(1) = 2.0 * std::pow(x1, r) * x2;
    return g;
  }
  Eigen::Matrix2d hess(const Eigen::VectorXd& x) const {
    const double x1 = x(0), x2 = x(1);
    const double uu = u(x1);
    const double one_sq = 1.0 + x1 * x1;
    const double A = 2.0 * x1 / one_sq;
    const double Ap = (2.0 - 2.0 * x1 * x1) / (one_sq * one_sq);
    Eigen::Matrix2d H;
    H(0, 0) = 2.0 * uu * uu * uu * A * A - uu * uu * Ap + r * (r - 1) * std::pow(x1, r - 2) * x2 * x2;
    H(0, 1) = H(1, 0) = 2.0 * r * std::pow(x1, r - 1) * x2;
    H(1, 1) = 2.0 * std::pow(x1, r);
    return H;
  }
};

}  // namespace detail

// 2D instance f(x1, x2) = 1/(sqrt(2) + ln(1 + x1^2)) + x1^r x2^2 with even
// r >= 4. The x2 = 0 axis is a valley along which the gradient decays only
// logarithmically; the smad constant is certified on [-20, 20]^2 by scanning
// the generalized eigenvalue ratio against the polynomial kernel and doubling.
inline Problem make_example1(int r) {
  if (r < 4 || r % 2 != 0) throw ConfigError("example1 requires an even r >= 4");
  auto fns = std::make_shared<detail::Example1Fns>(detail::Example1Fns{r});
  const KernelModel kernel = KernelModel::polynomial(r);

  double ratio_max = 0.0;
  const int grid_n = 201;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      Eigen::VectorXd x(2);
      x << -20.0 + 40.0 * i / (grid_n - 1), -20.0 + 40.0 * j / (grid_n - 1);
      const Eigen::Matrix2d Hf = fns->hess(x);
      const double nrm = x.norm();
      const double alpha = std::pow(nrm, r) + 1.0;
      Eigen::Matrix2d Hh = alpha * Eigen::Matrix2d::Identity();
      if (nrm > 0.0) Hh += (r * std::pow(nrm, r - 2)) * (x * x.transpose());
      ratio_max = std::max(ratio_max, detail::gen_eig_ratio_2x2(Hf, Hh));
    }
  }

  Problem p;
  p.name = "example1";
  p.dim = 2;
  p.structure = Problem::Structure::Deterministic;
  p.eval_f = [fns](const Eigen::VectorXd& x) { return fns->f(x); };
  p.eval_grad = [fns](const Eigen::VectorXd& x) { return fns->grad(x); };
  p.phi = CompositeTerm::zero();
  p.smad_L = std::max(1.0, 2.0 * ratio_max);
  p.kernel = kernel;
  p.x0 = Eigen::Vector2d(1.0, 0.0);
  p.has_lower_bound = true;
  p.psi_lower_bound = 0.0;  // f >= 0, approached as x1 -> inf along x2 = 0
  return p;
}

// 1D instance f(x) = -x with the monomial kernel x^r / r: the method drifts
// to +inf with x_k = k^{1/(r-1)} in closed form while grad psi is constant.
inline Problem make_example2(int r) {
  if (r < 4 || r % 2 != 0) throw ConfigError("example2 requires an even r >= 4");
  Problem p;
  p.name = "example2";
  p.dim = 1;
  p.structure = Problem::Structure::Deterministic;
  p.eval_f = [](const Eigen::VectorXd& x) { return -x(0); };
  p.eval_grad = [](const Eigen::VectorXd& x) {
    (void)x;
    Eigen::VectorXd g(1);
    g(0) = -1.0;
    return g;
  };
  p.phi = CompositeTerm::zero();
  p.smad_L = 0.5;
  p.kernel = KernelModel::monomial_only(r);
  p.x0 = Eigen::VectorXd::Zero(1);
  p.has_lower_bound = false;
  return p;
}

// Finite sum of cubics f_i(x) = (a_i' x - b_i)^3 / 3 with ||a_i|| <= 1. The
// component Hessian is 2 (a_i' x - b_i) a_i a_i', affine in x, so
// L_i = 2 ||a_i||^2 max(||a_i||, |b_i|) certifies smooth adaptability against
// the degree-3 polynomial kernel (hess h >= (1 + ||x||) I).
//
// Components are drawn as mirrored direction pairs (+c d, beta_plus) and
// (-c d, beta_minus) with beta_plus + beta_minus < 0, so each pair sums to a
// convex parabola along d while every single component stays a genuine
// nonconvex cubic. Directions cycle through a seeded rotation of the axes and
// the per-axis curvatures are log-spread; the minimizer offset along each
// axis scales like curvature^{-1/2}, which makes the mapping norm decay like
// 1/k over a wide window instead of collapsing geometrically. One pair is
// left slightly unbalanced so the sum itself keeps a cubic tail.
inline Problem make_cubic_finite_sum(int n, int dim, std::uint64_t seed, double l1_weight = 0.0) {
  if (n < 1 || dim < 1) throw ConfigError("cubic_fs requires n >= 1 and dim >= 1");
  auto A = std::make_shared<Eigen::MatrixXd>(n, dim);
  auto bvec = std::make_shared<Eigen::VectorXd>(n);
  RandomStream stream(seed);
  std::vector<double> Ls(n);

  // Seeded rotation applied to the canonical axes.
  Eigen::MatrixXd G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = stream.normal();
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();

  const double sigma_lo = 0.02, sigma_hi = 5.0;
  const double v0 = 0.6;  // offset scale: per-axis offset v0 / sqrt(sigma)
  auto axis_sigma = [&](int axis) {
    const double t = dim > 1 ? static_cast<double>(axis) / (dim - 1) : 0.0;
    return sigma_lo * std::pow(sigma_hi / sigma_lo, t);
  };

  for (int i = 0; i + 1 < n; i += 2) {
    const int pair = i / 2;
    const int axis = pair % dim;
    const Eigen::VectorXd d = Q.col(axis);
    const double c = 0.7 + 0.3 * stream.uniform();
    const double sigma = axis_sigma(axis) * (0.8 + 0.4 * stream.uniform());
    const double vertex = (v0 / std::sqrt(sigma)) * (0.9 + 0.2 * stream.uniform());
    const double m = c * vertex;
    // pair 0 stays unbalanced: the sum keeps a genuine cubic term
    const double c_minus = pair == 0 ? 0.98 * c : c;
    A->row(i) = (c * d).transpose();
    (*bvec)(i) = m - sigma;
    A->row(i + 1) = (-c_minus * d).transpose();
    (*bvec)(i + 1) = -m - sigma;
  }
  if (n % 2 == 1) {
    // odd leftover: a weak cubic with no partner
    Eigen::VectorXd g(dim);
    for (int j = 0; j < dim; ++j) g(j) = stream.normal();
    g *= 0.05 / g.norm();
    A->row(n - 1) = g.transpose();
    (*bvec)(n - 1) = 0.1 * stream.normal();
  }
  for (int i = 0; i < n; ++i) {
    const double an = A->row(i).norm();
    Ls[i] = 2.0 * an * an * std::max(an, std::abs((*bvec)(i)));
  }

  Problem p;
  p.name = "cubic_fs";
  p.dim = dim;
  p.structure = Problem::Structure::FiniteSum;
  p.n = n;
  p.eval_f = [A, bvec, n](const Eigen::VectorXd& x) {
    const Eigen::VectorXd res = (*A) * x - (*bvec);
    return res.array().cube().sum() / (3.0 * n);
  };
  p.eval_grad = [A, bvec, n](const Eigen::VectorXd& x) {
    const Eigen::VectorXd res = (*A) * x - (*bvec);
    return Eigen::VectorXd(A->transpose() * res.array().square().matrix() / n);
  };
  p.grad_component = [A, bvec](int i, const Eigen::VectorXd& x) {
    const double res = A->row(i).dot(x) - (*bvec)(i);
    return Eigen::VectorXd(A->row(i).transpose() * (res * res));
  };
  p.batch_grad_delta = [A, bvec](const std::vector<int>& ids, const Eigen::VectorXd& x_new,
                                 const Eigen::VectorXd& x_old) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x_new.size());
    for (const int i : ids) {
      const double rn = A->row(i).dot(x_new) - (*bvec)(i);
      const double ro = A->row(i).dot(x_old) - (*bvec)(i);
      acc.noalias() += A->row(i).transpose() * (rn * rn - ro * ro);
    }
    return Eigen::VectorXd(acc / static_cast<double>(ids.size()));
  };
  p.phi = l1_weight > 0.0 ? CompositeTerm::l1(l1_weight) : CompositeTerm::zero();
  p.component_L = Ls;
  double sum_sq = 0.0, mx = 0.0;
  for (const double v : Ls) {
    sum_sq += v * v;
    mx = std::max(mx, v);
  }
  p.smad_L = std::sqrt(sum_sq / n);
  p.L_max = mx;
  p.kernel = KernelModel::polynomial(1);
  p.x0 = Eigen::VectorXd::Zero(dim);
  p.has_lower_bound = false;
  return p;
}

// 1D expectation instance with analytic gradient x^2 + 1. The stochastic
// gradient is (xi1 x - xi2)^2 with xi1, xi2 iid standard normal; since
// xi1 x - xi2 ~ N(0, x^2 + 1) the draw is unbiased with variance exactly
// 2 (x^2 + 1)^2, so sigma(x) = sqrt(2) (x^2 + 1) is tight.
inline Problem make_cubic_expectation(std::uint64_t seed) {
  (void)seed;  // construction is deterministic; draws take an explicit stream
  Problem p;
  p.name = "cubic_exp";
  p.dim = 1;
  p.structure = Problem::Structure::Expectation;
  p.eval_f = [](const Eigen::VectorXd& x) { return x(0) * x(0) * x(0) / 3.0 + x(0); };
  p.eval_grad = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(1);
    g(0) = x(0) * x(0) + 1.0;
    return g;
  };
  p.sample_grad = [](RandomStream& rng, const Eigen::VectorXd& x) {
    const double xi1 = rng.normal();
    const double xi2 = rng.normal();
    const double d = xi1 * x(0) - xi2;
    Eigen::VectorXd g(1);
    g(0) = d * d;
    return g;
  };
  p.sample_grad_pair = [](RandomStream& rng, const Eigen::VectorXd& xn, const Eigen::VectorXd& xo) {
    const double xi1 = rng.normal();
    const double xi2 = rng.normal();
    const double dn = xi1 * xn(0) - xi2;
    const double dd = xi1 * xo(0) - xi2;
    Eigen::VectorXd gn(1), go(1);
    gn(0) = dn * dn;
    go(0) = dd * dd;
    return std::make_pair(gn, go);
  };
  p.sigma_fn = [](const Eigen::VectorXd& x) { return std::sqrt(2.0) * (x(0) * x(0) + 1.0); };
  p.phi = CompositeTerm::zero();
  // Per-draw constant L_xi = max(xi1^2, 2 |xi1 xi2|); sqrt(E L_xi^2) <= sqrt(7).
  p.smad_L = std::sqrt(7.0);
  p.kernel = KernelModel::polynomial(1);
  p.x0 = Eigen::VectorXd::Constant(1, 1.0);
  p.has_lower_bound = false;
  return p;
}

struct SmadReport {
  double max_eig_violation = 0.0;      // max of |v' hess f v| - L v' hess h v
  double max_descent_violation = 0.0;  // max of |f(x)-f(y)-<grad f(y),x-y>| - L D_h(x,y)
  int num_samples = 0;
};

// Samples both characterizations of L-smooth adaptability: the Hessian
// inequality through finite differences and random directions, and the
// extended descent inequality at random pairs. Violations are reported as
// positive excesses, never thrown.
inline SmadReport smad_check(const Problem& p, const KernelModel& kernel, double L,
                             int num_samples, std::uint64_t seed, double region_scale = 3.0) {
  RandomStream rng(seed);
  SmadReport report;
  report.num_samples = num_samples;
  const bool positive_domain = kernel.kind == KernelModel::Kind::MonomialOnly;

  auto draw_point = [&]() {
    Eigen::VectorXd x(p.dim);
    for (int i = 0; i < p.dim; ++i) x(i) = region_scale * rng.uniform();
    if (!positive_domain) {
      for (int i = 0; i < p.dim; ++i) x(i) = 2.0 * x(i) - region_scale;
    } else {
      for (int i = 0; i < p.dim; ++i) x(i) = std::max(x(i), 1e-3);
    }
    return x;
  };

  for (int it = 0; it < num_samples; ++it) {
    const Eigen::VectorXd x = draw_point();
    const Eigen::MatrixXd Hf = fd_hessian(p.eval_f, x, 1e-5);
    Eigen::VectorXd v(p.dim);
    for (int i = 0; i < p.dim; ++i) v(i) = rng.normal();
    v.normalize();
    const double quad_f = v.dot(Hf * v);
    const double quad_h = v.dot(hess_apply(kernel, x, v));
    report.max_eig_violation =
        std::max(report.max_eig_violation, std::abs(quad_f) - L * quad_h);

    const Eigen::VectorXd y = draw_point();
    const double lhs = std::abs(p.eval_f(x) - p.eval_f(y) - p.eval_grad(y).dot(x - y));
    const double rhs = L * bregman_div(kernel, x, y);
    report.max_descent_violation = std::max(report.max_descent_violation, lhs - rhs);
  }
  return report;
}

}  // namespace bpg
