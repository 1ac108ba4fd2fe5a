#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "bpg/errors.hpp"

namespace bpg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ScalarFn = std::function<double(const Vec&)>;

// Central-difference gradient; component error O(h^2) for C^3 functions.
inline Vec fd_gradient(const ScalarFn& f, const Vec& x, double h_step = 1e-5) {
  const int d = static_cast<int>(x.size());
  Vec g(d);
  Vec p = x;
  for (int i = 0; i < d; ++i) {
    p(i) = x(i) + h_step;
    const double fwd = f(p);
    p(i) = x(i) - h_step;
    const double bwd = f(p);
    p(i) = x(i);
    if (!std::isfinite(fwd) || !std::isfinite(bwd)) {
      throw NonFinite("fd_gradient: non-finite function value");
    }
    g(i) = (fwd - bwd) / (2.0 * h_step);
  }
  return g;
}

// Central-difference Hessian, symmetrized by averaging.
inline Mat fd_hessian(const ScalarFn& f, const Vec& x, double h_step = 1e-5) {
  const int d = static_cast<int>(x.size());
  Mat hess(d, d);
  Vec p = x;
  const double f0 = f(x);
  if (!std::isfinite(f0)) throw NonFinite("fd_hessian: non-finite function value");
  for (int i = 0; i < d; ++i) {
    p(i) = x(i) + h_step;
    const double fpp = f(p);
    p(i) = x(i) - h_step;
    const double fmm = f(p);
    p(i) = x(i);
    if (!std::isfinite(fpp) || !std::isfinite(fmm)) {
      throw NonFinite("fd_hessian: non-finite function value");
    }
    hess(i, i) = (fpp - 2.0 * f0 + fmm) / (h_step * h_step);
    for (int j = i + 1; j < d; ++j) {
      p(i) = x(i) + h_step;
      p(j) = x(j) + h_step;
      const double fa = f(p);
      p(j) = x(j) - h_step;
      const double fb = f(p);
      p(i) = x(i) - h_step;
      const double fd_ = f(p);
      p(j) = x(j) + h_step;
      const double fc = f(p);
      p(i) = x(i);
      p(j) = x(j);
      if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fc) || !std::isfinite(fd_)) {
        throw NonFinite("fd_hessian: non-finite function value");
      }
      const double v = (fa - fb - fc + fd_) / (4.0 * h_step * h_step);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return 0.5 * (hess + hess.transpose());
}

}  // namespace bpg
