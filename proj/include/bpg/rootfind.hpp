#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "bpg/errors.hpp"

namespace bpg {

struct ScalarRootSpec {
  double target = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
  double abs_tol = 1e-12;
  int max_iter = 200;
};

// Solves g(t) = target for strictly monotone g on [lo, hi]. Safeguarded
// Newton: steps that leave the bracket fall back to bisection, and the
// bracket is re-tightened every iteration, so termination is guaranteed.
// `dg` may be empty, in which case a centered difference estimate is used.
inline double solve_monotone(const std::function<double(double)>& g,
                             const std::function<double(double)>& dg, const ScalarRootSpec& spec) {
  double lo = spec.bracket_lo;
  double hi = spec.bracket_hi;
  double flo = g(lo) - spec.target;
  double fhi = g(hi) - spec.target;
  if (std::abs(flo) <= spec.abs_tol) return lo;
  if (std::abs(fhi) <= spec.abs_tol) return hi;
  if (flo * fhi > 0.0) {
    throw NoBracket("solve_monotone: endpoints do not straddle target");
  }

  double t = 0.5 * (lo + hi);
  double ft = g(t) - spec.target;
  for (int iter = 0; iter < spec.max_iter; ++iter) {
    if (std::abs(ft) <= spec.abs_tol) return t;
    // Maintain the bracket.
    if ((ft > 0.0) == (fhi > 0.0)) {
      hi = t;
      fhi = ft;
    } else {
      lo = t;
      flo = ft;
    }
    double d;
    if (dg) {
      d = dg(t);
    } else {
      const double h = std::max(1e-7 * (std::abs(t) + 1.0), 1e-12);
      d = (g(t + h) - g(t - h)) / (2.0 * h);
    }
    double next = t - ft / d;
    if (!std::isfinite(next) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);  // bisection fallback
    }
    t = next;
    ft = g(t) - spec.target;
  }
  if (std::abs(ft) <= spec.abs_tol) return t;
  throw NoConvergence("solve_monotone: no convergence after " + std::to_string(spec.max_iter) +
                      " iterations, residual " + std::to_string(std::abs(ft)));
}

inline double solve_monotone(const std::function<double(double)>& g, const ScalarRootSpec& spec) {
  return solve_monotone(g, nullptr, spec);
}

}  // namespace bpg
