#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "bpg/prox.hpp"

namespace bpg {

// Stationarity measures built on the Bregman proximal mapping. `gradfx`
// is the (exact or estimated) smooth gradient at x; the surrogate variant is
// the same dual-space displacement evaluated at an estimated direction.

// Primal displacement mapping: (x - T(x, gradfx)) / lambda.
inline Eigen::VectorXd grad_map_G(const KernelModel& k, const CompositeTerm& phi,
                                  const Eigen::VectorXd& x, const Eigen::VectorXd& gradfx,
                                  double lambda, const ProxOptions& opt = {}) {
  return (x - prox_map(k, phi, x, gradfx, lambda, opt).y) / lambda;
}

// Dual displacement mapping: (grad h(x) - grad h(T(x, gradfx))) / lambda.
// Equals gradfx exactly when phi = 0, for every kernel and step size.
inline Eigen::VectorXd grad_map_D(const KernelModel& k, const CompositeTerm& phi,
                                  const Eigen::VectorXd& x, const Eigen::VectorXd& gradfx,
                                  double lambda, const ProxOptions& opt = {}) {
  const Eigen::VectorXd y = prox_map(k, phi, x, gradfx, lambda, opt).y;
  return (grad_h(k, x) - grad_h(k, y)) / lambda;
}

// Same displacement from an estimated direction v.
inline Eigen::VectorXd grad_map_D_surrogate(const KernelModel& k, const CompositeTerm& phi,
                                            const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                            double eta, const ProxOptions& opt = {}) {
  const Eigen::VectorXd y = prox_map(k, phi, x, v, eta, opt).y;
  return (grad_h(k, x) - grad_h(k, y)) / eta;
}

// Restricted mapping: prox taken over phi + indicator of B(center, radius).
inline Eigen::VectorXd grad_map_restricted(const KernelModel& k, const CompositeTerm& phi,
                                           const Eigen::VectorXd& center, double radius,
                                           const Eigen::VectorXd& x, const Eigen::VectorXd& gradfx,
                                           double lambda, const ProxOptions& opt = {}) {
  const CompositeTerm restricted = with_ball(phi, center, radius);
  return (x - prox_map(k, restricted, x, gradfx, lambda, opt).y) / lambda;
}

// lambda -> 0 limit of grad_map_G for phi = 0: solve hess h(x) g = grad f(x).
inline Eigen::VectorXd limiting_map(const KernelModel& k, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& gradfx) {
  return hess_solve(k, x, gradfx);
}

// dist(0, grad f(x) + dphi(x)) for phi in {Zero, L1}. For L1 each coordinate
// minimizes |g_i + u_i| over the admissible subgradient interval.
inline double dist_to_subdifferential(const Eigen::VectorXd& gradfx, const CompositeTerm& phi,
                                      const Eigen::VectorXd& x) {
  if (phi.has_ball()) {
    throw Unsupported("dist_to_subdifferential: ball terms have an unbounded normal cone");
  }
  return detail::dist_to_subdiff_of_phi(phi, x, -gradfx);
}

}  // namespace bpg
