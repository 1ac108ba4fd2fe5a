#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "bpg/errors.hpp"

namespace bpg {

// The nonsmooth convex term phi. Four supported kinds:
//   Zero            phi = 0
//   L1              phi(x) = weight * ||x||_1
//   Ball            indicator of the closed ball B(center, radius)
//   L1PlusBall      weight * ||x||_1 + indicator of B(center, radius)
struct CompositeTerm {
  enum class Kind { Zero, L1, Ball, L1PlusBall };
  Kind kind = Kind::Zero;
  double weight = 0.0;
  Eigen::VectorXd center;
  double radius = 0.0;

  static CompositeTerm zero() { return {}; }
  static CompositeTerm l1(double weight) { return {Kind::L1, weight, {}, 0.0}; }
  static CompositeTerm ball(const Eigen::VectorXd& center, double radius) {
    return {Kind::Ball, 0.0, center, radius};
  }
  static CompositeTerm l1_plus_ball(double weight, const Eigen::VectorXd& center, double radius) {
    return {Kind::L1PlusBall, weight, center, radius};
  }

  bool has_l1() const { return kind == Kind::L1 || kind == Kind::L1PlusBall; }
  bool has_ball() const { return kind == Kind::Ball || kind == Kind::L1PlusBall; }
  double l1_weight() const { return has_l1() ? weight : 0.0; }

  // Subgradient norm bound rho. The ball indicator contributes normal-cone
  // elements only on the boundary, which the bounded-subgradient constant of
  // the adaptive step rule does not cover; its rho contribution is 0.
  double rho(int dim) const {
    return has_l1() ? weight * std::sqrt(static_cast<double>(dim)) : 0.0;
  }

  double value(const Eigen::VectorXd& x) const {
    double v = 0.0;
    if (has_l1()) v += weight * x.lpNorm<1>();
    if (has_ball()) {
      const double slack = radius - (x - center).norm();
      if (slack < -1e-9 * (1.0 + radius)) return std::numeric_limits<double>::infinity();
    }
    return v;
  }

  bool finite_at(const Eigen::VectorXd& x) const { return std::isfinite(value(x)); }
};

// phi + indicator of B(center, radius); used for the per-epoch bound.
inline CompositeTerm with_ball(const CompositeTerm& phi, const Eigen::VectorXd& center,
                               double radius) {
  switch (phi.kind) {
    case CompositeTerm::Kind::Zero:
      return CompositeTerm::ball(center, radius);
    case CompositeTerm::Kind::L1:
      return CompositeTerm::l1_plus_ball(phi.weight, center, radius);
    case CompositeTerm::Kind::Ball:
    case CompositeTerm::Kind::L1PlusBall:
      throw Unsupported("with_ball: composite already carries a ball constraint");
  }
  throw Unsupported("with_ball: unknown composite kind");
}

inline Eigen::VectorXd soft_threshold(const Eigen::VectorXd& w, double t) {
  Eigen::VectorXd out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    // Ties |w_i| == t resolve to 0.
    if (w(i) > t) {
      out(i) = w(i) - t;
    } else if (w(i) < -t) {
      out(i) = w(i) + t;
    } else {
      out(i) = 0.0;
    }
  }
  return out;
}

}  // namespace bpg
