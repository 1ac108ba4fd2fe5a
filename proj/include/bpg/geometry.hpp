#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>

namespace bpg {

// Extremes of ||a + t(b-a)|| over t in [0,1]. The max is attained at an
// endpoint (norm is convex along the segment); the min is the clamped
// projection of the origin onto the segment.
inline std::pair<double, double> segment_norm_extrema(const Eigen::VectorXd& a,
                                                      const Eigen::VectorXd& b) {
  const Eigen::VectorXd d = b - a;
  const double dd = d.squaredNorm();
  double min_norm;
  if (dd == 0.0) {
    min_norm = a.norm();
  } else {
    const double t = std::clamp(-a.dot(d) / dd, 0.0, 1.0);
    min_norm = (a + t * d).norm();
  }
  const double max_norm = std::max(a.norm(), b.norm());
  return {min_norm, max_norm};
}

}  // namespace bpg
