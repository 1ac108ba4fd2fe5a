#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bpg/errors.hpp"

namespace bpg {

struct TrendFit {
  std::string axis;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares on (ln x, ln y); all inputs must be positive.
inline TrendFit fit_trend(const std::vector<std::pair<double, double>>& points,
                          const std::string& axis = "") {
  if (points.size() < 3) throw Degenerate("fit_trend: need at least 3 points");
  const auto n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw Degenerate("fit_trend: points must be positive");
    const double lx = std::log(x);
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den <= 1e-14 * n * sxx || den == 0.0) {
    throw Degenerate("fit_trend: x values coincide");
  }
  TrendFit fit;
  fit.axis = axis;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double pred = fit.intercept + fit.slope * std::log(x);
    const double r = std::log(y) - pred;
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace bpg
