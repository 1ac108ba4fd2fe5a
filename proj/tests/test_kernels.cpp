#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "bpg/finite_diff.hpp"
#include "bpg/kernels.hpp"
#include "bpg/rng.hpp"

using namespace bpg;

namespace {
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}
Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}
Eigen::VectorXd random_vec(RandomStream& rng, int d, double scale) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = scale * rng.normal();
  return v;
}
}  // namespace

TEST_CASE("kernel values and gradients") {
  CHECK(h_value(KernelModel::polynomial(4), vec2(0, 0)) == 0.0);
  CHECK(std::abs(h_value(KernelModel::polynomial(2), vec2(1, 0)) - 0.75) < 1e-15);
  CHECK(std::abs(h_value(KernelModel::monomial_only(4), vec1(2)) - 4.0) < 1e-15);

  CHECK(grad_h(KernelModel::polynomial(6), vec2(0, 0)).norm() == 0.0);
  CHECK((grad_h(KernelModel::polynomial(2), vec2(1, 0)) - vec2(2, 0)).norm() < 1e-15);
  CHECK(std::abs(grad_h(KernelModel::monomial_only(4), vec1(1))(0) - 1.0) < 1e-15);
}

TEST_CASE("hess_eig_bounds closed forms") {
  {
    const auto [lo, hi] = hess_eig_bounds(KernelModel::polynomial(4), vec2(0, 0));
    CHECK(lo == 1.0);
    CHECK(hi == 1.0);
  }
  {
    const auto [lo, hi] = hess_eig_bounds(KernelModel::polynomial(4), vec2(1, 0));
    CHECK(lo == 2.0);
    CHECK(hi == 6.0);
    CHECK(hi / lo <= 4.0 + 1.0);
  }
  {
    const auto [lo, hi] = hess_eig_bounds(KernelModel::quadratic(), vec2(31, -7));
    CHECK(lo == 1.0);
    CHECK(hi == 1.0);
  }
}

TEST_CASE("hessian quadratic forms live inside the closed-form bounds") {
  RandomStream rng(2024);
  const KernelModel k = KernelModel::polynomial(4);
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd x = random_vec(rng, 3, 1.5);
    const Eigen::MatrixXd hfd =
        fd_hessian([&](const Eigen::VectorXd& y) { return h_value(k, y); }, x, 1e-5);
    const auto [lo, hi] = hess_eig_bounds(k, x);
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::VectorXd v = random_vec(rng, 3, 1.0).normalized();
      const double quad = v.dot(hfd * v);
      CHECK(quad >= lo - 1e-4 * (1.0 + hi));
      CHECK(quad <= hi + 1e-4 * (1.0 + hi));
    }
    // exact closed-form apply agrees with finite differences
    Eigen::VectorXd v = random_vec(rng, 3, 1.0);
    CHECK((hfd * v - hess_apply(k, x, v)).norm() < 1e-3 * (1.0 + hi) * v.norm());
  }
}

TEST_CASE("pointwise condition number is at most r + 1") {
  RandomStream rng(5);
  for (const int r : {1, 2, 4, 8}) {
    const KernelModel k = KernelModel::polynomial(r);
    for (int it = 0; it < 1000; ++it) {
      const Eigen::VectorXd x = random_vec(rng, 4, 3.0);
      const auto [lo, hi] = hess_eig_bounds(k, x);
      CHECK(hi / lo <= r + 1.0 + 1e-12);
    }
  }
}

TEST_CASE("segment and ball eigenvalue envelopes") {
  const KernelModel k4 = KernelModel::polynomial(4);
  {
    const auto [mu, L] = mu_L_over_segment(k4, vec2(1, 0), vec2(1, 0));
    const auto [lo, hi] = hess_eig_bounds(k4, vec2(1, 0));
    CHECK(mu == lo);
    CHECK(L == hi);
  }
  {
    const auto [mu, L] = mu_L_over_segment(k4, vec2(1, 0), vec2(-1, 0));
    CHECK(mu == 1.0);
    CHECK(L == 6.0);
  }
  {
    const auto [mu, L] = mu_L_over_segment(KernelModel::quadratic(), vec2(1, 2), vec2(-3, 0));
    CHECK(mu == 1.0);
    CHECK(L == 1.0);
  }
  {
    // ball B((2,0), 1): min norm 1, max norm 3
    const auto [mu, L] = mu_L_over_ball(k4, vec2(2, 0), 1.0);
    CHECK(mu == 2.0);
    CHECK(L == 5.0 * 81.0 + 1.0);
  }
  {
    const auto [mu, L] = mu_L_over_ball(k4, vec2(0.2, 0), 1.0);
    CHECK(mu == 1.0);  // ball contains the origin
    CHECK(L > 1.0);
  }
  {
    const auto [mu, L] = mu_L_over_ball(k4, vec2(7, 0), 0.0);
    const auto [lo, hi] = hess_eig_bounds(k4, vec2(7, 0));
    CHECK(mu == lo);
    CHECK(L == hi);
  }
}

TEST_CASE("ball condition number obeys the diameter rule") {
  RandomStream rng(17);
  for (const int r : {1, 2, 4, 8}) {
    const KernelModel k = KernelModel::polynomial(r);
    for (int it = 0; it < 1000; ++it) {
      const Eigen::VectorXd c = random_vec(rng, 3, 4.0);
      const double radius = 0.5 / r * rng.uniform();  // diameter <= 1/r
      const auto [mu, L] = mu_L_over_ball(k, c, radius);
      CHECK(L / mu <= 3.0 * r + 4.0 + 1e-12);
    }
  }
}

TEST_CASE("bregman divergence basics") {
  const KernelModel k2 = KernelModel::polynomial(2);
  CHECK(bregman_div(k2, vec2(1.3, -0.4), vec2(1.3, -0.4)) == 0.0);
  CHECK(std::abs(bregman_div(KernelModel::quadratic(), vec2(2, 0), vec2(1, 1)) -
                 0.5 * (vec2(2, 0) - vec2(1, 1)).squaredNorm()) < 1e-15);
  CHECK(std::abs(bregman_div(k2, vec2(1, 0), vec2(0, 0)) - 0.75) < 1e-15);

  // strong convexity with mu = 1
  RandomStream rng(7);
  for (int it = 0; it < 300; ++it) {
    const Eigen::VectorXd x = random_vec(rng, 3, 2.0);
    const Eigen::VectorXd y = random_vec(rng, 3, 2.0);
    CHECK(bregman_div(KernelModel::polynomial(4), y, x) >=
          0.5 * (y - x).squaredNorm() - 1e-10);
  }
}

TEST_CASE("regularity constants") {
  const KernelRegularity r4 = regularity_constants(KernelModel::polynomial(4));
  CHECK(r4.mu == 1.0);
  CHECK(r4.delta == 0.25);
  CHECK(r4.kappa_delta == 16.0);

  const KernelRegularity r1 = regularity_constants(KernelModel::polynomial(1));
  CHECK(r1.delta == 1.0);
  CHECK(r1.kappa_delta == 7.0);

  const KernelRegularity rq = regularity_constants(KernelModel::quadratic());
  CHECK(rq.kappa_delta == 1.0);
  CHECK(rq.delta == kQuadraticDeltaSentinel);

  CHECK_THROWS_AS(regularity_constants(KernelModel::monomial_only(4)), UnsupportedKernel);
}

TEST_CASE("grad_h_inverse closed and iterative paths") {
  CHECK(grad_h_inverse(KernelModel::polynomial(4), vec2(0, 0)).norm() == 0.0);
  // || w || = 2 solves t + t^5 = 2 at t = 1, so the preimage is w / 2
  const Eigen::VectorXd w = vec2(2.0, 0.0);
  CHECK((grad_h_inverse(KernelModel::polynomial(4), w) - vec2(1, 0)).norm() < 1e-12);
  CHECK((grad_h_inverse(KernelModel::quadratic(), vec2(3, -4)) - vec2(3, -4)).norm() == 0.0);

  RandomStream rng(11);
  for (int it = 0; it < 200; ++it) {
    const int r = 1 + static_cast<int>(rng.uniform_int(6));
    const KernelModel k = KernelModel::polynomial(r);
    const Eigen::VectorXd x = random_vec(rng, 3, 2.0);
    const Eigen::VectorXd back = grad_h_inverse(k, grad_h(k, x));
    CHECK((back - x).norm() <= 1e-9 * (1.0 + x.norm()));
  }
}

TEST_CASE("gradient displacement sandwiched by segment eigen bounds") {
  RandomStream rng(23);
  for (int it = 0; it < 300; ++it) {
    const int r = 1 + static_cast<int>(rng.uniform_int(6));
    const KernelModel k = KernelModel::polynomial(r);
    const Eigen::VectorXd x = random_vec(rng, 3, 2.0);
    const Eigen::VectorXd y = x + random_vec(rng, 3, 0.7);
    const auto [mu, L] = mu_L_over_segment(k, x, y);
    const double lhs = (grad_h(k, y) - grad_h(k, x)).norm();
    const double step = (y - x).norm();
    CHECK(lhs >= mu * step - 1e-9 * (1.0 + lhs));
    CHECK(lhs <= L * step + 1e-9 * (1.0 + lhs));
  }
}

TEST_CASE("monomial kernel domain checks") {
  const KernelModel m4 = KernelModel::monomial_only(4);
  CHECK_THROWS_AS(h_value(m4, vec1(-1.0)), DomainViolation);
  CHECK_THROWS_AS(h_value(m4, vec2(1, 1)), DomainViolation);
  CHECK_THROWS_AS(grad_h_inverse(m4, vec1(-0.5)), DomainViolation);
  CHECK(std::abs(grad_h_inverse(m4, vec1(8.0))(0) - 2.0) < 1e-12);
}
