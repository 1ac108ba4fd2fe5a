#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "bpg/finite_diff.hpp"
#include "bpg/geometry.hpp"
#include "bpg/problems.hpp"
#include "bpg/rng.hpp"
#include "bpg/rootfind.hpp"

using namespace bpg;

namespace {
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("solve_monotone frozen roots") {
  auto quintic = [](double t) { return t + std::pow(t, 5); };
  ScalarRootSpec spec;
  spec.target = 2.0;
  spec.bracket_hi = 2.0;
  CHECK(std::abs(solve_monotone(quintic, spec) - 1.0) < 1e-12);

  spec.target = 0.5;
  spec.bracket_hi = 1.0;
  CHECK(std::abs(solve_monotone([](double t) { return t; }, spec) - 0.5) < 1e-12);

  // Root of t + t^5 = 34 is exactly 2; verify through the residual contract.
  spec.target = 34.0;
  spec.bracket_hi = 34.0;
  const double root = solve_monotone(quintic, spec);
  CHECK(std::abs(quintic(root) - 34.0) <= 1e-12 * 35.0);
  CHECK(std::abs(root - 2.0) < 1e-12);
}

TEST_CASE("solve_monotone error paths") {
  ScalarRootSpec spec;
  spec.target = 10.0;
  spec.bracket_hi = 1.0;
  CHECK_THROWS_AS(solve_monotone([](double t) { return t; }, spec), NoBracket);

  ScalarRootSpec tight;
  tight.target = 3.0;
  tight.bracket_hi = 2.0;
  tight.abs_tol = 1e-15;
  tight.max_iter = 1;
  CHECK_THROWS_AS(solve_monotone([](double t) { return t + std::pow(t, 5); }, tight),
                  NoConvergence);
}

TEST_CASE("solve_monotone residual property over random prox-style equations") {
  RandomStream rng(314);
  for (int it = 0; it < 200; ++it) {
    const int r = 1 + static_cast<int>(rng.uniform_int(8));
    const double target = std::exp(4.0 * rng.uniform() - 1.0);
    ScalarRootSpec spec;
    spec.target = target;
    spec.bracket_hi = target + 1.0;
    const double t = solve_monotone(
        [r](double u) { return u + std::pow(u, r + 1); }, spec);
    CHECK(std::abs(t + std::pow(t, r + 1) - target) <= spec.abs_tol);
  }
}

TEST_CASE("fd_gradient matches analytic gradients") {
  const Eigen::VectorXd g =
      fd_gradient([](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); }, vec2(1, 2), 1e-5);
  CHECK((g - vec2(1, 2)).norm() < 1e-8);

  Eigen::VectorXd one(1);
  one << 0.37;
  const Eigen::VectorXd glin =
      fd_gradient([](const Eigen::VectorXd& x) { return -x(0); }, one, 1e-5);
  CHECK(std::abs(glin(0) + 1.0) < 1e-10);

  // hard instance partial at (1, 0): -2 x1 / ((sqrt2 + ln 2)^2 (1 + x1^2))
  const Problem p1 = make_example1(4);
  const Eigen::VectorXd gfd = fd_gradient(p1.eval_f, vec2(1, 0), 1e-5);
  const double expect = -1.0 / std::pow(std::sqrt(2.0) + std::log(2.0), 2);
  CHECK(std::abs(gfd(0) - expect) < 1e-6);
  CHECK(std::abs(gfd(1)) < 1e-9);
}

TEST_CASE("fd_hessian frozen values") {
  const Eigen::MatrixXd h_id =
      fd_hessian([](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); }, vec2(0.3, -1), 1e-4);
  CHECK((h_id - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-6);

  const KernelModel poly2 = KernelModel::polynomial(2);
  const Eigen::MatrixXd hh =
      fd_hessian([&](const Eigen::VectorXd& x) { return h_value(poly2, x); }, vec2(1, 0), 1e-5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hh);
  CHECK(std::abs(eig.eigenvalues()(0) - 2.0) < 1e-4);
  CHECK(std::abs(eig.eigenvalues()(1) - 4.0) < 1e-4);

  Eigen::VectorXd x1(1);
  x1 << 1.0;
  const Eigen::MatrixXd hc =
      fd_hessian([](const Eigen::VectorXd& x) { return std::pow(x(0), 3) / 3.0; }, x1, 1e-5);
  CHECK(std::abs(hc(0, 0) - 2.0) < 1e-5);
}

TEST_CASE("fd_gradient rejects non-finite evaluations") {
  Eigen::VectorXd x(1);
  x << 0.0;
  CHECK_THROWS_AS(fd_gradient([](const Eigen::VectorXd& v) { return std::log(v(0)); }, x, 1e-3),
                  NonFinite);
}

TEST_CASE("segment_norm_extrema frozen values") {
  {
    const auto [mn, mx] = segment_norm_extrema(vec2(1, 0), vec2(-1, 0));
    CHECK(mn == 0.0);
    CHECK(mx == 1.0);
  }
  {
    const auto [mn, mx] = segment_norm_extrema(vec2(3, 4), vec2(3, 4));
    CHECK(mn == 5.0);
    CHECK(mx == 5.0);
  }
  {
    // minimize ||(1,1) + t (1,0)||^2 = (1+t)^2 + 1 over [0,1]: t* = 0
    const auto [mn, mx] = segment_norm_extrema(vec2(1, 1), vec2(2, 1));
    CHECK(std::abs(mn - std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(mx - std::sqrt(5.0)) < 1e-14);
  }
}

TEST_CASE("segment_norm_extrema bounds random segment points") {
  RandomStream rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a(i) = 2.0 * rng.normal();
      b(i) = 2.0 * rng.normal();
    }
    const auto [mn, mx] = segment_norm_extrema(a, b);
    for (int t = 0; t < 50; ++t) {
      const double u = rng.uniform();
      const double nrm = (a + u * (b - a)).norm();
      CHECK(nrm >= mn - 1e-12);
      CHECK(nrm <= mx + 1e-12);
    }
  }
}

TEST_CASE("RandomStream determinism and substreams") {
  RandomStream a(12345), b(12345);
  for (int i = 0; i < 10000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  // substream derivation ignores parent state and construction order
  RandomStream parent1(777);
  RandomStream s12 = parent1.substream(1, 2);
  RandomStream s34 = parent1.substream(3, 4);
  RandomStream parent2(777);
  for (int i = 0; i < 100; ++i) (void)parent2.next_u64();
  RandomStream s34_again = parent2.substream(3, 4);
  RandomStream s12_again = parent2.substream(1, 2);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(s12.next_u64() == s12_again.next_u64());
    REQUIRE(s34.next_u64() == s34_again.next_u64());
  }

  // distinct substreams differ
  RandomStream u = parent1.substream(5, 6);
  RandomStream w = parent1.substream(6, 5);
  CHECK(u.next_u64() != w.next_u64());

  RandomStream r(42);
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.uniform_int(7);
    CHECK(v >= 0);
    CHECK(v < 7);
    const double x = r.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
