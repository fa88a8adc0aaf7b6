#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "crg/rhop/qp.hpp"
#include "oracles/qp_oracles.hpp"
#include "oracles/test_rng.hpp"

using namespace crg::rhop;
using crg_test::TestRng;

namespace {

Eigen::MatrixXd mat1(double v) {
  Eigen::MatrixXd M(1, 1);
  M << v;
  return M;
}

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("qp: unconstrained single variable lands on the vertex") {
  // min (x - 1)^2 = x^2 - 2x + 1  ->  H = 2, g = -2, minimizer x = 1.
  QpProblem qp;
  qp.Hess = mat1(2.0);
  qp.grad = vec1(-2.0);
  qp.A.resize(0, 1);
  qp.b.resize(0);
  const QpResult r = solve_qp(qp);
  REQUIRE(r.status == QpStatus::kOptimal);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.active_set.empty());
  CHECK(r.stationarity < 1e-10);
}

TEST_CASE("qp: a binding bound produces the textbook multiplier") {
  // min x^2 s.t. x >= 2: minimizer x = 2 with gradient 2x = 4 balanced by
  // the multiplier on the (unit-normalized) row -x <= -2.
  QpProblem qp;
  qp.Hess = mat1(2.0);
  qp.grad = vec1(0.0);
  qp.A = mat1(-1.0);
  qp.b = vec1(-2.0);
  const QpResult r = solve_qp(qp);
  REQUIRE(r.status == QpStatus::kOptimal);
  CHECK(r.x(0) == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(r.active_set.size() == 1);
  CHECK(r.active_set[0] == 0);
  CHECK(r.lambda(0) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(r.stationarity < 1e-10);
  CHECK(r.complementarity < 1e-10);
}

TEST_CASE("qp: box-constrained random problems match the refined grid search") {
  TestRng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3;
    const Eigen::MatrixXd H = rng.spd(n, 0.5);
    const Eigen::VectorXd g = rng.vector(n, -2.0, 2.0);
    const Eigen::VectorXd lo = rng.vector(n, -1.5, -0.5);
    const Eigen::VectorXd hi = rng.vector(n, 0.5, 1.5);

    QpProblem qp;
    qp.Hess = H;
    qp.grad = g;
    qp.A.resize(2 * n, n);
    qp.b.resize(2 * n);
    qp.A.topRows(n) = Eigen::MatrixXd::Identity(n, n);
    qp.A.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
    qp.b.head(n) = hi;
    qp.b.tail(n) = -lo;

    const QpResult r = solve_qp(qp);
    REQUIRE(r.status == QpStatus::kOptimal);
    const Eigen::VectorXd ref = crg_test::grid_qp_minimum(H, g, lo, hi, 1e-5);
    // The grid argmin carries O(tol) placement error; compare objectives,
    // which is quadratic around the optimum, and positions loosely.
    CHECK(crg_test::qp_objective(H, g, r.x) <=
          crg_test::qp_objective(H, g, ref) + 1e-8);
    CHECK((r.x - ref).lpNorm<Eigen::Infinity>() < 1e-3);
    CHECK(((qp.A * r.x - qp.b).array() <= 1e-9).all());
  }
}

TEST_CASE("qp: general inequality problems match exact active-set enumeration") {
  TestRng rng(77);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 2);  // 2 or 3 variables
    const int m = 4 + static_cast<int>(rng.next_u64() % 3);  // 4..6 rows
    const Eigen::MatrixXd H = rng.spd(n, 0.4);
    const Eigen::VectorXd g = rng.vector(n, -1.5, 1.5);
    const Eigen::MatrixXd A = rng.matrix(m, n, -1.0, 1.0);
    // Offsets biased positive so the origin is usually feasible; a few
    // trials will still be tight or infeasible, which the oracle reports.
    const Eigen::VectorXd b = rng.vector(m, -0.2, 1.2);

    QpProblem qp;
    qp.Hess = H;
    qp.grad = g;
    qp.A = A;
    qp.b = b;

    const auto ref = crg_test::enumerate_qp_minimum(H, g, A, b);
    const QpResult r = solve_qp(qp);
    if (!ref) {
      // Enumeration found no KKT-consistent candidate: the problem is
      // infeasible (degenerate candidates are excluded by construction of
      // the random data).
      CHECK(r.status == QpStatus::kInfeasible);
      continue;
    }
    REQUIRE(r.status == QpStatus::kOptimal);
    CHECK((r.x - *ref).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(crg_test::qp_objective(H, g, r.x) ==
          doctest::Approx(crg_test::qp_objective(H, g, *ref)).epsilon(1e-10));
    ++compared;
  }
  CHECK(compared >= 25);  // the sweep must actually exercise the solver
}

TEST_CASE("qp: contradictory rows yield an infeasibility certificate") {
  // x >= 1 and x <= -1 cannot hold; the best relaxation still violates by 1.
  QpProblem qp;
  qp.Hess = mat1(2.0);
  qp.grad = vec1(0.0);
  qp.A.resize(2, 1);
  qp.A << 1.0, -1.0;
  qp.b.resize(2);
  qp.b << -1.0, -1.0;
  const QpResult r = solve_qp(qp);
  REQUIRE(r.status == QpStatus::kInfeasible);
  CHECK(r.infeasibility_gap == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("qp: a feasible warm start is honored and the answer is unchanged") {
  TestRng rng(5150);
  const int n = 3;
  const Eigen::MatrixXd H = rng.spd(n, 0.5);
  const Eigen::VectorXd g = rng.vector(n);
  QpProblem qp;
  qp.Hess = H;
  qp.grad = g;
  qp.A.resize(2 * n, n);
  qp.A.topRows(n) = Eigen::MatrixXd::Identity(n, n);
  qp.A.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
  qp.b = Eigen::VectorXd::Constant(2 * n, 2.0);

  const QpResult cold = solve_qp(qp);
  const Eigen::VectorXd start = Eigen::VectorXd::Zero(n);
  const QpResult warm = solve_qp(qp, {}, &start);
  REQUIRE(cold.status == QpStatus::kOptimal);
  REQUIRE(warm.status == QpStatus::kOptimal);
  CHECK((cold.x - warm.x).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("qp: repeated solves are bitwise deterministic") {
  TestRng rng(99);
  const int n = 3;
  const Eigen::MatrixXd H = rng.spd(n, 0.3);
  const Eigen::VectorXd g = rng.vector(n);
  const Eigen::MatrixXd A = rng.matrix(5, n);
  const Eigen::VectorXd b = rng.vector(5, 0.1, 1.0);
  QpProblem qp;
  qp.Hess = H;
  qp.grad = g;
  qp.A = A;
  qp.b = b;
  const QpResult a = solve_qp(qp);
  const QpResult c = solve_qp(qp);
  REQUIRE(a.status == c.status);
  CHECK(a.iterations == c.iterations);
  CHECK(a.active_set == c.active_set);
  if (a.status == QpStatus::kOptimal) {
    CHECK((a.x.array() == c.x.array()).all());
  }
}

TEST_CASE("qp: malformed problems are rejected") {
  QpProblem qp;
  qp.Hess = Eigen::MatrixXd::Identity(2, 2);
  qp.Hess(0, 1) = 0.5;  // asymmetric
  qp.grad = Eigen::VectorXd::Zero(2);
  qp.A.resize(0, 2);
  qp.b.resize(0);
  CHECK_THROWS_AS(solve_qp(qp), std::runtime_error);

  QpProblem indef;
  indef.Hess = Eigen::MatrixXd::Identity(2, 2);
  indef.Hess(1, 1) = -1.0;
  indef.grad = Eigen::VectorXd::Zero(2);
  indef.A.resize(0, 2);
  indef.b.resize(0);
  CHECK_THROWS_AS(solve_qp(indef), std::runtime_error);

  QpProblem mismatch;
  mismatch.Hess = Eigen::MatrixXd::Identity(2, 2);
  mismatch.grad = Eigen::VectorXd::Zero(3);
  mismatch.A.resize(0, 2);
  mismatch.b.resize(0);
  CHECK_THROWS_AS(solve_qp(mismatch), std::runtime_error);
}
