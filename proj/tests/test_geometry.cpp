#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "crg/geometry/hull.hpp"
#include "crg/geometry/operations.hpp"
#include "crg/geometry/polytope.hpp"
#include "crg/geometry/serialization.hpp"
#include "crg/geometry/set_expr.hpp"
#include "crg/geometry/tolerances.hpp"
#include "oracles/geometry_oracles.hpp"
#include "oracles/test_rng.hpp"

using namespace crg::geometry;
using crg_test::TestRng;

namespace {

// H-rep without any vertex cache, forcing the enumeration path.
Polytope strip_cache(const Polytope& P) { return Polytope{P.F, P.g, nullptr}; }

bool matches_some(const std::vector<Eigen::VectorXd>& verts, const Eigen::VectorXd& x,
                  double tol) {
  for (const auto& v : verts) {
    if ((v - x).cwiseAbs().maxCoeff() <= tol) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("make_polytope rejects malformed H-reps") {
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2, 2);
  F(0, 0) = 1.0;  // row 1 stays all-zero
  Eigen::VectorXd g = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(make_polytope(F, g), std::runtime_error);
  CHECK_THROWS_AS(make_polytope(Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(3)),
                  std::runtime_error);
}

TEST_CASE("contains: interior, exterior, and boundary with tolerance") {
  const Polytope square = symmetric_box(Eigen::VectorXd::Ones(2));
  CHECK(contains(square, Eigen::Vector2d(0.0, 0.0), 0.0));
  CHECK_FALSE(contains(square, Eigen::Vector2d(2.0, 0.0), 1e-6));
  CHECK(contains(square, Eigen::Vector2d(1.0 + 5e-9, 1.0), kDedupTol));
}

TEST_CASE("is_empty: contradictory rows versus a box") {
  Eigen::MatrixXd F(2, 1);
  F << 1.0, -1.0;
  Eigen::VectorXd g(2);
  g << -1.0, -1.0;
  CHECK(is_empty(Polytope{F, g, nullptr}));
  CHECK_FALSE(is_empty(symmetric_box(Eigen::VectorXd::Ones(3))));
}

TEST_CASE("is_redundant: slack row yes, facets of a minimal representation no") {
  const Polytope interval = symmetric_box(Eigen::VectorXd::Ones(1));
  Eigen::VectorXd f(1);
  f << 1.0;
  CHECK(is_redundant(interval, f, 5.0));
  CHECK_FALSE(is_redundant(interval, f, 0.5));

  const Polytope square = symmetric_box(Eigen::VectorXd::Ones(2));
  for (Eigen::Index i = 0; i < square.F.rows(); ++i) {
    // Each box facet against the other three rows: not redundant.
    Eigen::MatrixXd Frest(3, 2);
    Eigen::VectorXd grest(3);
    Eigen::Index out = 0;
    for (Eigen::Index r = 0; r < 4; ++r) {
      if (r == i) continue;
      Frest.row(out) = square.F.row(r);
      grest(out) = square.g(r);
      ++out;
    }
    CHECK_FALSE(
        is_redundant(Polytope{Frest, grest, nullptr}, square.F.row(i).transpose(), square.g(i)));
  }
}

TEST_CASE("remove_redundant trims slack rows and keeps the box") {
  Eigen::MatrixXd F(6, 2);
  Eigen::VectorXd g(6);
  F << 1, 0, -1, 0, 0, 1, 0, -1, 1, 1, 1, 0;
  g << 1, 1, 1, 1, 10, 4;  // last two rows are slack
  const Polytope M = remove_redundant(Polytope{F, g, nullptr});
  CHECK(M.F.rows() == 4);
  const auto verts = vertices(M);
  CHECK(verts.size() == 4);
}

TEST_CASE("vertices: unit box and simplex") {
  const auto corners = vertices(strip_cache(symmetric_box(Eigen::VectorXd::Ones(2))));
  REQUIRE(corners.size() == 4);
  CHECK(matches_some(corners, Eigen::Vector2d(1.0, 1.0), 1e-9));
  CHECK(matches_some(corners, Eigen::Vector2d(-1.0, 1.0), 1e-9));
  CHECK(matches_some(corners, Eigen::Vector2d(1.0, -1.0), 1e-9));
  CHECK(matches_some(corners, Eigen::Vector2d(-1.0, -1.0), 1e-9));

  Eigen::MatrixXd F(3, 2);
  Eigen::VectorXd g(3);
  F << -1, 0, 0, -1, 1, 1;
  g << 0, 0, 1;
  const auto tri = vertices(Polytope{F, g, nullptr});
  REQUIRE(tri.size() == 3);
  CHECK(matches_some(tri, Eigen::Vector2d(0.0, 0.0), 1e-9));
  CHECK(matches_some(tri, Eigen::Vector2d(1.0, 0.0), 1e-9));
  CHECK(matches_some(tri, Eigen::Vector2d(0.0, 1.0), 1e-9));
}

TEST_CASE("vertices: 4D box enumerates all sixteen corners") {
  const auto corners = vertices(strip_cache(symmetric_box(Eigen::VectorXd::Ones(4))));
  CHECK(corners.size() == 16);
}

TEST_CASE("vertices: unbounded or empty sets are rejected") {
  Eigen::MatrixXd H(1, 2);
  H << 1.0, 0.0;
  Eigen::VectorXd h(1);
  h << 0.0;
  CHECK_THROWS_AS(vertices(Polytope{H, h, nullptr}), std::runtime_error);

  Eigen::MatrixXd F(2, 1);
  F << 1.0, -1.0;
  Eigen::VectorXd g(2);
  g << -1.0, -1.0;
  CHECK_THROWS_AS(vertices(Polytope{F, g, nullptr}), std::runtime_error);
}

TEST_CASE("vertices: every LP argmax over a random 3D polytope is an enumerated vertex") {
  TestRng rng(901);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = crg_test::random_cloud(rng, 3, 12, 2.0);
    const Polytope P = strip_cache(hull_hrep(cloud));
    const auto verts = vertices(P);
    for (int probe = 0; probe < 20; ++probe) {
      const Eigen::VectorXd c = rng.vector(3, -1.0, 1.0);
      const SupportResult r = solve_lp(c, P);
      CHECK(matches_some(verts, r.argmax, 1e-6));
    }
  }
}

TEST_CASE("hull_hrep: box corners give exactly four half-spaces") {
  std::vector<Eigen::VectorXd> corners = {
      Eigen::Vector2d(1, 1), Eigen::Vector2d(-1, 1), Eigen::Vector2d(1, -1),
      Eigen::Vector2d(-1, -1), Eigen::Vector2d(0.0, 0.5)};  // interior point
  const Polytope H = hull_hrep(corners);
  CHECK(H.F.rows() == 4);
  CHECK(contains(H, Eigen::Vector2d(0.0, 0.0), 0.0));
  CHECK_FALSE(contains(H, Eigen::Vector2d(1.5, 0.0), 1e-6));
  REQUIRE(H.vertex_cache);
  CHECK(H.vertex_cache->size() == 4);
}

TEST_CASE("hull_hrep: collinear points produce a flat segment") {
  std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1),
                                      Eigen::Vector2d(0.5, 0.5)};
  const Polytope S = hull_hrep(pts);
  CHECK(contains(S, Eigen::Vector2d(0.25, 0.25), 1e-9));
  CHECK_FALSE(contains(S, Eigen::Vector2d(0.5, 0.6), 1e-6));
  CHECK_FALSE(contains(S, Eigen::Vector2d(1.2, 1.2), 1e-6));
  const auto ext = extreme_points(pts);
  REQUIRE(ext.size() == 2);
}

TEST_CASE("hull_hrep/vertices round-trip is idempotent on extreme points") {
  TestRng rng(902);
  for (int dim = 2; dim <= 4; ++dim) {
    const int count = dim == 4 ? 10 : 14;
    for (int trial = 0; trial < 6; ++trial) {
      const auto cloud = crg_test::random_cloud(rng, dim, count, 1.5);
      const auto ext = extreme_points(cloud);
      const Polytope H = hull_hrep(cloud);
      const auto back = vertices(strip_cache(H));
      REQUIRE(back.size() == ext.size());
      for (const auto& v : ext) {
        CHECK(matches_some(back, v, 1e-6));
      }
      // Every original point is inside the hull.
      for (const auto& p : cloud) {
        CHECK(contains(H, p, 1e-7));
      }
    }
  }
}

TEST_CASE("minkowski_sum: identity with a singleton and interval addition") {
  const Polytope square = symmetric_box(Eigen::VectorXd::Ones(2));
  const Polytope zero = singleton(Eigen::VectorXd::Zero(2));
  const Polytope same = minkowski_sum(square, zero);
  for (int k = 0; k < 16; ++k) {
    const double angle = 2.0 * 3.14159265358979323846 * k / 16.0;
    Eigen::VectorXd d(2);
    d << std::cos(angle), std::sin(angle);
    const double h1 = solve_lp(d, square).value;
    const double h2 = solve_lp(d, same).value;
    CHECK(h1 == doctest::Approx(h2).epsilon(1e-7));
  }

  const Polytope a = symmetric_box(Eigen::VectorXd::Ones(1));
  const Polytope b = symmetric_box(2.0 * Eigen::VectorXd::Ones(1));
  const Polytope s = minkowski_sum(a, b);
  Eigen::VectorXd d(1);
  d << 1.0;
  CHECK(solve_lp(d, s).value == doctest::Approx(3.0));
  d << -1.0;
  CHECK(solve_lp(d, s).value == doctest::Approx(3.0));
}

TEST_CASE("minkowski_sum: support duality against the V-rep oracle") {
  TestRng rng(903);
  for (int trial = 0; trial < 8; ++trial) {
    const auto cp = crg_test::random_cloud(rng, 2, 8, 1.0);
    const auto cq = crg_test::random_cloud(rng, 2, 8, 1.5);
    const Polytope P = hull_hrep(cp);
    const Polytope Q = hull_hrep(cq);
    const Polytope S = minkowski_sum(P, Q);
    for (int k = 0; k < 64; ++k) {
      const Eigen::VectorXd d = rng.vector(2, -1.0, 1.0);
      const double lhs = solve_lp(d, S).value;
      const double rhs =
          crg_test::vrep_support(cp, d) + crg_test::vrep_support(cq, d);
      CHECK(std::abs(lhs - rhs) <= 1e-7 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("affine_image: identity, zero map, and a rank-deficient projection") {
  const Polytope cube = symmetric_box(Eigen::VectorXd::Ones(3));

  const Polytope same = affine_image(Eigen::MatrixXd::Identity(3, 3), cube);
  CHECK(contains(same, Eigen::Vector3d(1.0, 1.0, 1.0), 1e-8));
  CHECK_FALSE(contains(same, Eigen::Vector3d(1.1, 0.0, 0.0), 1e-6));

  const Polytope origin = affine_image(Eigen::MatrixXd::Zero(3, 3), cube);
  CHECK(contains(origin, Eigen::Vector3d::Zero(), 1e-9));
  CHECK_FALSE(contains(origin, Eigen::Vector3d(1e-3, 0, 0), 1e-6));

  Eigen::MatrixXd M(3, 3);
  M << 0.2, 0, 0, 0, 0.2, 0, 0, 0, 0;
  const Polytope flat = affine_image(M, cube);
  TestRng rng(904);
  for (int k = 0; k < 200; ++k) {
    const Eigen::VectorXd x = rng.vector(3, -1.0, 1.0);
    CHECK(contains(flat, M * x, 1e-7));
  }
  CHECK_FALSE(contains(flat, Eigen::Vector3d(0.0, 0.0, 0.1), 1e-6));
  CHECK_FALSE(contains(flat, Eigen::Vector3d(0.25, 0.0, 0.0), 1e-6));
}

TEST_CASE("pontryagin_diff: singleton identity and axis-aligned boxes") {
  const Polytope square = symmetric_box(Eigen::VectorXd::Ones(2));
  const SetExpr zero = SetExpr::polytope(singleton(Eigen::VectorXd::Zero(2)));
  const Polytope same = pontryagin_diff(square, zero);
  // Offsets shrink by at most the flat-band width.
  CHECK((same.g - square.g).cwiseAbs().maxCoeff() <= 2.0 * kFlatTol);

  const Polytope small = symmetric_box(0.25 * Eigen::VectorXd::Ones(2));
  const Polytope diff = pontryagin_diff(square, SetExpr::polytope(small));
  CHECK(diff.g(0) == doctest::Approx(0.75));
  CHECK(diff.g(1) == doctest::Approx(0.75));
  CHECK(diff.g(2) == doctest::Approx(0.75));
  CHECK(diff.g(3) == doctest::Approx(0.75));
}

TEST_CASE("pontryagin_diff: sampled membership property in 2D and 3D") {
  TestRng rng(905);
  int cases = 0;
  for (int dim = 2; dim <= 3; ++dim) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto cp = crg_test::random_cloud(rng, dim, 10, 2.0);
      const auto cs = crg_test::random_cloud(rng, dim, 6, 0.4);
      const Polytope P = hull_hrep(cp);
      const Polytope S = hull_hrep(cs);
      const Polytope D = pontryagin_diff(P, SetExpr::polytope(S));
      if (is_empty(D)) continue;
      ++cases;
      const auto dv = vertices(D);
      const auto sv = vertices(S);
      for (int k = 0; k < 100; ++k) {
        const Eigen::VectorXd x = crg_test::convex_sample(dv, rng);
        const Eigen::VectorXd s = crg_test::convex_sample(sv, rng);
        CHECK(contains(P, x + s, 1e-7));
      }
    }
  }
  CHECK(cases >= 6);
}

TEST_CASE("pontryagin then minkowski is contained in the original") {
  TestRng rng(906);
  for (int trial = 0; trial < 5; ++trial) {
    const auto cp = crg_test::random_cloud(rng, 2, 10, 2.0);
    const auto cs = crg_test::random_cloud(rng, 2, 5, 0.3);
    const Polytope P = hull_hrep(cp);
    const Polytope S = hull_hrep(cs);
    const Polytope D = pontryagin_diff(P, SetExpr::polytope(S));
    if (is_empty(D)) continue;
    const Polytope back = minkowski_sum(remove_redundant(D), S);
    for (const auto& v : vertices(back)) {
      CHECK(contains(P, v, 1e-7));
    }
  }
}

TEST_CASE("SetExpr: ball, affine image, and Minkowski supports") {
  const SetExpr ball = SetExpr::ball(0.5, 2);
  Eigen::VectorXd d(2);
  d << 3.0, 4.0;  // ‖d‖ = 5
  CHECK(ball.support(d) == doctest::Approx(2.5));

  const Polytope square = symmetric_box(Eigen::VectorXd::Ones(2));
  Eigen::MatrixXd M(2, 2);
  M << 2.0, 0.0, 0.0, 0.5;
  const SetExpr img = SetExpr::affine_image(M, SetExpr::polytope(square));
  Eigen::VectorXd ex(2);
  ex << 1.0, 0.0;
  CHECK(img.support(ex) == doctest::Approx(2.0));

  const SetExpr sum = SetExpr::minkowski_sum({img, ball, SetExpr::polytope(square)});
  // h = 2 (image) + 0.5 (ball) + 1 (square) along +x
  CHECK(sum.support(ex) == doctest::Approx(3.5));
}

TEST_CASE("SetExpr: support additivity matches componentwise evaluation") {
  TestRng rng(907);
  const auto ca = crg_test::random_cloud(rng, 3, 8, 1.0);
  const auto cb = crg_test::random_cloud(rng, 3, 8, 2.0);
  const SetExpr A = SetExpr::polytope(hull_hrep(ca));
  const SetExpr B = SetExpr::polytope(hull_hrep(cb));
  const SetExpr S = SetExpr::minkowski_sum({A, B});
  for (int k = 0; k < 64; ++k) {
    const Eigen::VectorXd d = rng.vector(3, -1.0, 1.0);
    CHECK(S.support(d) ==
          doctest::Approx(A.support(d) + B.support(d)).epsilon(1e-10));
  }
}

TEST_CASE("cartesian_product stacks blocks") {
  const Polytope square = symmetric_box(Eigen::VectorXd::Ones(2));
  const Polytope interval = symmetric_box(0.5 * Eigen::VectorXd::Ones(1));
  const Polytope prod = cartesian_product(square, interval);
  CHECK(prod.dim() == 3);
  CHECK(contains(prod, Eigen::Vector3d(1.0, -1.0, 0.5), 1e-9));
  CHECK_FALSE(contains(prod, Eigen::Vector3d(0.0, 0.0, 0.6), 1e-6));
  CHECK(vertices(prod).size() == 8);
}

TEST_CASE("serialization: byte-exact round trip and input hygiene") {
  TestRng rng(908);
  const Polytope P = hull_hrep(crg_test::random_cloud(rng, 3, 9, 1.7));
  const std::string text = to_text(P);
  const Polytope back = from_text(text);
  CHECK(to_text(back) == text);
  CHECK((P.F - back.F).cwiseAbs().maxCoeff() == 0.0);
  CHECK((P.g - back.g).cwiseAbs().maxCoeff() == 0.0);

  const Polytope commented = from_text("# header\n\n1 0 1\n-1 0 1\n0 1 1\n0 -1 1\n");
  CHECK(commented.dim() == 2);
  CHECK(commented.F.rows() == 4);

  CHECK_THROWS_AS(from_text("1 0 1\n1 0\n"), std::runtime_error);
  CHECK_THROWS_AS(from_text("1 abc 1\n"), std::runtime_error);
  CHECK_THROWS_AS(from_text("# only comments\n"), std::runtime_error);
}
