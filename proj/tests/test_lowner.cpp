#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tensorial/lowner.hpp"
#include "tensorial/products.hpp"

#include <chrono>
#include <cmath>

using namespace tensorial;

namespace {
Vec gaussian(int d, Rng& rng) {
  std::normal_distribution<double> n;
  Vec x(d);
  for (int i = 0; i < d; ++i) x(i) = n(rng);
  return x;
}
}  // namespace

TEST_CASE("loewner ellipsoid examples") {
  Body e = lowner(lp_ball(INFINITY, 2));
  REQUIRE(e.kind() == Kind::Ellipsoid);
  CHECK((e.shape_matrix() - 0.5 * Mat::Identity(2, 2)).norm() <= 1e-6);
  CHECK((lowner(lp_ball(1, 2)).shape_matrix() - Mat::Identity(2, 2)).norm() <= 1e-6);
  Body cube = lp_ball(INFINITY, 2);
  Body big = lowner(projective_product({cube, cube}));
  CHECK((big.shape_matrix() - 0.25 * Mat::Identity(4, 4)).norm() <= 1e-6);
  Body ell = Body::ellipsoid(Mat::Identity(3, 3) * 2);
  CHECK((lowner(ell).shape_matrix() - ell.shape_matrix()).norm() == 0);
}

TEST_CASE("loewner of cubes") {
  for (int d : {2, 3, 4}) {
    Mat a = xi(lowner(lp_ball(INFINITY, d)));
    CHECK((a - std::sqrt(d) * Mat::Identity(d, d)).norm() <= 1e-6 * std::sqrt(d));
  }
}

TEST_CASE("xi") {
  CHECK((xi(euclidean_ball(3, 2.5)) - 2.5 * Mat::Identity(3, 3)).norm() <= 1e-12);
  Mat m = Mat::Identity(2, 2);
  m(0, 0) = 0.25;
  Mat want = Mat::Identity(2, 2);
  want(0, 0) = 2;
  CHECK((xi(Body::ellipsoid(m)) - want).norm() <= 1e-12);
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    Mat t = random_well_conditioned(4, rng);
    CHECK((xi(linear_image(t, euclidean_ball(4))) - spd_sqrt(t * t.transpose())).norm() <= 1e-9);
  }
  CHECK_THROWS(xi(lp_ball(1, 2)));
}

TEST_CASE("loewner normalization") {
  Normalized n = normalize_lowner(euclidean_ball(4, 3));
  CHECK(hausdorff_value(n.body, euclidean_ball(4)) <= 1e-12);
  CHECK((n.a - 3 * Mat::Identity(4, 4)).norm() <= 1e-12);
  Normalized c = normalize_lowner(lp_ball(INFINITY, 2));
  CHECK(hausdorff_value(c.body, lp_ball(INFINITY, 2, 1 / std::sqrt(2.0))) <= 1e-6);
  CHECK((c.a - std::sqrt(2.0) * Mat::Identity(2, 2)).norm() <= 1e-6);
  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    Body p = random_polytope(3, 6, rng);
    Body once = normalize_lowner(p).body;
    CHECK(hausdorff_value(normalize_lowner(once).body, once) <= 1e-6);
  }
}

TEST_CASE("containment, equivariance and the optimality certificate") {
  Rng rng(3);
  for (int k = 0; k < 8; ++k) {
    const int d = 2 + k % 3;
    Body p = random_polytope(d, d + 3, rng);
    Body e = lowner(p);
    CHECK(nu(p, e) <= 1 + 1e-6);

    Mat u = random_orthogonal(d, rng);
    CHECK(hausdorff_value(lowner(linear_image(u, p)), linear_image(u, e)) <= 1e-5);
    for (double lam : {0.1, 7.0}) {
      Mat s = lowner(scale(p, lam)).shape_matrix();
      CHECK((s * lam * lam - e.shape_matrix()).norm() <= 1e-6 * e.shape_matrix().norm());
    }

    // John's condition: the optimal design lives on contact points, and in
    // normalized coordinates it resolves the identity
    MveeResult r = mvee_symmetric(p.vertices());
    CHECK(r.gap <= 1e-7);
    CHECK(r.weights.sum() == doctest::Approx(1).epsilon(1e-9));
    Mat a = xi(Body::ellipsoid(r.shape));
    Mat acc = Mat::Zero(d, d);
    for (int j = 0; j < r.weights.size(); ++j) {
      Vec y = a.lu().solve(p.vertices().col(j));
      if (r.weights(j) > 1e-6) CHECK(y.norm() >= 1 - 1e-4);
      acc += r.weights(j) * y * y.transpose();
    }
    CHECK((d * acc - Mat::Identity(d, d)).norm() <= 1e-5);
    CHECK(contact_points(p.vertices(), Body::ellipsoid(r.shape)).cols() >= d);
  }
}

TEST_CASE("contact points of a cube reach the full count") {
  Body cube = lp_ball(INFINITY, 3);
  Body e = lowner(cube);
  // one column per +- pair
  CHECK(2 * contact_points(cube.vertices(), e).cols() >= 3 * 4 / 2);
}

TEST_CASE("large random point sets") {
  Rng rng(4);
  Mat pts(6, 1000);
  for (int j = 0; j < pts.cols(); ++j) pts.col(j) = gaussian(6, rng);
  auto t0 = std::chrono::steady_clock::now();
  MveeResult r = mvee_symmetric(pts);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(r.gap <= 1e-7);
  CHECK(secs < 1.0);
  Body e = Body::ellipsoid(r.shape);
  for (int j = 0; j < pts.cols(); ++j) CHECK(gauge(e, pts.col(j)) <= 1 + 1e-6);
}

TEST_CASE("degenerate point sets are rejected") {
  Mat flat = Mat::Zero(3, 4);
  flat.topRows(2) = Mat::Random(2, 4);
  CHECK_THROWS_AS(mvee_symmetric(flat), NumericError);
}
