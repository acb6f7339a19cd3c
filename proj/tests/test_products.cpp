#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tensorial/lowner.hpp"
#include "tensorial/products.hpp"

#include <cmath>

using namespace tensorial;

namespace {
Vec gaussian(int d, Rng& rng) {
  std::normal_distribution<double> n;
  Vec x(d);
  for (int i = 0; i < d; ++i) x(i) = n(rng);
  return x;
}
std::vector<Body> random_factors(const std::vector<int>& dims, Rng& rng) {
  std::vector<Body> f;
  for (int d : dims) f.push_back(random_polytope(d, d + 2, rng));
  return f;
}
}  // namespace

TEST_CASE("projective product examples") {
  Body b1 = lp_ball(1, 2);
  Body p = projective_product({b1, b1});
  REQUIRE(p.kind() == Kind::VPoly);
  CHECK(p.generators().cols() == 4);
  CHECK(hausdorff_value(p, lp_ball(1, 4)) <= 1e-12);
  CHECK(hausdorff_value(projective_product({scale(b1, 2), scale(b1, 0.5)}), p) <= 1e-12);
  Body cube = lp_ball(INFINITY, 2);
  Body pc = projective_product({cube, cube});
  // the 8 distinct sign patterns s (x) t form 4 +- pairs
  CHECK(pc.generators().cols() == 4);
  CHECK(pc.generators().cwiseAbs().isApprox(Mat::Ones(4, 4)));
  for (int j = 0; j < 4; ++j) {
    Vec g = pc.generators().col(j);
    CHECK(g(0) * g(3) == g(1) * g(2));
  }
  REQUIRE(p.shape());
  CHECK(*p.shape() == TensorShape({2, 2}));
}

TEST_CASE("injective product examples") {
  Body b1 = lp_ball(1, 2), cube = lp_ball(INFINITY, 2);
  CHECK(hausdorff_value(injective_product({b1, b1}), polar(projective_product({cube, cube}))) <= 1e-12);
  Body b2 = euclidean_ball(2);
  Vec id = Mat::Identity(2, 2).reshaped();
  CHECK(gauge(injective_product({b2, b2}), id) == doctest::Approx(1).epsilon(1e-9));
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    auto f = random_factors({2, k % 2 ? 3 : 2}, rng);
    CHECK(nu(projective_product(f), injective_product(f)) <= 1 + 1e-9);
  }
}

TEST_CASE("hilbert product examples") {
  Body r2 = euclidean_ball(2, std::sqrt(2.0));
  CHECK(hausdorff_value(hilbert_product({r2, r2}), euclidean_ball(4, 2)) <= 1e-12);
  CHECK(hausdorff_value(hilbert_product({euclidean_ball(2), euclidean_ball(3), euclidean_ball(2)}), euclidean_ball(12)) <= 1e-12);
  Rng rng(2);
  Body e1 = linear_image(random_well_conditioned(2, rng), euclidean_ball(2));
  Body e2 = linear_image(random_well_conditioned(3, rng), euclidean_ball(3));
  for (double lam : {0.25, 4.0})
    CHECK(hausdorff_value(hilbert_product({scale(e1, lam), scale(e2, 1 / lam)}), hilbert_product({e1, e2})) <= 1e-10);
  CHECK_THROWS_AS(hilbert_product({lp_ball(1, 2), e1}), InputError);
}

TEST_CASE("gauges factor on decomposables") {
  Rng rng(3);
  for (const std::vector<int>& dims : {std::vector<int>{2, 2}, std::vector<int>{2, 3}, std::vector<int>{2, 2, 2}}) {
    auto f = random_factors(dims, rng);
    std::vector<Body> e;
    for (int d : dims) e.push_back(linear_image(random_well_conditioned(d, rng), euclidean_ball(d)));
    Body pi = projective_product(f), ep = injective_product(f), h2 = hilbert_product(e);
    TensorShape s(dims);
    for (int k = 0; k < 200; ++k) {
      std::vector<Vec> xs;
      double gp = 1, ge = 1;
      for (size_t i = 0; i < dims.size(); ++i) {
        xs.push_back(gaussian(dims[i], rng));
        gp *= gauge(f[i], xs.back());
        ge *= gauge(e[i], xs.back());
      }
      Vec x = kron_vec(xs, s);
      CHECK(std::abs(gauge(pi, x) - gp) <= 1e-8 * gp);
      CHECK(std::abs(gauge(ep, x) - gp) <= 1e-8 * gp);
      CHECK(std::abs(gauge(h2, x) - ge) <= 1e-8 * ge);
    }
  }
}

TEST_CASE("smooth factors give oracle bodies with the same crossnorm") {
  Rng rng(4);
  Body b2 = euclidean_ball(2), b1 = lp_ball(1, 2);
  Body mixed = projective_product({b2, b1});
  CHECK(mixed.kind() == Kind::Implicit);
  for (int k = 0; k < 50; ++k) {
    Vec x = gaussian(2, rng), y = gaussian(2, rng);
    double want = x.norm() * y.lpNorm<1>();
    CHECK(std::abs(gauge(mixed, kron_vec({x, y})) - want) <= 1e-8 * want);
    CHECK(std::abs(gauge(injective_product({b2, b1}), kron_vec({x, y})) - want) <= 1e-8 * want);
  }
}

TEST_CASE("polarity exchanges the products") {
  Rng rng(5);
  for (int k = 0; k < 5; ++k) {
    auto f = random_factors({2, 3}, rng);
    std::vector<Body> pf{polar(f[0]), polar(f[1])};
    CHECK(hausdorff_value(polar(projective_product(f)), injective_product(pf)) <= 1e-8);
    CHECK(hausdorff_value(polar(injective_product(f)), projective_product(pf)) <= 1e-8);
  }
}

TEST_CASE("scalars move between factors") {
  Rng rng(6);
  auto f = random_factors({2, 3}, rng);
  for (double lam : {0.25, 4.0}) {
    std::vector<Body> g{scale(f[0], lam), scale(f[1], 1 / lam)};
    CHECK(hausdorff_value(projective_product(g), projective_product(f)) <= 1e-10);
    CHECK(hausdorff_value(injective_product(g), injective_product(f)) <= 1e-10);
  }
}

TEST_CASE("factor maps act factorwise on products") {
  Rng rng(7);
  TensorShape s({2, 2});
  for (int k = 0; k < 6; ++k) {
    auto f = random_factors({2, 2}, rng);
    std::vector<Mat> t{random_well_conditioned(2, rng), random_well_conditioned(2, rng)};
    std::vector<int> sigma{k % 2, 1 - k % 2};
    FactorMap m(t, sigma, s);
    std::vector<Body> moved{linear_image(t[0], f[sigma[0]]), linear_image(t[1], f[sigma[1]])};
    CHECK(hausdorff_value(linear_image(m, projective_product(f)), projective_product(moved)) <= 1e-8);
    CHECK(hausdorff_value(linear_image(m, injective_product(f)), injective_product(moved)) <= 1e-8);
  }
}

TEST_CASE("injective inside a multiple of projective") {
  Rng rng(8);
  for (const std::vector<int>& dims : {std::vector<int>{2, 2}, std::vector<int>{2, 3}, std::vector<int>{3, 2}, std::vector<int>{2, 2, 2}}) {
    auto f = random_factors(dims, rng);
    double bound = 1;
    for (size_t i = 0; i + 1 < dims.size(); ++i) bound *= dims[i];
    CHECK(nu(injective_product(f), projective_product(f)) <= bound + 1e-6);
  }
}

TEST_CASE("slot embeddings and size caps") {
  TensorShape s({2, 3});
  Mat e = slot_embedding(s, 1);
  Vec x(3);
  x << 1, 2, 3;
  Vec e1 = Vec::Unit(2, 0);
  CHECK((e * x - kron_vec({e1, x}, s)).norm() == 0);
  Body b = lp_ball(1, 4);
  CHECK_THROWS_AS(projective_product({b, b, b}), CapError);
  Body c = lp_ball(1, 2);
  CHECK_THROWS_AS(projective_product({c, c, c, c}), CapError);
}
