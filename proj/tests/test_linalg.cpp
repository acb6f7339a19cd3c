#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tensorial/linalg.hpp"

using namespace tensorial;

namespace {
Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}
Vec gaussian(int d, Rng& rng) {
  std::normal_distribution<double> n;
  Vec x(d);
  for (int i = 0; i < d; ++i) x(i) = n(rng);
  return x;
}
}  // namespace

TEST_CASE("shape flattening is row-major") {
  TensorShape s({2, 3, 2});
  CHECK(s.total() == 12);
  CHECK(s.flatten({1, 2, 1}) == 1 * 6 + 2 * 2 + 1);
  CHECK(s.unflatten(11) == std::vector<int>{1, 2, 1});
  CHECK(TensorShape::parse("2x3x2") == s);
  CHECK(s.str() == "2x3x2");
  CHECK_THROWS_AS(TensorShape::parse("2x"), InputError);
  CHECK_THROWS_AS(TensorShape({1, 2}), InputError);
  CHECK_THROWS_AS(TensorShape({4, 4, 5}), CapError);
}

TEST_CASE("kron_vec examples") {
  TensorShape s22({2, 2});
  Vec a = kron_vec({v2(1, 0), v2(0, 1)}, s22);
  CHECK((a - Vec::Unit(4, 1)).norm() == 0);
  Vec b = kron_vec({v2(1, 1), v2(1, 1)}, s22);
  CHECK((b - Vec::Ones(4)).norm() == 0);
  CHECK(b.norm() == doctest::Approx(2.0));
  TensorShape s222({2, 2, 2});
  Vec c = kron_vec({v2(2, 0), v2(0, 3), v2(1, 0)}, s222);
  CHECK((c - 6 * Vec::Unit(8, s222.flatten({0, 1, 0}))).norm() == 0);
  CHECK_THROWS_AS(kron_vec({v2(1, 0)}, s22), InputError);
}

TEST_CASE("kron_vec is multilinear and norm-multiplicative") {
  Rng rng(3);
  TensorShape s({2, 3, 2});
  for (int k = 0; k < 50; ++k) {
    std::vector<Vec> xs{gaussian(2, rng), gaussian(3, rng), gaussian(2, rng)};
    Vec y = gaussian(3, rng);
    const double a = 0.7, b = -1.3;
    std::vector<Vec> mix = xs, ys = xs;
    mix[1] = a * xs[1] + b * y;
    ys[1] = y;
    Vec lhs = kron_vec(mix, s), rhs = a * kron_vec(xs, s) + b * kron_vec(ys, s);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1 + rhs.norm()));
    double prod = xs[0].norm() * xs[1].norm() * xs[2].norm();
    CHECK(std::abs(kron_vec(xs, s).norm() - prod) <= 1e-12 * prod);
  }
}

TEST_CASE("factor map examples") {
  TensorShape s({2, 2});
  FactorMap swap({Mat::Identity(2, 2), Mat::Identity(2, 2)}, {1, 0}, s);
  Vec e1 = v2(1, 0), e2 = v2(0, 1);
  CHECK((swap.apply(kron_vec({e1, e2}, s)) - kron_vec({e2, e1}, s)).norm() == 0);

  FactorMap cancel({2 * Mat::Identity(2, 2), 0.5 * Mat::Identity(2, 2)}, {0, 1}, s);
  Vec x = Vec::LinSpaced(4, -1, 2);
  CHECK((cancel.apply(x) - x).norm() <= 1e-15);

  Rng rng(8);
  FactorMap o({random_orthogonal(2, rng), random_orthogonal(2, rng)}, {1, 0}, s);
  CHECK(o.orthogonal());
  for (int k = 0; k < 20; ++k) {
    Vec y = gaussian(4, rng);
    CHECK(std::abs(o.apply(y).norm() - y.norm()) <= 1e-12 * y.norm());
  }
  CHECK((o.matrix() * o.matrix().transpose() - Mat::Identity(4, 4)).norm() <= 1e-10);
}

TEST_CASE("factor maps act slotwise on decomposables") {
  Rng rng(4);
  TensorShape s({2, 2, 3});
  for (const auto& sigma : admissible_perms(s)) {
    CHECK(sigma[2] == 2);
    std::vector<Mat> t{random_well_conditioned(2, rng), random_well_conditioned(2, rng), random_well_conditioned(3, rng)};
    FactorMap m(t, sigma, s);
    std::vector<Vec> xs{gaussian(2, rng), gaussian(2, rng), gaussian(3, rng)};
    std::vector<Vec> ys;
    for (int i = 0; i < 3; ++i) ys.push_back(t[i] * xs[sigma[i]]);
    Vec want = kron_vec(ys, s);
    CHECK((m.apply(kron_vec(xs, s)) - want).norm() <= 1e-12 * want.norm());
    CHECK((m.matrix() * kron_vec(xs, s) - want).norm() <= 1e-12 * want.norm());
  }
  CHECK(admissible_perms(s).size() == 2);
  CHECK_THROWS_AS(FactorMap({Mat::Identity(2, 2), Mat::Identity(2, 2), Mat::Identity(3, 3)}, {2, 1, 0}, s), InputError);
  CHECK_THROWS_AS(FactorMap({Mat::Zero(2, 2), Mat::Identity(2, 2), Mat::Identity(3, 3)}, {0, 1, 2}, s), InputError);
}

TEST_CASE("factor map composition and inverse") {
  Rng rng(5);
  TensorShape s({2, 2});
  for (int k = 0; k < 10; ++k) {
    FactorMap a({random_well_conditioned(2, rng), random_well_conditioned(2, rng)}, {k % 2, 1 - k % 2}, s);
    FactorMap b({random_well_conditioned(2, rng), random_well_conditioned(2, rng)}, {1 - k % 2, k % 2}, s);
    Vec x = gaussian(4, rng);
    CHECK((a.compose(b).apply(x) - a.apply(b.apply(x))).norm() <= 1e-10 * (1 + x.norm()));
    CHECK((a.inverse().apply(a.apply(x)) - x).norm() <= 1e-10 * (1 + x.norm()));
  }
}

TEST_CASE("slot permutation matrix") {
  TensorShape s({2, 3});
  Mat u = slot_permutation(TensorShape({3, 2}), {1, 0});
  Vec x = Vec::LinSpaced(3, 1, 3), y = v2(-1, 4);
  CHECK((u * kron_vec({x, y}) - kron_vec({y, x})).norm() == 0);
  (void)s;
}

TEST_CASE("spd square roots") {
  Mat d = Vec(v2(4, 9)).asDiagonal();
  CHECK((spd_sqrt(d) - Mat(Vec(v2(2, 3)).asDiagonal())).norm() <= 1e-14);
  CHECK((spd_sqrt(Mat::Identity(3, 3)) - Mat::Identity(3, 3)).norm() <= 1e-14);
  Rng rng(6);
  for (int k = 0; k < 10; ++k) {
    Mat a = Mat::Random(5, 5);
    Mat m = a * a.transpose() + 0.1 * Mat::Identity(5, 5);
    Mat r = spd_sqrt(m);
    CHECK((r * r - m).norm() <= 1e-10 * m.norm());
    CHECK((spd_inv_sqrt(m) * r - Mat::Identity(5, 5)).norm() <= 1e-9);
  }
  Mat bad = Mat::Identity(2, 2);
  bad(1, 1) = -1;
  CHECK_THROWS_AS(spd_sqrt(bad), NumericError);
  CHECK_FALSE(is_spd(bad));
}

TEST_CASE("jacobi eigen decomposition") {
  Mat a = Mat::Random(6, 6);
  Mat m = a + a.transpose();
  SymEigen e = jacobi_eigen(m);
  CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - m).norm() <= 1e-10 * m.norm());
  for (int i = 1; i < 6; ++i) CHECK(e.values(i - 1) <= e.values(i));
}
