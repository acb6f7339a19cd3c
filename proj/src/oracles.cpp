#include "tensorial/oracles.hpp"

#include "tensorial/solvers.hpp"

#include <cmath>
#include <sstream>

namespace tensorial {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMat as_matrix(const Vec& x, int d1, int d2) { return Eigen::Map<const RowMat>(x.data(), d1, d2); }

Vec flat(const RowMat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

}  // namespace

// ---- Schatten --------------------------------------------------------------

static Touch nuclear_at(const RowMat& x) {
  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RowMat y = svd.matrixU() * svd.matrixV().transpose();
  return {svd.singularValues().sum(), flat(y)};
}

static Touch spectral_at(const RowMat& x) {
  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RowMat y = svd.matrixU().col(0) * svd.matrixV().col(0).transpose();
  return {svd.singularValues()(0), flat(y)};
}

Touch SchattenOracle::gauge_at(const Vec& x) const {
  RowMat m = as_matrix(x, d1_, d2_);
  return p_ == 1 ? nuclear_at(m) : spectral_at(m);
}

Touch SchattenOracle::support_at(const Vec& u) const {
  RowMat m = as_matrix(u, d1_, d2_);
  return p_ == 1 ? spectral_at(m) : nuclear_at(m);
}

std::string SchattenOracle::name() const {
  std::ostringstream os;
  os << (p_ == 1 ? "nuclear" : "spectral") << "_ball(" << d1_ << "x" << d2_ << ")";
  return os.str();
}

// ---- linear image ------------------------------------------------------------

ImageOracle::ImageOracle(Mat l, Body inner) : l_(std::move(l)), inner_(std::move(inner)) {
  if (l_.rows() != l_.cols() || l_.cols() != inner_.dim()) throw InputError("linear image: map has wrong size");
  Eigen::FullPivLU<Mat> lu(l_);
  if (!lu.isInvertible()) throw InputError("linear image: singular map");
  linv_ = lu.inverse();
}

Touch ImageOracle::support_at(const Vec& u) const {
  Touch t = tensorial::support_at(inner_, l_.transpose() * u);
  return {t.value, l_ * t.point};
}

Touch ImageOracle::gauge_at(const Vec& x) const {
  Touch t = tensorial::gauge_at(inner_, linv_ * x);
  return {t.value, linv_.transpose() * t.point};
}

std::string ImageOracle::name() const { return "image(" + inner_.describe() + ")"; }

// ---- Minkowski sum -----------------------------------------------------------

SumOracle::SumOracle(std::vector<Body> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw InputError("empty Minkowski sum");
  for (const Body& b : terms_)
    if (b.dim() != terms_[0].dim()) throw InputError("Minkowski sum: dimension mismatch");
}

Touch SumOracle::support_at(const Vec& u) const {
  Touch acc{0, Vec::Zero(dim())};
  for (const Body& b : terms_) {
    Touch t = tensorial::support_at(b, u);
    acc.value += t.value;
    acc.point += t.point;
  }
  return acc;
}

Touch SumOracle::gauge_at(const Vec& x) const {
  return gauge_from_support([this](const Vec& u) { return support_at(u); }, dim(), x);
}

std::string SumOracle::name() const {
  std::string s = "sum(";
  for (size_t i = 0; i < terms_.size(); ++i) s += (i ? ", " : "") + terms_[i].describe();
  return s + ")";
}

// ---- convex hull of a union ------------------------------------------------------

UnionOracle::UnionOracle(std::vector<Body> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw InputError("empty union");
  for (const Body& b : parts_)
    if (b.dim() != parts_[0].dim()) throw InputError("convex hull of union: dimension mismatch");
}

Touch UnionOracle::support_at(const Vec& u) const {
  Touch best{-1, Vec()};
  for (const Body& b : parts_) {
    Touch t = tensorial::support_at(b, u);
    if (t.value > best.value) best = t;
  }
  return best;
}

Touch UnionOracle::gauge_at(const Vec& x) const {
  return gauge_from_support([this](const Vec& u) { return support_at(u); }, dim(), x);
}

std::string UnionOracle::name() const {
  std::string s = "conv_union(";
  for (size_t i = 0; i < parts_.size(); ++i) s += (i ? ", " : "") + parts_[i].describe();
  return s + ")";
}

// ---- projective product --------------------------------------------------------

Vec contract_except(const Vec& u, const TensorShape& shape, const std::vector<Vec>& xs, int keep) {
  Vec r = Vec::Zero(shape.dim(keep));
  for (int idx = 0; idx < shape.total(); ++idx) {
    if (u(idx) == 0) continue;
    std::vector<int> k = shape.unflatten(idx);
    double w = u(idx);
    for (int i = 0; i < shape.order(); ++i)
      if (i != keep) w *= xs[i](k[i]);
    r(k[keep]) += w;
  }
  return r;
}

ProjectiveOracle::ProjectiveOracle(std::vector<Body> factors, TensorShape shape)
    : factors_(std::move(factors)), shape_(std::move(shape)) {
  if (static_cast<int>(factors_.size()) != shape_.order()) throw InputError("projective product: factor count does not match shape");
  for (int i = 0; i < shape_.order(); ++i)
    if (factors_[i].dim() != shape_.dim(i)) throw InputError("projective product: factor dimension mismatch");
}

Touch ProjectiveOracle::support_at(const Vec& u) const {
  const int l = shape_.order();
  std::vector<int> poly, smooth;
  for (int i = 0; i < l; ++i) (factors_[i].is_polytope() ? poly : smooth).push_back(i);

  std::vector<Vec> xs(l);
  Touch best{-1, Vec()};
  // iterate over vertex choices of polytope factors (signs are absorbed by a symmetric factor)
  std::vector<int> pick(l, 0);
  auto next_pick = [&] {
    for (int i : poly) {
      if (++pick[i] < factors_[i].vertices().cols()) return true;
      pick[i] = 0;
    }
    return false;
  };
  Rng rng(99);
  do {
    for (int i : poly) xs[i] = factors_[i].vertices().col(pick[i]);
    if (smooth.empty()) {
      double v = u.dot(kron_vec(xs));
      if (std::abs(v) > best.value) best = {std::abs(v), (v >= 0 ? 1.0 : -1.0) * kron_vec(xs)};
      continue;
    }
    if (smooth.size() == 1) {
      int k = smooth[0];
      Touch t = tensorial::support_at(factors_[k], contract_except(u, shape_, xs, k));
      xs[k] = t.point;
      if (t.value > best.value) best = {t.value, kron_vec(xs)};
      continue;
    }
    // several smooth factors: multistart alternating maximization (a lower bound)
    for (int start = 0; start < 8 * static_cast<int>(smooth.size()); ++start) {
      for (int k : smooth) xs[k] = tensorial::support_at(factors_[k], random_unit(shape_.dim(k), rng)).point;
      double val = -1;
      for (int sweep = 0; sweep < 200; ++sweep) {
        double v = 0;
        for (int k : smooth) {
          Touch t = tensorial::support_at(factors_[k], contract_except(u, shape_, xs, k));
          xs[k] = t.point;
          v = t.value;
        }
        if (v <= val * (1 + 1e-15)) break;
        val = v;
      }
      if (val > best.value) best = {val, kron_vec(xs)};
    }
  } while (next_pick());
  return best;
}

Touch ProjectiveOracle::gauge_at(const Vec& x) const {
  return gauge_from_support([this](const Vec& u) { return support_at(u); }, dim(), x);
}

std::string ProjectiveOracle::name() const {
  std::string s = "projective(";
  for (size_t i = 0; i < factors_.size(); ++i) s += (i ? ", " : "") + factors_[i].describe();
  return s + ")";
}

// ---- slice -------------------------------------------------------------------

Touch SliceOracle::gauge_at(const Vec& x) const {
  Touch t = tensorial::gauge_at(body_, embed_ * x);
  return {t.value / s_, embed_.transpose() * t.point / s_};
}

Touch SliceOracle::support_at(const Vec& u) const {
  return support_from_gauge([this](const Vec& x) { return gauge_at(x); }, dim(), u);
}

std::string SliceOracle::name() const { return "slice(" + body_.describe() + ")"; }

}  // namespace tensorial
