#include "tensorial/body.hpp"

#include "tensorial/oracles.hpp"
#include "tensorial/solvers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tensorial {

namespace {

void check_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + " contains non-finite entries");
}

void check_spanning(const Mat& cols, const char* what) {
  if (cols.cols() == 0) throw InputError(std::string(what) + ": empty");
  Eigen::ColPivHouseholderQR<Mat> qr(cols);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols.rows()) throw InputError(std::string(what) + " do not span the space (body not full-dimensional)");
}

}  // namespace

Body Body::vpoly(const Mat& gens, bool prune) {
  check_finite(gens, "generators");
  if (gens.rows() > 16) throw CapError("bodies are limited to dimension 16");
  check_spanning(gens, "generators");
  Body b;
  b.kind_ = Kind::VPoly;
  b.dim_ = static_cast<int>(gens.rows());
  b.data_ = std::make_shared<const Mat>(prune ? prune_symmetric(gens) : dedupe_pm(gens));
  return b;
}

Body Body::hpoly(const Mat& normals, bool prune) {
  check_finite(normals, "normals");
  if (normals.rows() > 16) throw CapError("bodies are limited to dimension 16");
  check_spanning(normals, "normals");
  Body b;
  b.kind_ = Kind::HPoly;
  b.dim_ = static_cast<int>(normals.rows());
  b.data_ = std::make_shared<const Mat>(prune ? prune_symmetric(normals) : dedupe_pm(normals));
  return b;
}

Body Body::ellipsoid(const Mat& shape) {
  check_finite(shape, "shape matrix");
  if (shape.rows() > 16) throw CapError("bodies are limited to dimension 16");
  if (!is_spd(shape, 1e-10)) throw InputError("ellipsoid shape matrix is not symmetric positive definite");
  Body b;
  b.kind_ = Kind::Ellipsoid;
  b.dim_ = static_cast<int>(shape.rows());
  b.data_ = std::make_shared<const Mat>(symmetrize(shape));
  return b;
}

Body Body::implicit(std::shared_ptr<const Oracle> oracle) {
  Body b;
  b.kind_ = Kind::Implicit;
  b.dim_ = oracle->dim();
  if (b.dim_ > 16) throw CapError("bodies are limited to dimension 16");
  b.oracle_ = std::move(oracle);
  return b;
}

const Mat& Body::generators() const {
  if (kind_ != Kind::VPoly) throw InputError("body is not a V-polytope");
  return *data_;
}
const Mat& Body::normals() const {
  if (kind_ != Kind::HPoly) throw InputError("body is not an H-polytope");
  return *data_;
}
const Mat& Body::shape_matrix() const {
  if (kind_ != Kind::Ellipsoid) throw InputError("body is not an ellipsoid");
  return *data_;
}
const Oracle& Body::oracle() const {
  if (kind_ != Kind::Implicit) throw InputError("body is not implicit");
  return *oracle_;
}

const Mat& Body::vertices() const {
  if (kind_ == Kind::VPoly) return *data_;
  if (kind_ != Kind::HPoly) throw InputError("vertices requested for a non-polytope");
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->verts) cache_->verts = hpoly_vertices(*data_);
  return *cache_->verts;
}

const Mat& Body::facets() const {
  if (kind_ == Kind::HPoly) return *data_;
  if (kind_ != Kind::VPoly) throw InputError("facets requested for a non-polytope");
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->facets) cache_->facets = hpoly_vertices(*data_);
  return *cache_->facets;
}

Body Body::with_shape(const TensorShape& s) const {
  if (s.total() != dim_) throw InputError("tensor shape " + s.str() + " does not match dimension " + std::to_string(dim_));
  Body b = *this;
  b.shape_ = s;
  return b;
}

Body Body::without_shape() const {
  Body b = *this;
  b.shape_.reset();
  return b;
}

const TensorShape& Body::require_shape() const {
  if (!shape_) throw InputError("body carries no tensor shape");
  return *shape_;
}

std::string Body::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::VPoly: os << "vpoly(dim " << dim_ << ", " << data_->cols() << " generator pairs)"; break;
    case Kind::HPoly: os << "hpoly(dim " << dim_ << ", " << data_->cols() << " normal pairs)"; break;
    case Kind::Ellipsoid: os << "ellipsoid(dim " << dim_ << ")"; break;
    case Kind::Implicit: os << oracle_->name(); break;
  }
  if (shape_) os << " [" << shape_->str() << "]";
  return os.str();
}

double Body::cache_discrepancy() const {
  if (!is_polytope()) return 0;
  std::optional<Mat> v, f;
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    v = cache_->verts;
    f = cache_->facets;
  }
  double worst = 0;
  if (kind_ == Kind::HPoly && v) {
    for (int j = 0; j < v->cols(); ++j) worst = std::max(worst, std::abs((data_->transpose() * v->col(j)).cwiseAbs().maxCoeff() - 1));
  }
  if (kind_ == Kind::VPoly && f) {
    for (int j = 0; j < f->cols(); ++j) worst = std::max(worst, std::abs((data_->transpose() * f->col(j)).cwiseAbs().maxCoeff() - 1));
  }
  return worst;
}

// ---- oracles ---------------------------------------------------------------

Touch gauge_at(const Body& p, const Vec& x) {
  if (x.size() != p.dim()) throw InputError("gauge: point has dimension " + std::to_string(x.size()) + ", body has " + std::to_string(p.dim()));
  switch (p.kind()) {
    case Kind::VPoly: {
      GaugeLP lp = lp_gauge(p.generators(), x);
      return {lp.value, lp.dual};
    }
    case Kind::HPoly: {
      Vec r = p.normals().transpose() * x;
      Eigen::Index j;
      double v = r.cwiseAbs().maxCoeff(&j);
      return {v, (r(j) >= 0 ? 1.0 : -1.0) * p.normals().col(j)};
    }
    case Kind::Ellipsoid: {
      Vec mx = p.shape_matrix() * x;
      double v = std::sqrt(std::max(0.0, x.dot(mx)));
      if (v == 0) return {0, Vec::Zero(p.dim())};
      return {v, mx / v};
    }
    case Kind::Implicit: return p.oracle().gauge_at(x);
  }
  throw std::logic_error("unreachable");
}

Touch support_at(const Body& p, const Vec& u) {
  if (u.size() != p.dim()) throw InputError("support: direction has dimension " + std::to_string(u.size()) + ", body has " + std::to_string(p.dim()));
  switch (p.kind()) {
    case Kind::VPoly: {
      Vec r = p.generators().transpose() * u;
      Eigen::Index j;
      double v = r.cwiseAbs().maxCoeff(&j);
      return {v, (r(j) >= 0 ? 1.0 : -1.0) * p.generators().col(j)};
    }
    case Kind::HPoly: {
      GaugeLP lp = lp_gauge(p.normals(), u);
      return {lp.value, lp.dual};
    }
    case Kind::Ellipsoid: {
      Vec w = spd_inverse(p.shape_matrix()) * u;
      double v = std::sqrt(std::max(0.0, u.dot(w)));
      if (v == 0) return {0, Vec::Zero(p.dim())};
      return {v, w / v};
    }
    case Kind::Implicit: return p.oracle().support_at(u);
  }
  throw std::logic_error("unreachable");
}

double gauge(const Body& p, const Vec& x) { return gauge_at(p, x).value; }
double support(const Body& p, const Vec& u) { return support_at(p, u).value; }

Touch gauge_from_support(const std::function<Touch(const Vec&)>& support_fn, int dim, const Vec& x) {
  if (x.norm() == 0) return {0, Vec::Zero(dim)};
  std::vector<Vec> pts;
  pts.push_back(support_fn(x).point);
  for (int i = 0; i < dim; ++i) pts.push_back(support_fn(Vec::Unit(dim, i)).point);
  auto as_mat = [&] {
    Mat m(dim, pts.size());
    for (size_t i = 0; i < pts.size(); ++i) m.col(i) = pts[i];
    return m;
  };
  Rng rng(12345);
  for (int tries = 0;; ++tries) {
    Eigen::ColPivHouseholderQR<Mat> qr(as_mat());
    qr.setThreshold(1e-10);
    if (qr.rank() == dim) break;
    if (tries > 8 * dim) throw NumericError("column generation: support points do not span (degenerate body)");
    pts.push_back(support_fn(random_unit(dim, rng)).point);
  }
  // repeated columns make the LP cycle on rounding noise
  auto add = [&](const Vec& p) {
    double tol = 1e-12 * std::max(1.0, p.norm());
    for (const Vec& q : pts)
      if ((p - q).norm() <= tol || (p + q).norm() <= tol) return;
    pts.push_back(p);
  };
  Touch best{-1, Vec()};
  double stall = INFINITY;
  Vec prev;
  for (int it = 0; it < 600; ++it) {
    GaugeLP lp = lp_gauge(as_mat(), x);
    Touch t = support_fn(lp.dual);
    if (t.value <= 0) throw NumericError("column generation: nonpositive support value");
    // <x,y>/h(y) bounds g from below for any y
    const double value = lp.dual.dot(x);
    double lower = value / t.value;
    if (lower > best.value) best = {lower, lp.dual / t.value};
    if (value - best.value <= 1e-12 * value) break;
    if (it % 8 == 0) {
      // rounding floor: a small gap that stopped shrinking
      double gap = value - best.value;
      if (gap <= 1e-9 * value && gap >= stall * (1 - 1e-3)) break;
      stall = gap;
    }
    add(t.point);
    // a second cut between consecutive duals damps the zig-zag on curved boundaries
    Vec y = lp.dual / t.value;
    if (prev.size()) add(support_fn(y + prev).point);
    prev = y;
  }
  return best;
}

Touch support_from_gauge(const std::function<Touch(const Vec&)>& gauge_fn, int dim, const Vec& u) {
  // the polar body's support function is our gauge
  return gauge_from_support(gauge_fn, dim, u);
}

// ---- standard bodies -----------------------------------------------------

Body lp_ball(double p, int d, double radius) {
  if (d < 1) throw InputError("dimension must be positive");
  Mat eye = radius * Mat::Identity(d, d);
  if (p == 1) return Body::vpoly(eye, false);
  if (p == 2) return euclidean_ball(d, radius);
  if (std::isinf(p)) return Body::hpoly(Mat::Identity(d, d) / radius, false);
  throw InputError("lp_ball supports p = 1, 2, inf");
}

Body cube_vpoly(int d, double radius) {
  if (d > 16) throw CapError("dimension too large");
  int n = 1 << (d - 1);
  Mat g(d, n);
  for (int k = 0; k < n; ++k) {
    g(0, k) = radius;
    for (int i = 1; i < d; ++i) g(i, k) = (k >> (i - 1)) & 1 ? -radius : radius;
  }
  return Body::vpoly(g, false);
}

Body euclidean_ball(int d, double radius) { return Body::ellipsoid(Mat::Identity(d, d) / (radius * radius)); }

Body schatten_ball(double p, int d1, int d2) {
  if (!(p == 1 || std::isinf(p))) throw InputError("Schatten balls are available for p = 1 and p = inf");
  return Body::implicit(std::make_shared<SchattenOracle>(p, d1, d2)).with_shape(TensorShape({d1, d2}));
}

Body random_polytope(int d, int gens, Rng& rng) {
  if (gens < d) throw InputError("random polytope needs at least dim generators");
  std::uniform_real_distribution<double> r(0.5, 1.5);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat g(d, gens);
    for (int j = 0; j < gens; ++j) g.col(j) = r(rng) * random_unit(d, rng);
    Eigen::ColPivHouseholderQR<Mat> qr(g);
    qr.setThreshold(1e-6);
    if (qr.rank() == d) return Body::vpoly(g);
  }
  throw NumericError("could not draw a full-dimensional random polytope");
}

}  // namespace tensorial
