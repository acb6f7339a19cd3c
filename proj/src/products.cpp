#include "tensorial/products.hpp"

#include "tensorial/lowner.hpp"
#include "tensorial/oracles.hpp"

#include <cmath>

namespace tensorial {

TensorShape shape_of(const std::vector<Body>& factors) {
  if (factors.empty()) throw InputError("tensor product of no factors");
  if (static_cast<int>(factors.size()) > kMaxFactors) throw CapError("at most " + std::to_string(kMaxFactors) + " factors are supported");
  std::vector<int> dims;
  for (const Body& b : factors) dims.push_back(b.dim());
  TensorShape s(dims);
  if (s.total() > kMaxProductDim) throw CapError("tensor dimension " + std::to_string(s.total()) + " exceeds " + std::to_string(kMaxProductDim));
  return s;
}

Mat slot_embedding(const TensorShape& s, int slot) {
  Mat e(s.total(), s.dim(slot));
  std::vector<Vec> xs;
  for (int i = 0; i < s.order(); ++i) xs.push_back(Vec::Unit(s.dim(i), 0));
  for (int k = 0; k < s.dim(slot); ++k) {
    xs[slot] = Vec::Unit(s.dim(slot), k);
    e.col(k) = kron_vec(xs);
  }
  return e;
}

namespace {

// all Kronecker products of one column from each matrix
Mat kron_columns(const std::vector<Mat>& cols) {
  int n = 1;
  for (const Mat& c : cols) n *= static_cast<int>(c.cols());
  int total = 1;
  for (const Mat& c : cols) total *= static_cast<int>(c.rows());
  Mat out(total, n);
  std::vector<int> pick(cols.size(), 0);
  std::vector<Vec> xs(cols.size());
  for (int k = 0; k < n; ++k) {
    for (size_t i = 0; i < cols.size(); ++i) xs[i] = cols[i].col(pick[i]);
    out.col(k) = kron_vec(xs);
    for (size_t i = 0; i < cols.size(); ++i) {
      if (++pick[i] < cols[i].cols()) break;
      pick[i] = 0;
    }
  }
  return out;
}

bool all_kind(const std::vector<Body>& ps, Kind k) {
  for (const Body& b : ps)
    if (b.kind() != k) return false;
  return true;
}

bool all_polytopes(const std::vector<Body>& ps) {
  for (const Body& b : ps)
    if (!b.is_polytope()) return false;
  return true;
}

Body schatten_image(const std::vector<Body>& es, double p) {
  std::vector<Mat> a;
  for (const Body& e : es) a.push_back(xi(e));
  Body ball = Body::implicit(std::make_shared<SchattenOracle>(p, es[0].dim(), es[1].dim()));
  return Body::implicit(std::make_shared<ImageOracle>(kron_mat(a), ball));
}

}  // namespace

Body projective_product(const std::vector<Body>& ps) {
  TensorShape s = shape_of(ps);
  Body out;
  if (all_polytopes(ps)) {
    std::vector<Mat> verts;
    for (const Body& b : ps) verts.push_back(b.vertices());
    out = Body::vpoly(kron_columns(verts));
  } else if (ps.size() == 2 && all_kind(ps, Kind::Ellipsoid)) {
    out = schatten_image(ps, 1);
  } else {
    std::vector<Body> f;
    for (const Body& b : ps) f.push_back(b.without_shape());
    out = Body::implicit(std::make_shared<ProjectiveOracle>(f, s));
  }
  return out.with_shape(s);
}

Body injective_product(const std::vector<Body>& ps) {
  TensorShape s = shape_of(ps);
  Body out;
  if (all_polytopes(ps)) {
    std::vector<Mat> normals;
    for (const Body& b : ps) normals.push_back(b.facets());
    out = Body::hpoly(kron_columns(normals));
  } else if (ps.size() == 2 && all_kind(ps, Kind::Ellipsoid)) {
    out = schatten_image(ps, INFINITY);
  } else {
    std::vector<Body> polars;
    for (const Body& b : ps) polars.push_back(polar(b));
    out = polar(projective_product(polars));
  }
  return out.with_shape(s);
}

Body hilbert_product(const std::vector<Body>& es) {
  TensorShape s = shape_of(es);
  std::vector<Mat> m;
  for (const Body& e : es) {
    if (e.kind() != Kind::Ellipsoid) throw InputError("Hilbertian product needs ellipsoid factors");
    m.push_back(e.shape_matrix());
  }
  // (A_1 (x) ... (x) A_l)^{-2} = M_1 (x) ... (x) M_l since A_i = M_i^{-1/2}
  return Body::ellipsoid(kron_mat(m)).with_shape(s);
}

}  // namespace tensorial
