// Double description for symmetric polytopes {x : |<a,x>| <= 1}.
// Works on the homogenized cone {(x,t) : t -+ <a,x> >= 0} with the
// combinatorial adjacency test.

#include "tensorial/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace tensorial {

namespace {

struct Bits {
  std::vector<uint64_t> w;
  explicit Bits(size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(size_t i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
  int count() const {
    int c = 0;
    for (auto x : w) c += __builtin_popcountll(x);
    return c;
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.w.resize(w.size());
    for (size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] & o.w[i];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] & ~o.w[i]) return false;
    return true;
  }
};

struct Ray {
  Vec z;
  Bits zero;
};

// Rays born from near-zero inner products carry errors far above rounding;
// re-solve the active constraints of each vertex.
Vec polish_vertex(const Mat& a, const Vec& x) {
  Vec s = a.transpose() * x;
  std::vector<int> act;
  for (int j = 0; j < s.size(); ++j)
    if (std::abs(std::abs(s(j)) - 1) <= 1e-6) act.push_back(j);
  const int d = static_cast<int>(x.size());
  if (static_cast<int>(act.size()) < d) return x;
  Mat m(act.size(), d);
  Vec rhs(act.size());
  for (size_t i = 0; i < act.size(); ++i) {
    m.row(i) = a.col(act[i]).transpose();
    rhs(i) = s(act[i]) > 0 ? 1 : -1;
  }
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  if (qr.rank() < d) return x;
  Vec y = qr.solve(rhs);
  if ((m * y - rhs).cwiseAbs().maxCoeff() > 1e-9) return x;
  if ((a.transpose() * y).cwiseAbs().maxCoeff() > 1 + 1e-9) return x;
  return y;
}

}  // namespace

Mat hpoly_vertices(const Mat& normals, std::size_t max_rays) {
  const int d = static_cast<int>(normals.rows());
  if (d > kMaxDDDim) throw CapError("double description limited to dimension " + std::to_string(kMaxDDDim));
  Mat a = dedupe_pm(normals, 1e-12);
  const int m = static_cast<int>(a.cols());
  const int dim = d + 1;
  const int nrows = 2 * m;
  Mat rows(nrows, dim);
  for (int j = 0; j < m; ++j) {
    rows.row(2 * j) << -a.col(j).transpose(), 1.0;
    rows.row(2 * j + 1) << a.col(j).transpose(), 1.0;
  }
  for (int i = 0; i < nrows; ++i) rows.row(i).normalize();

  Eigen::ColPivHouseholderQR<Mat> qr(rows.transpose());
  qr.setThreshold(1e-10);
  if (qr.rank() < dim) throw NumericError("polytope is unbounded: normals do not span the space");
  std::vector<int> init(dim);
  std::vector<bool> used(nrows, false);
  for (int k = 0; k < dim; ++k) {
    init[k] = qr.colsPermutation().indices()(k);
    used[init[k]] = true;
  }
  Mat b(dim, dim);
  for (int k = 0; k < dim; ++k) b.row(k) = rows.row(init[k]);
  Mat binv = b.inverse();

  const double ztol = 1e-9;
  std::vector<Ray> rays;
  for (int k = 0; k < dim; ++k) {
    Ray r{binv.col(k).normalized(), Bits(nrows)};
    for (int q = 0; q < dim; ++q)
      if (q != k) r.zero.set(init[q]);
    rays.push_back(std::move(r));
  }

  std::vector<int> order;
  for (int i = 0; i < nrows; ++i)
    if (!used[i]) order.push_back(i);

  for (int h : order) {
    std::vector<double> val(rays.size());
    std::vector<int> pos, neg;
    std::vector<Ray> next;
    for (size_t i = 0; i < rays.size(); ++i) {
      val[i] = rows.row(h).dot(rays[i].z);
      if (val[i] > ztol)
        pos.push_back(i);
      else if (val[i] < -ztol)
        neg.push_back(i);
    }
    if (neg.empty()) {
      for (size_t i = 0; i < rays.size(); ++i)
        if (std::abs(val[i]) <= ztol) rays[i].zero.set(h);
      continue;
    }
    for (size_t i = 0; i < rays.size(); ++i)
      if (val[i] >= -ztol) {
        next.push_back(rays[i]);
        if (val[i] <= ztol) next.back().zero.set(h);
      }
    for (int p : pos)
      for (int n : neg) {
        Bits common = rays[p].zero & rays[n].zero;
        if (common.count() < dim - 2) continue;
        bool adjacent = true;
        for (size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (static_cast<int>(r) == p || static_cast<int>(r) == n) continue;
          if (common.subset_of(rays[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        Vec z = val[p] * rays[n].z - val[n] * rays[p].z;
        Ray nr{z.normalized(), common};
        nr.zero.set(h);
        next.push_back(std::move(nr));
        if (next.size() > max_rays) throw CapError("double description exceeded the ray cap");
      }
    rays = std::move(next);
  }

  Mat verts(d, rays.size());
  int c = 0;
  for (const Ray& r : rays) {
    double t = r.z(d);
    if (t <= 1e-12) throw NumericError("double description produced a ray at infinity");
    verts.col(c++) = polish_vertex(a, r.z.head(d) / t);
  }
  return dedupe_pm(verts.leftCols(c), 1e-9);
}

}  // namespace tensorial
