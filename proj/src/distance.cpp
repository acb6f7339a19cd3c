#include "tensorial/body.hpp"

#include "tensorial/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace tensorial {

namespace {

// Convex maximization of g_Q over P by repeated linearization; each step is a
// support query on P, and g_Q never decreases.
Touch nu_ascent(const Body& p, const Body& q) {
  const int d = p.dim();
  std::vector<Vec> starts;
  for (int i = 0; i < d; ++i) starts.push_back(Vec::Unit(d, i));
  Rng rng(2024);
  for (int k = 0; k < 16 + 4 * d; ++k) starts.push_back(random_unit(d, rng));
  Touch best{-1, Vec()};
  for (const Vec& u : starts) {
    Vec z = support_at(p, u).point;
    Touch g = gauge_at(q, z);
    for (int it = 0; it < 500; ++it) {
      Vec z2 = support_at(p, g.point).point;
      Touch g2 = gauge_at(q, z2);
      if (g2.value <= g.value * (1 + 1e-15)) break;
      z = z2;
      g = g2;
    }
    if (g.value > best.value) best = {g.value, z};
  }
  return best;
}

Touch max_gauge_over(const Mat& pts, const Body& q) {
  Touch best{-1, Vec()};
  for (int j = 0; j < pts.cols(); ++j) {
    double g = gauge(q, pts.col(j));
    if (g > best.value) best = {g, pts.col(j)};
  }
  return best;
}

// z in P attaining h_P(a) on the worst facet a of Q has g_Q(z) = nu
Touch max_support_over(const Mat& dirs, const Body& p) {
  Touch best{-1, Vec()};
  for (int j = 0; j < dirs.cols(); ++j) {
    Touch t = support_at(p, dirs.col(j));
    if (t.value > best.value) best = t;
  }
  return best;
}

bool dd_ok(const Body& b) { return b.kind() == Kind::VPoly ? b.dim() <= kMaxDDDim : true; }

}  // namespace

Touch nu_witness(const Body& p, const Body& q) {
  if (p.dim() != q.dim()) throw InputError("nu: dimension mismatch");
  if (p.kind() == Kind::VPoly) return max_gauge_over(p.generators(), q);
  if (q.kind() == Kind::HPoly) return max_support_over(q.normals(), p);
  if (p.kind() == Kind::HPoly && p.dim() <= kMaxDDDim) return max_gauge_over(p.vertices(), q);
  if (q.kind() == Kind::VPoly && dd_ok(q)) return max_support_over(q.facets(), p);
  if (p.kind() == Kind::Ellipsoid && q.kind() == Kind::Ellipsoid) {
    Mat s = spd_inv_sqrt(p.shape_matrix());
    SymEigen e = jacobi_eigen(s * q.shape_matrix() * s);
    int top = static_cast<int>(e.values.size()) - 1;
    return {std::sqrt(std::max(0.0, e.values(top))), s * e.vectors.col(top)};
  }
  return nu_ascent(p, q);
}

double nu(const Body& p, const Body& q) { return nu_witness(p, q).value; }

double hausdorff_sampled(const Body& p, const Body& q, int directions, std::uint64_t seed) {
  if (p.dim() != q.dim()) throw InputError("hausdorff: dimension mismatch");
  Rng rng(seed);
  double best = 0;
  for (int k = 0; k < directions; ++k) {
    Vec u = random_unit(p.dim(), rng);
    best = std::max(best, std::abs(support(p, u) - support(q, u)));
  }
  return best;
}

Hausdorff hausdorff(const Body& p, const Body& q) {
  if (p.dim() != q.dim()) throw InputError("hausdorff: dimension mismatch");
  if (p.is_polytope() && q.is_polytope()) {
    const Mat& vp = p.vertices();
    const Mat& vq = q.vertices();
    double d = 0;
    for (int j = 0; j < vp.cols(); ++j) d = std::max(d, dist_to_symmetric_hull(vq, vp.col(j)));
    for (int j = 0; j < vq.cols(); ++j) d = std::max(d, dist_to_symmetric_hull(vp, vq.col(j)));
    return {d, 0, true};
  }
  // sup over the sphere of |h_P - h_Q|: sample, then polish the best candidates
  const int d = p.dim();
  const int n = 300 * d;
  Rng rng(777);
  std::vector<std::pair<double, Vec>> cand;
  auto diff = [&](const Vec& u) {
    double nrm = u.norm();
    if (nrm == 0) return 0.0;
    Vec v = u / nrm;
    return std::abs(support(p, v) - support(q, v));
  };
  for (int i = 0; i < d; ++i) cand.push_back({diff(Vec::Unit(d, i)), Vec::Unit(d, i)});
  for (int k = 0; k < n; ++k) {
    Vec u = random_unit(d, rng);
    cand.push_back({diff(u), u});
  }
  std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double sampled = cand[0].first, best = sampled;
  for (int k = 0; k < std::min<int>(4, cand.size()); ++k) {
    if (cand[k].first == 0) break;
    NMOptions opt;
    opt.step = 0.05;
    opt.max_evals = 300 * d;
    NMResult r = nelder_mead([&](const Vec& u) { return -diff(u); }, cand[k].second, opt);
    best = std::max(best, -r.f);
  }
  return {best, best - sampled, false};
}

double hausdorff_value(const Body& p, const Body& q) { return hausdorff(p, q).value; }

double circumradius(const Body& p) {
  switch (p.kind()) {
    case Kind::VPoly:
    case Kind::HPoly: return p.vertices().colwise().norm().maxCoeff();
    case Kind::Ellipsoid: return 1 / std::sqrt(jacobi_eigen(p.shape_matrix()).values(0));
    case Kind::Implicit: return nu(p, euclidean_ball(p.dim()));
  }
  return 0;
}

}  // namespace tensorial
