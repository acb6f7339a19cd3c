#include "tensorial/calculus.hpp"

#include "tensorial/lowner.hpp"
#include "tensorial/oracles.hpp"
#include "tensorial/products.hpp"
#include "tensorial/solvers.hpp"

#include <cmath>
#include <sstream>

namespace tensorial {

namespace {

constexpr double kSliceTol = 1e-4;  // delta^H to B_2 accepted as "in the slice"

Mat drop_zero_cols(const Mat& a) {
  std::vector<int> keep;
  for (int j = 0; j < a.cols(); ++j)
    if (a.col(j).norm() > 1e-14) keep.push_back(j);
  Mat out(a.rows(), keep.size());
  for (size_t i = 0; i < keep.size(); ++i) out.col(i) = a.col(keep[i]);
  return out;
}

// Outer polytope refined at its own vertices until every vertex lies in the slice.
Body polytope_slice_cutting(const Body& p, const Mat& e, double s) {
  const int k = static_cast<int>(e.cols());
  auto g = [&](const Vec& x) { return gauge_at(p, e * x); };
  Mat normals(k, 0);
  auto add = [&](const Vec& a) {
    normals.conservativeResize(Eigen::NoChange, normals.cols() + 1);
    normals.col(normals.cols() - 1) = a;
  };
  for (int i = 0; i < k; ++i) add(e.transpose() * g(Vec::Unit(k, i)).point / s);
  for (int round = 0; round < 2000; ++round) {
    Body outer = Body::hpoly(normals, false);
    const Mat& v = outer.vertices();
    int added = 0;
    for (int j = 0; j < v.cols(); ++j) {
      Touch t = g(v.col(j));
      if (t.value > s * (1 + 1e-11)) {
        add(e.transpose() * t.point / s);
        ++added;
      }
    }
    if (!added) return Body::hpoly(normals);
  }
  throw NumericError("slice of polytope did not stabilize");
}

std::optional<Body> fit_ellipsoid(const Body& p, const Mat& e, double s) {
  const int k = static_cast<int>(e.cols());
  auto g = [&](const Vec& x) { return gauge(p, e * x) / s; };
  Mat q(k, k);
  for (int i = 0; i < k; ++i) q(i, i) = std::pow(g(Vec::Unit(k, i)), 2);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      double gij = g(Vec::Unit(k, i) + Vec::Unit(k, j));
      q(i, j) = q(j, i) = (gij * gij - q(i, i) - q(j, j)) / 2;
    }
  if (!is_spd(q)) return std::nullopt;
  Rng rng(91);
  for (int t = 0; t < 2 * k + 4; ++t) {
    Vec x = random_unit(k, rng);
    double want = g(x), have = std::sqrt(x.dot(q * x));
    if (std::abs(want - have) > 1e-9 * want) return std::nullopt;
  }
  return Body::ellipsoid(q);
}

Body slice_body(const Body& p, const Mat& e, double s) {
  switch (p.kind()) {
    case Kind::HPoly: return Body::hpoly(drop_zero_cols(e.transpose() * p.normals() / s));
    case Kind::VPoly:
      if (p.dim() <= kMaxDDDim) return Body::hpoly(drop_zero_cols(e.transpose() * p.facets() / s));
      return polytope_slice_cutting(p, e, s);
    case Kind::Ellipsoid: return Body::ellipsoid(symmetrize(e.transpose() * p.shape_matrix() * e) / (s * s));
    case Kind::Implicit:
      if (auto f = fit_ellipsoid(p, e, s)) return *f;
      return Body::implicit(std::make_shared<SliceOracle>(p.without_shape(), e, s));
  }
  return p;
}

bool exact_kind(const Body& b) { return b.is_polytope() || b.kind() == Kind::Ellipsoid; }

int approx_directions(int d) { return d == 2 ? 32 : 24 * d; }

std::vector<Vec> probe_directions(int d) {
  const int n = approx_directions(d);
  std::vector<Vec> dirs;
  Rng rng(31);
  for (int k = 0; k < n; ++k) {
    if (d == 2) {
      Vec u(2);
      u << std::cos(M_PI * k / n), std::sin(M_PI * k / n);
      dirs.push_back(u);
    } else {
      dirs.push_back(random_unit(d, rng));
    }
  }
  return dirs;
}

// Gauge-only polytopes around a body: radial boundary points inside,
// tangent half-spaces outside. Support queries on slices are much dearer.
std::pair<Body, Body> gauge_sandwich(const Body& f) {
  std::vector<Vec> dirs = probe_directions(f.dim());
  Mat in(f.dim(), dirs.size()), out(f.dim(), dirs.size());
  for (size_t k = 0; k < dirs.size(); ++k) {
    Touch t = gauge_at(f, dirs[k]);
    in.col(k) = dirs[k] / t.value;
    out.col(k) = t.point;
  }
  return {Body::vpoly(in), Body::hpoly(out)};
}

Body combo(double a, const Body& p, double b, const Body& q) {
  if (b <= 0) return a == 1 ? p : scale(p, a);
  if (a <= 0) return b == 1 ? q : scale(q, b);
  return minkowski_sum(scale(p, a), scale(q, b));
}

void check_t(double t) {
  if (!(t >= 0 && t <= 1)) throw InputError("t must lie in [0, 1]");
}

Certificate require_tensorial(const Body& p, const char* op) {
  Certificate c = certify_tensorial(p);
  if (!c.accepted) {
    std::ostringstream os;
    os << op << ": body is not tensorial (lower violation " << c.lower_violation << ", upper violation " << c.upper_violation
       << ", factorization error " << c.factorization_error << ")";
    throw PreconditionError(os.str());
  }
  return c;
}

void require_slice(const Body& p, const char* op) {
  Body ell = ell_tensor(p, false);
  double dist = hausdorff_value(ell, euclidean_ball(p.dim()));
  if (dist > kSliceTol) {
    std::ostringstream os;
    os << op << ": body is not in the slice (delta^H(ell_tensor, B_2) = " << dist << ")";
    throw PreconditionError(os.str());
  }
}

Body snap_lowner_position(const Body& f) {
  if (f.kind() == Kind::Ellipsoid) return euclidean_ball(f.dim());
  return normalize_lowner(f).body.without_shape();
}

}  // namespace

Extraction extract(const Body& p) {
  const TensorShape& s = p.require_shape();
  const int l = s.order();
  std::vector<Vec> e1;
  for (int i = 0; i < l; ++i) e1.push_back(Vec::Unit(s.dim(i), 0));
  Extraction ex;
  ex.scale = gauge(p, kron_vec(e1));
  if (!(ex.scale > 0) || !std::isfinite(ex.scale)) throw NumericError("extract: degenerate gauge at e_1 (x) ... (x) e_1");
  for (int i = 0; i < l; ++i) ex.factors.push_back(slice_body(p, slot_embedding(s, i), i + 1 < l ? ex.scale : 1.0));
  return ex;
}

std::vector<Body> extract_factors(const Body& p) { return extract(p).factors; }

Certificate certify_tensorial(const Body& p, int probes, std::uint64_t seed) {
  const TensorShape& shape = p.require_shape();
  Extraction ex = extract(p);
  Certificate c;
  c.factors = ex.factors;
  c.scale = ex.scale;
  c.probe_count = probes;

  // Smooth non-ellipsoidal factors: inner polytopes under-estimate the lower
  // violation and outer ones the upper violation.
  std::vector<Body> inner, outer;
  for (const Body& f : ex.factors) {
    if (exact_kind(f)) {
      inner.push_back(f);
      outer.push_back(f);
    } else {
      c.exact = false;
      auto [in, out] = gauge_sandwich(f);
      inner.push_back(in);
      outer.push_back(out);
    }
  }
  Body pi = projective_product(inner);
  Body ep = injective_product(outer);
  c.lower_violation = std::max(0.0, nu(pi, p) - 1);
  c.upper_violation = std::max(0.0, nu(p, ep) - 1);

  Rng rng(seed);
  for (int k = 0; k < probes; ++k) {
    std::vector<Vec> xs;
    double prod = 1;
    for (int i = 0; i < shape.order(); ++i) {
      xs.push_back(random_unit(shape.dim(i), rng));
      prod *= gauge(ex.factors[i], xs.back());
    }
    double g = gauge(p, kron_vec(xs));
    c.factorization_error = std::max(c.factorization_error, std::abs(g - prod) / prod);
  }
  c.accepted = c.lower_violation <= kCertifyTol && c.upper_violation <= kCertifyTol && c.factorization_error <= kCertifyTol;
  return c;
}

Body conv_tensor(const Body& p, bool check) {
  std::vector<Body> f = check ? require_tensorial(p, "conv_tensor").factors : extract_factors(p);
  return projective_product(f).with_shape(p.require_shape());
}

Body ell_tensor(const Body& p, bool check) {
  std::vector<Body> f = check ? require_tensorial(p, "ell_tensor").factors : extract_factors(p);
  // Loewner of a pi-product is the Hilbertian product of the factor Loewner
  // ellipsoids (John's contact condition tensorizes); this keeps xi exactly
  // in GL_(x).
  std::vector<Body> ells;
  for (const Body& b : f) ells.push_back(lowner(b));
  return hilbert_product(ells).with_shape(p.require_shape());
}

Body eta_retract(const Body& p) {
  const TensorShape& s = p.require_shape();
  std::vector<Body> f = extract_factors(p);
  Body pi = projective_product(f);
  Body ep = injective_product(f);
  return intersect(conv_union(p, pi), ep).with_shape(s);
}

SliceNormalized slice_normalize(const Body& p) {
  const TensorShape& s = p.require_shape();
  std::vector<Body> f = require_tensorial(p, "slice_normalize").factors;
  std::vector<Mat> a;
  for (const Body& b : f) a.push_back(xi(lowner(b)));
  FactorMap map(a, FactorMap::identity(s).perm(), s);
  return {linear_image(map.inverse(), p), map};
}

std::vector<Body> lowner_position_factors(const Body& p) {
  std::vector<Body> out;
  for (const Body& f : require_tensorial(p, "lowner_position_factors").factors) out.push_back(snap_lowner_position(f));
  return out;
}

Body canonical_scale(const Body& q) {
  return scale(q, gauge(q, Vec::Unit(q.dim(), 0)));
}

Body shared_factor_sum(const Body& p, const Body& r, int slot, double lambda) {
  if (!(lambda > 0)) throw InputError("shared_factor_sum: lambda must be positive");
  const TensorShape& s = p.require_shape();
  if (r.require_shape() != s) throw InputError("shared_factor_sum: shapes differ (" + s.str() + " vs " + r.require_shape().str() + ")");
  if (slot < 0 || slot >= s.order()) throw InputError("shared_factor_sum: slot out of range");
  Certificate cp = require_tensorial(p, "shared_factor_sum (P)");
  Certificate cr = require_tensorial(r, "shared_factor_sum (R)");
  std::vector<int> differ;
  std::ostringstream detail;
  for (int i = 0; i < s.order(); ++i) {
    double dist = hausdorff_value(canonical_scale(cp.factors[i]), canonical_scale(cr.factors[i]));
    if (dist > 1e-6) {
      differ.push_back(i);
      detail << " slot " << i + 1 << ": delta^H = " << dist << ";";
    }
  }
  int bad = 0;
  for (int i : differ) bad += i != slot;
  if (bad) {
    throw PreconditionError("shared_factor_sum: factors differ in " + std::to_string(differ.size()) + " slot(s) (" + detail.str() +
                            " allowed slot " + std::to_string(slot + 1) + ")");
  }
  return minkowski_sum(p, scale(r, lambda)).with_shape(s);
}

Homotopy parse_homotopy(const std::string& k) {
  if (k == "W" || k == "w") return Homotopy::W;
  if (k == "F" || k == "f") return Homotopy::F;
  if (k == "G" || k == "g") return Homotopy::G;
  throw InputError("unknown homotopy '" + k + "' (expected W, F or G)");
}

namespace {

Body homotopy_w(const Body& p, double t) {
  Body c = conv_tensor(p, false);
  return combo(1 - t, p, t, c).with_shape(p.require_shape());
}

Body homotopy_f(const std::vector<Body>& f, const TensorShape& s, double t) {
  std::vector<Body> terms;
  for (const Body& fi : f) terms.push_back(combo(1 - t, fi, t, euclidean_ball(fi.dim())));
  return projective_product(terms).with_shape(s);
}

}  // namespace

Body homotopy_eval(Homotopy kind, const Body& p, double t) {
  check_t(t);
  const TensorShape& s = p.require_shape();
  Certificate c = require_tensorial(p, "homotopy");
  switch (kind) {
    case Homotopy::W: return homotopy_w(p, t);
    case Homotopy::F: {
      Body pi = projective_product(c.factors);
      double dist = hausdorff_value(pi, p);
      if (dist > 1e-6 * std::max(1.0, circumradius(p)))
        throw PreconditionError("homotopy F: body is not a projective product (delta^H to conv_tensor = " + std::to_string(dist) + ")");
      require_slice(p, "homotopy F");
      std::vector<Body> f;
      for (const Body& b : c.factors) f.push_back(snap_lowner_position(b));
      return homotopy_f(f, s, t);
    }
    case Homotopy::G: {
      require_slice(p, "homotopy G");
      if (t <= 0.5) return homotopy_w(p, 2 * t);
      std::vector<Body> f;
      for (const Body& b : c.factors) f.push_back(snap_lowner_position(b));
      return homotopy_f(f, s, 2 * t - 1);
    }
  }
  return p;
}

Body polygonal_path(const Body& p, const Body& r, double t) {
  check_t(t);
  const TensorShape& s = p.require_shape();
  if (s.order() != 2) throw InputError("polygonal_path: needs a 2-factor shape");
  if (r.require_shape() != s) throw InputError("polygonal_path: shapes differ");
  Certificate cp = require_tensorial(p, "polygonal_path (P)");
  Certificate cr = require_tensorial(r, "polygonal_path (R)");
  Body k = projective_product({cp.factors[0], cr.factors[1]});
  if (t <= 0.5) return combo(1 - 2 * t, p, 2 * t, k).with_shape(s);
  return combo(2 - 2 * t, k, 2 * t - 1, r).with_shape(s);
}

Body lift_eval(const Body& p, const std::vector<FactorFn>& maps) {
  const TensorShape& s = p.require_shape();
  if (static_cast<int>(maps.size()) != s.order()) throw InputError("lift_eval: need one map per factor");
  std::vector<Body> bars = lowner_position_factors(p);
  require_slice(p, "lift_eval");
  std::vector<Body> mapped;
  for (size_t i = 0; i < bars.size(); ++i) {
    Body m = maps[i](bars[i]).without_shape();
    if (m.dim() != bars[i].dim()) throw InputError("lift_eval: factor map changed the dimension");
    double dist = hausdorff_value(lowner(m), euclidean_ball(m.dim()));
    if (dist > kSliceTol)
      throw PreconditionError("lift_eval: image of factor " + std::to_string(i + 1) + " is not in Loewner position (delta^H = " +
                              std::to_string(dist) + ")");
    mapped.push_back(m);
  }
  return intersect(conv_union(p, projective_product(mapped)), injective_product(mapped)).with_shape(s);
}

}  // namespace tensorial
