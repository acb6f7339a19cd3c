#include "tensorial/body.hpp"

#include "tensorial/oracles.hpp"
#include "tensorial/solvers.hpp"

#include <cmath>

namespace tensorial {

namespace {

Body tag_like(Body b, const Body& like) {
  if (like.shape()) return b.with_shape(*like.shape());
  return b;
}

Body tag_merge(Body b, const Body& p, const Body& q) {
  if (p.shape() && q.shape() && *p.shape() != *q.shape()) return b;
  if (p.shape()) return b.with_shape(*p.shape());
  if (q.shape()) return b.with_shape(*q.shape());
  return b;
}

void same_dim(const Body& p, const Body& q, const char* op) {
  if (p.dim() != q.dim()) throw InputError(std::string(op) + ": dimension mismatch (" + std::to_string(p.dim()) + " vs " + std::to_string(q.dim()) + ")");
}

Mat hcat(const Mat& a, const Mat& b) {
  Mat c(a.rows(), a.cols() + b.cols());
  c << a, b;
  return c;
}

}  // namespace

Body polar(const Body& p) {
  Body out;
  switch (p.kind()) {
    case Kind::VPoly: out = Body::hpoly(p.generators(), false); break;
    case Kind::HPoly: out = Body::vpoly(p.normals(), false); break;
    case Kind::Ellipsoid: out = Body::ellipsoid(spd_inverse(p.shape_matrix())); break;
    case Kind::Implicit:
      if (auto* po = oracle_as<PolarOracle>(p)) {
        out = po->inner();
      } else if (auto* so = oracle_as<SchattenOracle>(p)) {
        out = Body::implicit(std::make_shared<SchattenOracle>(so->p() == 1 ? INFINITY : 1.0, so->d1(), so->d2()));
      } else if (auto* io = oracle_as<ImageOracle>(p)) {
        out = Body::implicit(std::make_shared<ImageOracle>(io->inverse().transpose(), polar(io->inner())));
      } else {
        out = Body::implicit(std::make_shared<PolarOracle>(p.without_shape()));
      }
      break;
  }
  return tag_like(out.without_shape(), p);
}

Body linear_image(const Mat& t, const Body& p) {
  if (t.rows() != p.dim() || t.cols() != p.dim()) throw InputError("linear image: map has wrong size");
  Eigen::FullPivLU<Mat> lu(t);
  if (!lu.isInvertible()) throw InputError("linear image: singular map");
  Body out;
  switch (p.kind()) {
    case Kind::VPoly: out = Body::vpoly(t * p.generators(), false); break;
    case Kind::HPoly: out = Body::hpoly(lu.inverse().transpose() * p.normals(), false); break;
    case Kind::Ellipsoid: {
      Mat ti = lu.inverse();
      out = Body::ellipsoid(symmetrize(ti.transpose() * p.shape_matrix() * ti));
      break;
    }
    case Kind::Implicit:
      if (auto* io = oracle_as<ImageOracle>(p))
        out = Body::implicit(std::make_shared<ImageOracle>(t * io->map(), io->inner()));
      else
        out = Body::implicit(std::make_shared<ImageOracle>(t, p.without_shape()));
      break;
  }
  return tag_like(out, p);
}

Body linear_image(const FactorMap& t, const Body& p) {
  if (p.shape() && *p.shape() != t.source()) throw InputError("factor map shape " + t.source().str() + " does not match body shape " + p.shape()->str());
  if (t.source().total() != p.dim()) throw InputError("factor map dimension does not match body");
  return linear_image(t.matrix(), p).with_shape(t.target());
}

Body scale(const Body& p, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw InputError("scale factor must be positive");
  Body out;
  switch (p.kind()) {
    case Kind::VPoly: out = Body::vpoly(lambda * p.generators(), false); break;
    case Kind::HPoly: out = Body::hpoly(p.normals() / lambda, false); break;
    case Kind::Ellipsoid: out = Body::ellipsoid(p.shape_matrix() / (lambda * lambda)); break;
    case Kind::Implicit: return linear_image(lambda * Mat::Identity(p.dim(), p.dim()), p);
  }
  return tag_like(out, p);
}

static Body vsum(const Mat& g, const Mat& h) {
  Mat c(g.rows(), 2 * g.cols() * h.cols());
  int k = 0;
  for (int i = 0; i < g.cols(); ++i)
    for (int j = 0; j < h.cols(); ++j) {
      c.col(k++) = g.col(i) + h.col(j);
      c.col(k++) = g.col(i) - h.col(j);
    }
  return Body::vpoly(c);
}

// radius ratio r with q = r * p when the shape matrices are proportional
static std::optional<double> proportional(const Mat& mp, const Mat& mq) {
  double c = mq.norm() / mp.norm();
  if ((mq - c * mp).norm() <= 1e-13 * mq.norm()) return 1 / std::sqrt(c);
  return std::nullopt;
}

Body minkowski_sum(const std::vector<Body>& ps) {
  if (ps.empty()) throw InputError("Minkowski sum of nothing");
  std::vector<Body> flat;
  for (const Body& b : ps) {
    same_dim(b, ps[0], "minkowski_sum");
    if (auto* so = oracle_as<SumOracle>(b))
      for (const Body& t : so->terms()) flat.push_back(t);
    else
      flat.push_back(b);
  }
  std::optional<Mat> poly;
  std::vector<Body> ells, rest;
  for (const Body& b : flat) {
    if (b.is_polytope())
      poly = poly ? vsum(*poly, b.vertices()).generators() : b.vertices();
    else if (b.kind() == Kind::Ellipsoid) {
      bool merged = false;
      for (Body& e : ells)
        if (auto r = proportional(e.shape_matrix(), b.shape_matrix())) {
          e = Body::ellipsoid(e.shape_matrix() / ((1 + *r) * (1 + *r)));
          merged = true;
          break;
        }
      if (!merged) ells.push_back(b.without_shape());
    } else
      rest.push_back(b.without_shape());
  }
  std::vector<Body> terms;
  if (poly) terms.push_back(Body::vpoly(*poly));
  for (auto& e : ells) terms.push_back(e);
  for (auto& r : rest) terms.push_back(r);
  Body out = terms.size() == 1 ? terms[0] : Body::implicit(std::make_shared<SumOracle>(terms));
  std::optional<TensorShape> s;
  for (const Body& b : ps) {
    if (b.shape() && s && *s != *b.shape()) return out.without_shape();
    if (b.shape()) s = b.shape();
  }
  return s ? out.with_shape(*s) : out.without_shape();
}

Body minkowski_sum(const Body& p, const Body& q) { return minkowski_sum(std::vector<Body>{p, q}); }

Body conv_union(const Body& p, const Body& q) {
  same_dim(p, q, "conv_union");
  Body out;
  if (p.is_polytope() && q.is_polytope()) {
    out = Body::vpoly(hcat(p.vertices(), q.vertices()));
  } else if (p.kind() == Kind::Ellipsoid && q.kind() == Kind::Ellipsoid && nu(p, q) <= 1 + 1e-14) {
    out = q;
  } else if (p.kind() == Kind::Ellipsoid && q.kind() == Kind::Ellipsoid && nu(q, p) <= 1 + 1e-14) {
    out = p;
  } else {
    std::vector<Body> parts;
    for (const Body& b : {p, q}) {
      if (auto* uo = oracle_as<UnionOracle>(b))
        for (const Body& t : uo->parts()) parts.push_back(t);
      else
        parts.push_back(b.without_shape());
    }
    out = Body::implicit(std::make_shared<UnionOracle>(parts));
  }
  return tag_merge(out.without_shape(), p, q);
}

Body intersect(const Body& p, const Body& q) {
  same_dim(p, q, "intersect");
  Body out;
  if (p.is_polytope() && q.is_polytope())
    out = Body::hpoly(hcat(p.facets(), q.facets()));
  else
    out = polar(conv_union(polar(p), polar(q)));
  return tag_merge(out.without_shape(), p, q);
}

Body convert_rep(const Body& p, Rep target) {
  if (!p.is_polytope()) throw InputError("exact conversion needs a polytope; use a polytopal approximation for " + p.describe());
  Body out = target == Rep::V ? (p.kind() == Kind::VPoly ? p : Body::vpoly(p.vertices(), false))
                              : (p.kind() == Kind::HPoly ? p : Body::hpoly(p.facets(), false));
  return tag_like(out, p);
}

Approximation approximate_polytope(const Body& p, Rep side, int directions, std::uint64_t seed) {
  const int d = p.dim();
  if (directions < d) throw InputError("approximation needs at least dim directions");
  Mat pts(d, directions);
  Rng rng(seed);
  for (int k = 0; k < directions; ++k) {
    Vec u;
    if (d == 2) {
      double a = M_PI * k / directions;
      u = Vec(2);
      u << std::cos(a), std::sin(a);
    } else {
      u = random_unit(d, rng);
    }
    pts.col(k) = side == Rep::V ? support_at(p, u).point : gauge_at(p, u).point;
  }
  Body b = side == Rep::V ? Body::vpoly(pts) : Body::hpoly(pts);
  b = tag_like(b, p);
  return {b, hausdorff_sampled(b, p, 4 * directions, seed + 1)};
}

}  // namespace tensorial
