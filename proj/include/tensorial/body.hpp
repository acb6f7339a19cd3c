#pragma once

#include "tensorial/linalg.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace tensorial {

enum class Kind { VPoly, HPoly, Ellipsoid, Implicit };

/// A value together with the point realizing it.
/// For support_at(u): point lies in the body and <u, point> = value.
/// For gauge_at(x): point lies in the polar body and <x, point> = value.
struct Touch {
  double value = 0;
  Vec point;
};

class Body;

/// Bodies that are neither polytopes nor ellipsoids: nuclear/spectral balls,
/// their linear images, Minkowski sums, hulls, slices and polars of those.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual int dim() const = 0;
  virtual Touch support_at(const Vec& u) const = 0;
  virtual Touch gauge_at(const Vec& x) const = 0;
  virtual std::string name() const = 0;
};

/// 0-symmetric convex body. Immutable; copies share storage.
class Body {
 public:
  Body() = default;

  static Body vpoly(const Mat& gens, bool prune = true);
  static Body hpoly(const Mat& normals, bool prune = true);
  static Body ellipsoid(const Mat& shape);
  static Body implicit(std::shared_ptr<const Oracle> oracle);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_polytope() const { return kind_ == Kind::VPoly || kind_ == Kind::HPoly; }

  const Mat& generators() const;    // VPoly
  const Mat& normals() const;       // HPoly
  const Mat& shape_matrix() const;  // Ellipsoid
  const Oracle& oracle() const;     // Implicit
  std::shared_ptr<const Oracle> oracle_ptr() const { return oracle_; }

  /// Vertices of a polytope (one per +- pair); converts H to V on first use.
  const Mat& vertices() const;
  /// Facet normals of a polytope; converts V to H on first use.
  const Mat& facets() const;

  const std::optional<TensorShape>& shape() const { return shape_; }
  Body with_shape(const TensorShape& s) const;
  Body without_shape() const;
  const TensorShape& require_shape() const;

  std::string describe() const;

  /// Checks that a filled cache describes the same set (polytopes only).
  double cache_discrepancy() const;

 private:
  struct Cache {
    std::mutex mu;
    std::optional<Mat> verts, facets;
  };
  Kind kind_ = Kind::VPoly;
  int dim_ = 0;
  std::shared_ptr<const Mat> data_;
  std::shared_ptr<const Oracle> oracle_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
  std::optional<TensorShape> shape_;
};

// ---- oracles -------------------------------------------------------------

Touch gauge_at(const Body& p, const Vec& x);
Touch support_at(const Body& p, const Vec& u);
double gauge(const Body& p, const Vec& x);
double support(const Body& p, const Vec& u);

/// Column generation: gauge from a support oracle, with a certified lower bound.
Touch gauge_from_support(const std::function<Touch(const Vec&)>& support_fn, int dim, const Vec& x);
/// The dual construction: support from a gauge oracle.
Touch support_from_gauge(const std::function<Touch(const Vec&)>& gauge_fn, int dim, const Vec& u);

// ---- standard bodies -----------------------------------------------------

Body lp_ball(double p, int d, double radius = 1.0);  // p in {1, 2, inf}
Body cube_vpoly(int d, double radius = 1.0);
Body euclidean_ball(int d, double radius = 1.0);
/// Unit ball of the Schatten p-norm (p = 1 or inf) on d1 x d2 matrices, row-major.
Body schatten_ball(double p, int d1, int d2);
Body random_polytope(int d, int gens, Rng& rng);

// ---- calculus ------------------------------------------------------------

Body polar(const Body& p);
Body scale(const Body& p, double lambda);
Body linear_image(const Mat& t, const Body& p);
Body linear_image(const FactorMap& t, const Body& p);
Body minkowski_sum(const Body& p, const Body& q);
Body minkowski_sum(const std::vector<Body>& ps);
Body conv_union(const Body& p, const Body& q);
Body intersect(const Body& p, const Body& q);

enum class Rep { V, H };
/// Exact conversion between polytope representations.
Body convert_rep(const Body& p, Rep target);

struct Approximation {
  Body body;
  double error = 0;  // sampled sup |h_P - h_approx|
};
/// Inner (conv of support points) or outer (tangent slabs) polytope for any body.
Approximation approximate_polytope(const Body& p, Rep side, int directions, std::uint64_t seed = 7);

// ---- distances -----------------------------------------------------------

/// nu(P,Q) = sup_{z in P} g_Q(z). Exact when P or Q is a polytope or both are
/// ellipsoids; otherwise a multistart ascent gives a lower bound.
double nu(const Body& p, const Body& q);
/// nu together with a point z of P where g_Q(z) = nu.
Touch nu_witness(const Body& p, const Body& q);

struct Hausdorff {
  double value = 0;
  double error = 0;  // 0 when exact
  bool exact = false;
};
Hausdorff hausdorff(const Body& p, const Body& q);
double hausdorff_value(const Body& p, const Body& q);
/// max over sampled unit directions of |h_P - h_Q|, a lower bound.
double hausdorff_sampled(const Body& p, const Body& q, int directions, std::uint64_t seed);

/// Radius of the smallest centered ball containing P.
double circumradius(const Body& p);

}  // namespace tensorial
