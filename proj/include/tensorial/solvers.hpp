#pragma once

// Small dense numerical kernels: the gauge LP, Wolfe's minimum-norm point,
// double description and Nelder-Mead.

#include "tensorial/linalg.hpp"

#include <cstddef>
#include <functional>

namespace tensorial {

/// min ||w||_1 subject to G w = x, i.e. the gauge of conv(+-columns of G) at x.
/// `dual` is an optimal y of max <x,y> s.t. |G^T y| <= 1.
struct GaugeLP {
  double value = 0;
  Vec dual;
  Vec weights;  // signed, one per column of G
  int pivots = 0;
};
GaugeLP lp_gauge(const Mat& gens, const Vec& x);

/// Point of minimum Euclidean norm in conv(columns of pts) (Wolfe 1976).
Vec min_norm_point(const Mat& pts, double tol = 1e-13);

/// Distance from v to conv(+-columns of gens), and the nearest point.
double dist_to_symmetric_hull(const Mat& gens, const Vec& v, Vec* nearest = nullptr);

inline constexpr std::size_t kMaxRays = 100000;
inline constexpr int kMaxDDDim = 10;

/// Vertices of {x : |A^T x| <= 1} by double description, one column per +- pair.
Mat hpoly_vertices(const Mat& normals, std::size_t max_rays = kMaxRays);

/// Drop columns that are (up to sign) duplicates of an earlier one.
Mat dedupe_pm(const Mat& cols, double tol = 1e-10);

/// Keep only columns g whose gauge w.r.t. conv(+-others) exceeds 1 + tol.
Mat prune_symmetric(const Mat& cols, double tol = 1e-9);

struct NMResult {
  Vec x;
  double f = 0;
  int evals = 0;
  bool converged = false;
};
struct NMOptions {
  double step = 0.1;
  int max_evals = 4000;
  double ftol = 1e-12;
  double xtol = 1e-10;
};
NMResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const NMOptions& opt = {});

}  // namespace tensorial
