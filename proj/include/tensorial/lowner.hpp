#pragma once

#include "tensorial/body.hpp"

#include <utility>

namespace tensorial {

struct MveeResult {
  Mat shape;          // E = {x : x^T shape x <= 1}
  Vec weights;        // optimal design on the input columns
  double gap = 0;     // max_i w_i^T X^{-1} w_i / d - 1 at termination
  int iterations = 0;
};

inline constexpr double kLownerEps = 1e-7;
inline constexpr int kLownerMaxIter = 100000;

/// Minimum-volume centered ellipsoid containing +-columns of pts
/// (Khachiyan ascent with Todd-Yildirim away steps).
MveeResult mvee_symmetric(const Mat& pts, double eps = kLownerEps, int max_iter = kLownerMaxIter);

/// Loewner ellipsoid of a symmetric body. Ellipsoids are returned unchanged.
Body lowner(const Body& p);

/// Columns of pts touching the boundary of E (gauge >= 1 - tol).
Mat contact_points(const Mat& pts, const Body& e, double tol = 1e-4);

/// The SPD matrix A with A(B_2) = E, i.e. shape^{-1/2}.
Mat xi(const Body& e);

struct Normalized {
  Body body;  // A^{-1} P
  Mat a;      // xi(lowner(P))
};
Normalized normalize_lowner(const Body& p);

}  // namespace tensorial
