// Revised simplex for min ||w||_1 s.t. G w = x over signed columns.
// Every basis of linearly independent generators is feasible after choosing
// column signs, so no phase one is needed.

#include "tensorial/solvers.hpp"

#include <cmath>

namespace tensorial {

GaugeLP lp_gauge(const Mat& g, const Vec& x) {
  const int d = static_cast<int>(g.rows());
  const int m = static_cast<int>(g.cols());
  if (x.size() != d) throw InputError("gauge: point has wrong dimension");
  GaugeLP out;
  out.weights = Vec::Zero(m);
  out.dual = Vec::Zero(d);
  if (x.norm() == 0) return out;

  Eigen::ColPivHouseholderQR<Mat> qr(g);
  qr.setThreshold(1e-10);
  if (qr.rank() < d) throw NumericError("gauge: generators do not span the space");
  std::vector<int> basis(d);
  for (int k = 0; k < d; ++k) basis[k] = qr.colsPermutation().indices()(k);
  Vec sign = Vec::Ones(d);

  const double scale = g.colwise().norm().maxCoeff();
  const double opt_tol = 1e-12;
  int degenerate = 0;
  const int cap = 50 * (m + d) + 200;
  Mat b(d, d);
  Vec lambda;
  // near-degenerate curved generator sets can make pivoting stall at rounding
  // level; any y scaled to be dual feasible bounds the value from below
  double best_lb = 0;
  Vec best_dual = Vec::Zero(d);
  double best_ub = INFINITY;
  Vec best_w;
  auto finish = [&](double value, const Vec& w, const Vec& dual, int it) {
    out.value = value;
    out.weights = w;
    out.dual = dual;
    out.pivots = it;
    return out;
  };
  for (int it = 0;; ++it) {
    if (it > cap) {
      if (best_ub - best_lb <= 1e-9 * best_ub) return finish(best_ub, best_w, best_dual, it);
      throw NumericError("gauge LP: iteration cap exceeded");
    }
    for (int k = 0; k < d; ++k) b.col(k) = sign(k) * g.col(basis[k]);
    Eigen::PartialPivLU<Mat> lu(b);
    lambda = lu.solve(x);
    if (it == 0) {
      for (int k = 0; k < d; ++k)
        if (lambda(k) < 0) {
          sign(k) = -1;
          lambda(k) = -lambda(k);
        }
      for (int k = 0; k < d; ++k) b.col(k) = sign(k) * g.col(basis[k]);
      lu.compute(b);
    }
    // rounding-level basic values are zeros; Bland's tie-breaking needs them exact
    const double ltol = 1e-13 * lambda.cwiseAbs().sum();
    for (int k = 0; k < d; ++k)
      if (lambda(k) < ltol) lambda(k) = 0;
    Vec y = lu.transpose().solve(Vec::Ones(d));
    Vec r = g.transpose() * y;

    int enter = -1;
    double best = 1 + opt_tol;
    bool bland = degenerate > 30 || it > cap / 2;
    for (int j = 0; j < m; ++j) {
      double a = std::abs(r(j));
      if (a > best) {
        enter = j;
        best = a;
        if (bland) break;
      }
    }
    const double rmax = std::max(1.0, r.cwiseAbs().maxCoeff());
    if (y.dot(x) / rmax > best_lb) {
      best_lb = y.dot(x) / rmax;
      best_dual = y / rmax;
    }
    if (enter >= 0 && (b * lambda - x).norm() <= 1e-9 * x.norm() && lambda.sum() < best_ub) {
      best_ub = lambda.sum();
      best_w = Vec::Zero(m);
      for (int k = 0; k < d; ++k) best_w(basis[k]) += sign(k) * lambda(k);
      if (best_ub - best_lb <= 1e-11 * best_ub) return finish(best_ub, best_w, best_dual, it);
    }
    if (enter < 0) {
      out.value = lambda.sum();
      // an ill-conditioned final basis spoils lambda before it spoils y
      if ((b * lambda - x).norm() > 1e-9 * x.norm()) out.value = y.dot(x);
      out.dual = y;
      for (int k = 0; k < d; ++k) out.weights(basis[k]) += sign(k) * lambda(k);
      out.pivots = it;
      return out;
    }
    double s_enter = r(enter) > 0 ? 1.0 : -1.0;
    Vec dir = lu.solve(s_enter * g.col(enter));
    int leave = -1;
    double t = 0;
    // relative threshold keeps the basis away from singular; among tied
    // ratios take the larger pivot unless Bland's rule is on
    const double piv_tol = 1e-9 * dir.cwiseAbs().maxCoeff();
    for (int k = 0; k < d; ++k) {
      if (dir(k) > piv_tol) {
        double ratio = lambda(k) / dir(k);
        const double tie = 1e-12 * std::max(1.0, t);
        bool better = leave < 0 || ratio < t - tie;
        if (!better && std::abs(ratio - t) <= tie)
          better = bland ? basis[k] < basis[leave] : dir(k) > dir(leave);
        if (better) {
          t = leave < 0 ? ratio : std::min(t, ratio);
          leave = k;
        }
      }
    }
    if (leave < 0) throw NumericError("gauge LP: unbounded ray (generators ill-conditioned)");
    degenerate = (t * scale < 1e-14) ? degenerate + 1 : 0;
    basis[leave] = enter;
    sign(leave) = s_enter;
  }
}

}  // namespace tensorial
