#include "tensorial/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace tensorial {

Vec min_norm_point(const Mat& p, double tol) {
  const int n = static_cast<int>(p.cols());
  if (n == 0) throw InputError("min_norm_point: empty point set");
  Vec sq = p.colwise().squaredNorm();
  double maxsq = sq.maxCoeff();
  int j0;
  sq.minCoeff(&j0);
  std::vector<int> s{j0};
  Vec lam = Vec::Ones(1);
  Vec x = p.col(j0);

  for (int major = 0; major < 10 * n + 100; ++major) {
    Vec dots = p.transpose() * x;
    int j;
    dots.minCoeff(&j);
    if (x.squaredNorm() - dots(j) <= tol * maxsq) return x;
    if (std::find(s.begin(), s.end(), j) != s.end()) return x;
    s.push_back(j);
    lam.conservativeResize(s.size());
    lam(s.size() - 1) = 0;

    for (int minor = 0; minor < 2 * n + 10; ++minor) {
      const int k = static_cast<int>(s.size());
      Mat ps(p.rows(), k);
      for (int i = 0; i < k; ++i) ps.col(i) = p.col(s[i]);
      // affine minimizer: [P^T P  1; 1^T 0] [a; mu] = [0; 1]
      Mat kkt = Mat::Zero(k + 1, k + 1);
      kkt.topLeftCorner(k, k) = ps.transpose() * ps;
      kkt.block(0, k, k, 1).setOnes();
      kkt.block(k, 0, 1, k).setOnes();
      Vec rhs = Vec::Zero(k + 1);
      rhs(k) = 1;
      Vec sol = kkt.fullPivLu().solve(rhs);
      Vec alpha = sol.head(k);
      if (alpha.minCoeff() > 1e-14) {
        lam = alpha;
        x = ps * lam;
        break;
      }
      double theta = 1;
      for (int i = 0; i < k; ++i)
        if (alpha(i) <= 1e-14) theta = std::min(theta, lam(i) / (lam(i) - alpha(i)));
      lam = lam + theta * (alpha - lam);
      std::vector<int> s2;
      std::vector<double> l2;
      for (int i = 0; i < k; ++i)
        if (lam(i) > 1e-15) {
          s2.push_back(s[i]);
          l2.push_back(lam(i));
        }
      if (s2.empty()) {
        s2.push_back(s[0]);
        l2.push_back(1);
      }
      s = s2;
      lam = Eigen::Map<Vec>(l2.data(), l2.size());
      lam /= lam.sum();
      Mat ps2(p.rows(), s.size());
      for (size_t i = 0; i < s.size(); ++i) ps2.col(i) = p.col(s[i]);
      x = ps2 * lam;
    }
  }
  return x;
}

double dist_to_symmetric_hull(const Mat& gens, const Vec& v, Vec* nearest) {
  const int m = static_cast<int>(gens.cols());
  Mat pts(gens.rows(), 2 * m);
  for (int j = 0; j < m; ++j) {
    pts.col(2 * j) = gens.col(j) - v;
    pts.col(2 * j + 1) = -gens.col(j) - v;
  }
  Vec x = min_norm_point(pts);
  if (nearest) *nearest = v + x;
  return x.norm();
}

Mat dedupe_pm(const Mat& cols, double tol) {
  std::vector<int> keep;
  for (int j = 0; j < cols.cols(); ++j) {
    double nj = cols.col(j).norm();
    if (nj <= tol) continue;
    bool dup = false;
    for (int k : keep) {
      double sc = tol * std::max(1.0, nj);
      if ((cols.col(j) - cols.col(k)).norm() <= sc || (cols.col(j) + cols.col(k)).norm() <= sc) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(j);
  }
  Mat out(cols.rows(), keep.size());
  for (size_t i = 0; i < keep.size(); ++i) out.col(i) = cols.col(keep[i]);
  return out;
}

Mat prune_symmetric(const Mat& cols_in, double tol) {
  Mat cols = dedupe_pm(cols_in);
  const int d = static_cast<int>(cols.rows());
  int m = static_cast<int>(cols.cols());
  if (m <= d) return cols;
  std::vector<int> alive(m);
  for (int j = 0; j < m; ++j) alive[j] = j;
  std::vector<int> order = alive;
  Vec norms = cols.colwise().norm();
  // short points first: they are the likely interior ones
  std::sort(order.begin(), order.end(), [&](int a, int b) { return norms(a) < norms(b); });

  auto gather = [&](const std::vector<int>& idx, int skip) {
    Mat g(d, idx.size() - (skip >= 0 ? 1 : 0));
    int c = 0;
    for (int i : idx)
      if (i != skip) g.col(c++) = cols.col(i);
    return g;
  };

  for (int j : order) {
    // redundant w.r.t. all other still-alive points?
    std::vector<int> others;
    for (int i : alive)
      if (i != j) others.push_back(i);
    Mat g = gather(others, -1);
    Eigen::ColPivHouseholderQR<Mat> qr(g);
    qr.setThreshold(1e-10);
    bool redundant = false;
    if (qr.rank() == d) redundant = lp_gauge(g, cols.col(j)).value <= 1 + tol;
    if (redundant) alive.erase(std::find(alive.begin(), alive.end(), j));
  }
  Mat out(d, alive.size());
  for (size_t i = 0; i < alive.size(); ++i) out.col(i) = cols.col(alive[i]);
  return out;
}

}  // namespace tensorial
