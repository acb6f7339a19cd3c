#include "tensorial/lowner.hpp"

#include <cmath>

namespace tensorial {

MveeResult mvee_symmetric(const Mat& pts_in, double eps, int max_iter) {
  // Clusters of nearly equal points (vertex splitting in degenerate H-reps)
  // stall the away steps; keep one representative per cluster.
  std::vector<int> keep;
  for (int j = 0; j < pts_in.cols(); ++j) {
    double nj = pts_in.col(j).norm();
    if (nj == 0) continue;
    bool dup = false;
    for (int k : keep) {
      double tol = 1e-6 * std::max(nj, pts_in.col(k).norm());
      if ((pts_in.col(j) - pts_in.col(k)).norm() <= tol || (pts_in.col(j) + pts_in.col(k)).norm() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(j);
  }
  const int d = static_cast<int>(pts_in.rows());
  const int m = static_cast<int>(keep.size());
  Mat v(d, m);
  for (int j = 0; j < m; ++j) v.col(j) = pts_in.col(keep[j]);
  {
    Eigen::ColPivHouseholderQR<Mat> qr(v);
    qr.setThreshold(1e-10);
    if (m == 0 || qr.rank() < d) throw NumericError("mvee: degenerate point set (does not span)");
  }

  Vec u = Vec::Constant(m, 1.0 / m);
  Mat xi;
  Vec omega;
  auto refresh = [&] {
    Mat x = v * u.asDiagonal() * v.transpose();
    xi = symmetrize(x).ldlt().solve(Mat::Identity(d, d));
    omega = (v.array() * (xi * v).array()).colwise().sum().transpose();
  };
  refresh();

  MveeResult res;
  const double dd = d;
  for (int it = 0;; ++it) {
    Eigen::Index j;
    double wmax = omega.maxCoeff(&j);
    int k = -1;
    double wmin = INFINITY;
    for (int i = 0; i < m; ++i)
      if (u(i) > 0 && omega(i) < wmin) {
        wmin = omega(i);
        k = i;
      }
    double eplus = wmax / dd - 1, eminus = 1 - wmin / dd;
    if ((eplus <= eps && eminus <= eps) || it >= max_iter) {
      if (it >= max_iter) throw NumericError("mvee: iteration cap exceeded (gap " + std::to_string(eplus) + ")");
      res.iterations = it;
      res.gap = std::max(eplus, 0.0);
      res.shape = symmetrize(xi / wmax);
      res.weights = Vec::Zero(pts_in.cols());
      for (int i = 0; i < m; ++i) res.weights(keep[i]) = u(i);
      return res;
    }
    int idx;
    double c, s;
    if (eplus >= eminus) {
      double alpha = (wmax - dd) / (dd * (wmax - 1));
      u *= (1 - alpha);
      u(j) += alpha;
      idx = static_cast<int>(j);
      c = 1 - alpha;
      s = alpha;
    } else {
      // for wmin <= 1 the objective increases all the way to dropping the point
      double beta = wmin > 1 ? (dd - wmin) / (dd * (wmin - 1)) : INFINITY;
      bool drop = false;
      if (u(k) < 1 && beta >= u(k) / (1 - u(k))) {
        beta = u(k) / (1 - u(k));
        drop = true;
      }
      u *= (1 + beta);
      u(k) -= beta;
      if (drop) u(k) = 0;
      idx = k;
      c = 1 + beta;
      s = -beta;
    }
    if (it % 200 == 199) {
      refresh();
      continue;
    }
    // X' = c X + s v v^T
    Vec xv = xi * v.col(idx);
    double r = s / c;
    double denom = 1 + r * omega(idx);
    if (denom <= 1e-300) {
      refresh();
      continue;
    }
    Vec proj = v.transpose() * xv;
    xi = (xi - (r / denom) * xv * xv.transpose()) / c;
    omega = (omega - (r / denom) * proj.cwiseProduct(proj)) / c;
  }
}

Body lowner(const Body& p) {
  if (p.kind() == Kind::Ellipsoid) return p;
  if (p.is_polytope()) {
    MveeResult r = mvee_symmetric(p.vertices());
    Body e = Body::ellipsoid(r.shape);
    return p.shape() ? e.with_shape(*p.shape()) : e;
  }
  // Implicit body: cutting-plane loop over support points.
  const int d = p.dim();
  std::vector<Vec> pts;
  for (int i = 0; i < d; ++i) pts.push_back(support_at(p, Vec::Unit(d, i)).point);
  Rng rng(4242);
  for (int k = 0; k < 4 * d; ++k) pts.push_back(support_at(p, random_unit(d, rng)).point);
  Body e;
  for (int round = 0; round < 400; ++round) {
    Mat m(d, pts.size());
    for (size_t i = 0; i < pts.size(); ++i) m.col(i) = pts[i];
    e = Body::ellipsoid(mvee_symmetric(m).shape);
    Touch w = nu_witness(p, e);
    if (w.value <= 1 + 1e-9) break;
    if (round == 399) e = Body::ellipsoid(e.shape_matrix() / (w.value * w.value));
    pts.push_back(w.point);
  }
  return p.shape() ? e.with_shape(*p.shape()) : e;
}

Mat contact_points(const Mat& pts, const Body& e, double tol) {
  std::vector<int> idx;
  for (int j = 0; j < pts.cols(); ++j)
    if (gauge(e, pts.col(j)) >= 1 - tol) idx.push_back(j);
  Mat out(pts.rows(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out.col(i) = pts.col(idx[i]);
  return out;
}

Mat xi(const Body& e) {
  if (e.kind() != Kind::Ellipsoid) throw InputError("xi needs an ellipsoid");
  return spd_inv_sqrt(e.shape_matrix());
}

Normalized normalize_lowner(const Body& p) {
  Mat a = xi(lowner(p));
  return {linear_image(a.inverse(), p), a};
}

}  // namespace tensorial
