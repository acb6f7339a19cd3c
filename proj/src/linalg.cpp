#include "tensorial/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tensorial {

TensorShape::TensorShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InputError("tensor shape needs at least one factor");
  long long t = 1;
  for (int d : dims_) {
    if (d < 2) throw InputError("tensor factor dimensions must be >= 2");
    t *= d;
    if (t > kMaxTotalDim) throw CapError("total dimension exceeds " + std::to_string(kMaxTotalDim));
  }
  total_ = static_cast<int>(t);
}

int TensorShape::stride(int i) const {
  int s = 1;
  for (int j = i + 1; j < order(); ++j) s *= dims_[j];
  return s;
}

int TensorShape::flatten(const std::vector<int>& k) const {
  int idx = 0;
  for (int i = 0; i < order(); ++i) idx = idx * dims_[i] + k[i];
  return idx;
}

std::vector<int> TensorShape::unflatten(int index) const {
  std::vector<int> k(order());
  for (int i = order() - 1; i >= 0; --i) {
    k[i] = index % dims_[i];
    index /= dims_[i];
  }
  return k;
}

std::string TensorShape::str() const {
  std::ostringstream os;
  for (int i = 0; i < order(); ++i) os << (i ? "x" : "") << dims_[i];
  return os.str();
}

TensorShape TensorShape::parse(const std::string& s) {
  std::vector<int> dims;
  if (s.empty() || s.back() == 'x') throw InputError("bad shape '" + s + "'");
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, 'x')) {
    if (tok.empty()) throw InputError("bad shape '" + s + "'");
    try {
      size_t pos = 0;
      int d = std::stoi(tok, &pos);
      if (pos != tok.size()) throw InputError("bad shape '" + s + "'");
      dims.push_back(d);
    } catch (const std::logic_error&) {
      throw InputError("bad shape '" + s + "'");
    }
  }
  return TensorShape(dims);
}

Vec kron_vec(const std::vector<Vec>& xs) {
  if (xs.empty()) throw InputError("kron_vec of nothing");
  Vec out = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) {
    Vec next(out.size() * xs[i].size());
    for (Eigen::Index a = 0; a < out.size(); ++a) next.segment(a * xs[i].size(), xs[i].size()) = out(a) * xs[i];
    out = std::move(next);
  }
  return out;
}

Vec kron_vec(const std::vector<Vec>& xs, const TensorShape& shape) {
  if (static_cast<int>(xs.size()) != shape.order()) throw InputError("kron_vec: factor count does not match shape");
  for (int i = 0; i < shape.order(); ++i)
    if (xs[i].size() != shape.dim(i)) throw InputError("kron_vec: factor " + std::to_string(i) + " has wrong dimension");
  return kron_vec(xs);
}

Mat kron_mat(const std::vector<Mat>& ms) {
  Mat out = ms.at(0);
  for (size_t i = 1; i < ms.size(); ++i) {
    const Mat& b = ms[i];
    Mat next(out.rows() * b.rows(), out.cols() * b.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = out(r, c) * b;
    out = std::move(next);
  }
  return out;
}

static void check_perm(const std::vector<int>& sigma, int l) {
  if (static_cast<int>(sigma.size()) != l) throw InputError("permutation has wrong length");
  std::vector<int> s = sigma;
  std::sort(s.begin(), s.end());
  for (int i = 0; i < l; ++i)
    if (s[i] != i) throw InputError("not a permutation");
}

static TensorShape permuted_shape(const TensorShape& in, const std::vector<int>& sigma) {
  std::vector<int> d(in.order());
  for (int i = 0; i < in.order(); ++i) d[i] = in.dim(sigma[i]);
  return TensorShape(d);
}

// y[k_0..k_{l-1}] = x[j] where input slot sigma[i] carries index k_i.
static Vec permute_slots(const TensorShape& in, const std::vector<int>& sigma, const Vec& x) {
  TensorShape out = permuted_shape(in, sigma);
  Vec y(x.size());
  std::vector<int> kin(in.order());
  for (int idx = 0; idx < out.total(); ++idx) {
    std::vector<int> k = out.unflatten(idx);
    for (int i = 0; i < in.order(); ++i) kin[sigma[i]] = k[i];
    y(idx) = x(in.flatten(kin));
  }
  return y;
}

Mat slot_permutation(const TensorShape& in, const std::vector<int>& sigma) {
  check_perm(sigma, in.order());
  Mat u = Mat::Zero(in.total(), in.total());
  for (int j = 0; j < in.total(); ++j) {
    Vec e = Vec::Unit(in.total(), j);
    u.col(j) = permute_slots(in, sigma, e);
  }
  return u;
}

std::vector<std::vector<int>> admissible_perms(const TensorShape& s) {
  std::vector<int> p(s.order());
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (int i = 0; i < s.order(); ++i) ok = ok && s.dim(p[i]) == s.dim(i);
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

FactorMap::FactorMap(std::vector<Mat> factors, std::vector<int> perm, TensorShape source)
    : factors_(std::move(factors)), perm_(std::move(perm)), source_(std::move(source)) {
  check_perm(perm_, source_.order());
  if (static_cast<int>(factors_.size()) != source_.order()) throw InputError("factor map: wrong number of factors");
  for (int i = 0; i < source_.order(); ++i)
    if (source_.dim(perm_[i]) != source_.dim(i)) throw InputError("factor map: inadmissible slot permutation");
  target_ = source_;
  for (int i = 0; i < source_.order(); ++i) {
    const Mat& t = factors_[i];
    if (t.rows() != source_.dim(i) || t.cols() != source_.dim(i)) throw InputError("factor map: factor has wrong size");
    Eigen::FullPivLU<Mat> lu(t);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-14 * std::pow(t.norm(), t.rows()))
      throw InputError("factor map: singular factor");
  }
}

FactorMap FactorMap::identity(const TensorShape& s) {
  std::vector<Mat> f;
  for (int d : s.dims()) f.push_back(Mat::Identity(d, d));
  std::vector<int> p(s.order());
  std::iota(p.begin(), p.end(), 0);
  return FactorMap(f, p, s);
}

Vec FactorMap::apply(const Vec& x) const {
  if (x.size() != source_.total()) throw InputError("factor map: vector has wrong dimension");
  Vec y = permute_slots(source_, perm_, x);
  // mode products, slot by slot
  for (int i = 0; i < target_.order(); ++i) {
    int di = target_.dim(i), st = target_.stride(i);
    int outer = target_.total() / (di * st);
    Vec z(y.size());
    for (int a = 0; a < outer; ++a)
      for (int b = 0; b < st; ++b) {
        Vec fiber(di);
        for (int k = 0; k < di; ++k) fiber(k) = y((a * di + k) * st + b);
        Vec r = factors_[i] * fiber;
        for (int k = 0; k < di; ++k) z((a * di + k) * st + b) = r(k);
      }
    y = std::move(z);
  }
  return y;
}

Mat FactorMap::matrix() const { return kron_mat(factors_) * slot_permutation(source_, perm_); }

FactorMap FactorMap::compose(const FactorMap& inner) const {
  if (inner.target_ != source_) throw InputError("factor map composition: shape mismatch");
  int l = source_.order();
  std::vector<Mat> f(l);
  std::vector<int> p(l);
  for (int i = 0; i < l; ++i) {
    f[i] = factors_[i] * inner.factors_[perm_[i]];
    p[i] = inner.perm_[perm_[i]];
  }
  return FactorMap(f, p, inner.source_);
}

FactorMap FactorMap::inverse() const {
  int l = source_.order();
  std::vector<int> inv(l);
  for (int i = 0; i < l; ++i) inv[perm_[i]] = i;
  std::vector<Mat> f(l);
  for (int i = 0; i < l; ++i) f[i] = factors_[inv[i]].inverse();
  return FactorMap(f, inv, target_);
}

bool FactorMap::orthogonal(double tol) const {
  for (const Mat& t : factors_)
    if ((t * t.transpose() - Mat::Identity(t.rows(), t.cols())).norm() > tol) return false;
  return true;
}

SymEigen jacobi_eigen(const Mat& m_in, double tol) {
  const int n = static_cast<int>(m_in.rows());
  if (m_in.cols() != n) throw InputError("jacobi_eigen: matrix not square");
  if (n > kMaxTotalDim) throw CapError("jacobi_eigen: dimension too large");
  Mat a = symmetrize(m_in);
  Mat v = Mat::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  auto off = [&] {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  int sweeps = 0;
  while (off() > tol * scale) {
    if (++sweeps > 100) throw NumericError("jacobi_eigen: no convergence");
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  SymEigen out{Vec(n), Mat(n, n)};
  for (int i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

static SymEigen spd_eigen(const Mat& m) {
  SymEigen e = jacobi_eigen(m);
  double top = std::max(std::abs(e.values(e.values.size() - 1)), 1e-300);
  if (e.values(0) <= 1e-14 * top || e.values(0) <= 0) throw NumericError("matrix is not positive definite");
  return e;
}

static Mat spd_power(const Mat& m, double p) {
  SymEigen e = spd_eigen(m);
  Vec d = e.values.array().pow(p);
  return symmetrize(e.vectors * d.asDiagonal() * e.vectors.transpose());
}

Mat spd_sqrt(const Mat& m) { return spd_power(m, 0.5); }
Mat spd_inv_sqrt(const Mat& m) { return spd_power(m, -0.5); }
Mat spd_inverse(const Mat& m) { return spd_power(m, -1.0); }

bool is_spd(const Mat& m, double tol) {
  if (m.rows() != m.cols() || (m - m.transpose()).norm() > tol * std::max(1.0, m.norm())) return false;
  try {
    spd_eigen(m);
    return true;
  } catch (const NumericError&) {
    return false;
  }
}

Vec random_unit(int d, Rng& rng) {
  std::normal_distribution<double> n(0, 1);
  Vec v(d);
  do {
    for (int i = 0; i < d; ++i) v(i) = n(rng);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Mat random_orthogonal(int d, Rng& rng) {
  std::normal_distribution<double> n(0, 1);
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = n(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0) q.col(i) *= -1;
  return q;
}

// U diag(exp(s)) V^T with s uniform in [-spread, spread]
Mat random_well_conditioned(int d, Rng& rng, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Vec s(d);
  for (int i = 0; i < d; ++i) s(i) = std::exp(u(rng));
  return random_orthogonal(d, rng) * s.asDiagonal() * random_orthogonal(d, rng);
}

}  // namespace tensorial
