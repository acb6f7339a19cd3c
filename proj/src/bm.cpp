#include "tensorial/bm.hpp"

#include "tensorial/calculus.hpp"
#include "tensorial/lowner.hpp"
#include "tensorial/oracles.hpp"
#include "tensorial/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace tensorial {

BmMode parse_bm_mode(const std::string& s) {
  if (s == "classical") return BmMode::Classical;
  if (s == "tensorial") return BmMode::Tensorial;
  throw InputError("unknown bm mode '" + s + "' (expected classical or tensorial)");
}

namespace {

Mat sval(const Mat& m) { return Eigen::JacobiSVD<Mat>(m).singularValues(); }

// Image(A_1 (x) A_2, Schatten_p ball) with p = 1 or inf
struct KronSchatten {
  double p;
  Mat a1, a2;
};

std::optional<KronSchatten> as_kron_schatten(const Body& b) {
  if (b.kind() != Kind::Implicit) return std::nullopt;
  if (auto* so = oracle_as<SchattenOracle>(b))
    return KronSchatten{so->p(), Mat::Identity(so->d1(), so->d1()), Mat::Identity(so->d2(), so->d2())};
  auto* io = oracle_as<ImageOracle>(b);
  if (!io) return std::nullopt;
  auto* so = oracle_as<SchattenOracle>(io->inner());
  if (!so) return std::nullopt;
  // nearest Kronecker product by rearrangement
  const int d1 = so->d1(), d2 = so->d2();
  const Mat& l = io->map();
  Mat r(d1 * d1, d2 * d2);
  for (int i1 = 0; i1 < d1; ++i1)
    for (int j1 = 0; j1 < d1; ++j1)
      for (int i2 = 0; i2 < d2; ++i2)
        for (int j2 = 0; j2 < d2; ++j2) r(i1 * d1 + j1, i2 * d2 + j2) = l(i1 * d2 + i2, j1 * d2 + j2);
  Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec s = svd.singularValues();
  if (s.size() > 1 && s(1) > 1e-12 * s(0)) return std::nullopt;
  Mat a1(d1, d1), a2(d2, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) a1(i, j) = std::sqrt(s(0)) * svd.matrixU()(i * d1 + j, 0);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j) a2(i, j) = std::sqrt(s(0)) * svd.matrixV()(i * d2 + j, 0);
  return KronSchatten{so->p(), a1, a2};
}

// nu(Image(M, S_p), Image(N, S_q)) for Kronecker M, N through C_i = N_i^{-1} M_i
double nu_kron_schatten(const KronSchatten& m, const KronSchatten& n) {
  Mat c1 = n.a1.lu().solve(m.a1), c2 = n.a2.lu().solve(m.a2);
  Vec s1 = sval(c1), s2 = sval(c2);
  // extreme points of the nuclear ball are rank one, where all Schatten norms agree
  if (m.p == 1 || n.p != 1) return s1(0) * s2(0);
  // spectral into nuclear: von Neumann over the orthogonal extreme points
  double acc = 0;
  for (int i = 0; i < std::min(s1.size(), s2.size()); ++i) acc += s1(i) * s2(i);
  return acc;
}

class Evaluator {
 public:
  Evaluator(const Body& p, const Body& r) : p_(p), r_(r) {
    if (p.is_polytope() && r.is_polytope() && p.dim() <= kMaxDDDim) {
      vp_ = p.vertices();
      bp_ = p.facets();
      vr_ = r.vertices();
      ar_ = r.facets();
      poly_ = true;
    }
    kp_ = as_kron_schatten(p);
    kr_ = as_kron_schatten(r);
  }

  bool exact() const {
    if (poly_ || (kp_ && kr_)) return true;
    auto ok = [](const Body& b) { return b.is_polytope() || b.kind() == Kind::Ellipsoid; };
    return ok(p_) || ok(r_);
  }

  double operator()(const FactorMap& t) const {
    if (kp_ && kr_ && t.source().order() == 2) {
      const auto& f = t.factors();
      const auto& s = t.perm();
      KronSchatten tp{kp_->p, f[0] * (s[0] == 0 ? kp_->a1 : kp_->a2), f[1] * (s[1] == 0 ? kp_->a1 : kp_->a2)};
      return nu_kron_schatten(tp, *kr_) * nu_kron_schatten(*kr_, tp);
    }
    return (*this)(t.matrix());
  }

  double operator()(const Mat& t) const {
    if (poly_) {
      Eigen::PartialPivLU<Mat> lu(t);
      double a = (ar_.transpose() * t * vp_).cwiseAbs().maxCoeff();
      double b = (bp_.transpose() * lu.solve(vr_)).cwiseAbs().maxCoeff();
      return a * b;
    }
    Body tp = linear_image(t, p_.without_shape());
    Body r = r_.without_shape();
    return nu(tp, r) * nu(r, tp);
  }

 private:
  Body p_, r_;
  bool poly_ = false;
  Mat vp_, bp_, vr_, ar_;
  std::optional<KronSchatten> kp_, kr_;
};

bool well_conditioned(const Mat& t) {
  Vec s = sval(t);
  return s(s.size() - 1) > 1e-10 * s(0) && std::isfinite(s(0));
}

struct Candidate {
  double lambda = INFINITY;
  FactorMap map;
  bool converged = false;
};

}  // namespace

double bm_lambda(const Body& p, const Body& r, const FactorMap& t) {
  if (p.dim() != r.dim() || t.source().total() != p.dim()) throw InputError("bm: dimension mismatch");
  return Evaluator(p, r)(t);
}

BmResult bm_estimate(const Body& p, const Body& r, BmMode mode, int restarts, std::uint64_t seed) {
  if (p.dim() != r.dim()) throw InputError("bm: dimension mismatch");
  if (restarts < 1) throw InputError("bm: need at least one restart");
  Evaluator eval(p, r);
  Rng rng(seed);
  BmResult res;
  res.exact_evaluation = eval.exact();
  Candidate best;

  // Each slot's search runs on the factors A_R,i Q_i A_P,sigma(i)^{-1} that
  // carry Loewner ellipsoid onto Loewner ellipsoid.
  std::vector<Body> pf, rf;
  TensorShape shape;
  if (mode == BmMode::Tensorial) {
    shape = p.require_shape();
    if (r.require_shape() != shape) throw InputError("bm: tensor shapes differ (" + shape.str() + " vs " + r.require_shape().str() + ")");
    Certificate cp = certify_tensorial(p), cr = certify_tensorial(r);
    if (!cp.accepted || !cr.accepted) throw PreconditionError("bm: tensorial mode needs tensorial bodies");
    pf = cp.factors;
    rf = cr.factors;
  } else {
    shape = TensorShape({p.dim()});
    pf = {p.without_shape()};
    rf = {r.without_shape()};
  }
  const int l = shape.order();
  std::vector<Mat> ap, ar;
  for (int i = 0; i < l; ++i) {
    ap.push_back(xi(lowner(pf[i])));
    ar.push_back(xi(lowner(rf[i])));
  }
  std::vector<std::vector<int>> perms = mode == BmMode::Tensorial ? admissible_perms(shape) : std::vector<std::vector<int>>{{0}};

  for (const auto& sigma : perms) {
    auto unpack = [&](const Vec& theta) {
      std::vector<Mat> f;
      int off = 0;
      for (int i = 0; i < l; ++i) {
        const int d = shape.dim(i);
        f.push_back(Eigen::Map<const Mat>(theta.data() + off, d, d));
        off += d * d;
      }
      return f;
    };
    auto objective = [&](const Vec& theta) {
      ++res.evaluations;
      std::vector<Mat> f = unpack(theta);
      for (const Mat& m : f)
        if (!well_conditioned(m)) return 1e6;
      double v = mode == BmMode::Tensorial ? eval(FactorMap(f, sigma, shape)) : eval(f[0]);
      return std::isfinite(v) && v > 0 ? std::log(v) : 1e6;
    };
    auto pack = [](const std::vector<Mat>& ms) {
      int n = 0;
      for (const Mat& m : ms) n += static_cast<int>(m.size());
      Vec theta(n);
      int off = 0;
      for (const Mat& m : ms) {
        theta.segment(off, m.size()) = Eigen::Map<const Vec>(m.data(), m.size());
        off += static_cast<int>(m.size());
      }
      return theta;
    };
    // Screen many Loewner alignments A_R,i Q_i A_P,sigma(i)^{-1} with random
    // orthogonal Q_i; the best ones seed the local searches.
    std::vector<std::pair<double, Vec>> pool;
    {
      std::vector<Mat> id;
      for (int i = 0; i < l; ++i) id.push_back(Mat::Identity(shape.dim(i), shape.dim(i)));
      Vec th = pack(id);
      pool.emplace_back(objective(th), th);
    }
    const int screen = eval.exact() ? 64 * restarts : 2 * restarts;
    for (int k = 0; k < screen; ++k) {
      std::vector<Mat> start;
      for (int i = 0; i < l; ++i) {
        const int d = shape.dim(i);
        Mat q = k == 0 ? Mat::Identity(d, d) : random_orthogonal(d, rng);
        start.push_back(ar[i] * q * ap[sigma[i]].inverse());
      }
      Vec th = pack(start);
      pool.emplace_back(objective(th), th);
    }
    std::stable_sort(pool.begin(), pool.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (int k = 0; k < restarts && k < static_cast<int>(pool.size()); ++k) {
      Vec theta = pool[k].second;
      const int n = static_cast<int>(theta.size());
      double scale = theta.cwiseAbs().maxCoeff();
      NMOptions opt;
      opt.max_evals = 150 * n;
      opt.ftol = 1e-13;
      NMResult nm;
      // restarted simplices escape the collapse Nelder-Mead is prone to
      for (int round = 0; round < 3; ++round) {
        opt.step = 0.1 * scale / (1 << round);
        nm = nelder_mead(objective, theta, opt);
        theta = nm.x;
      }
      double lam = std::exp(nm.f);
      if (lam < best.lambda) {
        std::vector<Mat> f = unpack(theta);
        best.lambda = lam;
        best.map = FactorMap(f, sigma, shape);
        best.converged = nm.converged;
      }
    }
  }
  res.lambda = std::max(1.0, eval(best.map));
  res.map = best.map;
  res.converged = best.converged;
  return res;
}

double orbit_invariance_check(const Body& p, int trials, std::uint64_t seed) {
  const TensorShape& s = p.require_shape();
  Rng rng(seed);
  auto perms = admissible_perms(s);
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<Mat> f;
    for (int d : s.dims()) f.push_back(random_orthogonal(d, rng));
    std::uniform_int_distribution<size_t> pick(0, perms.size() - 1);
    FactorMap u(f, perms[pick(rng)], s);
    worst = std::max(worst, hausdorff_value(linear_image(u, p), p));
  }
  return worst;
}

}  // namespace tensorial
