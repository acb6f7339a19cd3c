#include "tensorial/reproduce.hpp"

#include "tensorial/bm.hpp"
#include "tensorial/calculus.hpp"
#include "tensorial/lowner.hpp"
#include "tensorial/products.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <thread>

namespace tensorial {

using nlohmann::json;

namespace {

double thread_cpu() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return ts.tv_sec + 1e-9 * ts.tv_nsec;
}

double inf_norm(const Vec& x) { return x.cwiseAbs().maxCoeff(); }

Vec gaussian(int d, Rng& rng) {
  std::normal_distribution<double> n;
  Vec x(d);
  for (int i = 0; i < d; ++i) x(i) = n(rng);
  return x;
}

FactorMap random_factor_map(const TensorShape& s, Rng& rng, bool orthogonal) {
  std::vector<Mat> f;
  for (int d : s.dims()) f.push_back(orthogonal ? random_orthogonal(d, rng) : random_well_conditioned(d, rng));
  auto perms = admissible_perms(s);
  std::uniform_int_distribution<size_t> pick(0, perms.size() - 1);
  return FactorMap(f, perms[pick(rng)], s);
}

std::vector<Body> random_factors(const TensorShape& s, Rng& rng) {
  std::vector<Body> f;
  for (int d : s.dims()) f.push_back(random_polytope(d, d + 2, rng));
  return f;
}

struct Check {
  const char* anchor;
  double budget;  // CPU seconds, 0 = none
  std::function<bool(Rng&, json&, json&)> run;
};

// ---- 1: a Minkowski sum of two projective products is not tensorial ----
bool sum_not_tensorial(Rng& rng, json& v, json& tol) {
  Body b2 = euclidean_ball(2), b1 = lp_ball(1, 2);
  Body p = scale(projective_product({b2, b2}), 0.5);
  Body r = scale(projective_product({b1, b1}), 0.5);
  Body s = minkowski_sum(p, r).with_shape(TensorShape({2, 2}));
  Body pol = polar(s);
  Vec ones(2), e1(2);
  ones << 1, 1;
  e1 << 1, 0;
  double err_diag = 0, err_axis = 0;
  for (int k = 0; k < 100; ++k) {
    Vec x = gaussian(2, rng);
    err_diag = std::max(err_diag, std::abs(gauge(pol, kron_vec({ones, x})) - (std::sqrt(2.0) * x.norm() + inf_norm(x)) / 2));
    err_axis = std::max(err_axis, std::abs(gauge(pol, kron_vec({e1, x})) - (x.norm() + inf_norm(x)) / 2));
  }
  Certificate c = certify_tensorial(s, 50, 1);
  double viol = std::max({c.lower_violation, c.upper_violation, c.factorization_error});
  v = {{"formula_error_diagonal", err_diag}, {"formula_error_axis", err_axis}, {"certify_accepted", c.accepted},
       {"lower_violation", c.lower_violation}, {"upper_violation", c.upper_violation},
       {"factorization_error", c.factorization_error}};
  tol = {{"formula", 1e-8}, {"min_violation", 1e-3}, {"cpu_seconds", 2.0}};
  return err_diag <= 1e-8 && err_axis <= 1e-8 && !c.accepted && viol >= 1e-3;
}

// ---- 2: gauges of tensorial bodies are multiplicative on decomposables ----
bool crossnorm(Rng& rng, json& v, json& tol) {
  const std::vector<TensorShape> shapes{TensorShape({2, 2}), TensorShape({2, 3}), TensorShape({2, 2, 2})};
  double worst = 0;
  json per = json::array();
  for (int k = 0; k < 20; ++k) {
    const TensorShape& s = shapes[k % 3];
    Body p;
    std::vector<Body> f;
    const char* how = "";
    // eta on a random body in dimension 6 or more costs tens of seconds, so
    // the larger shapes only get pi and eps products
    switch (k % 3 == 0 ? (k / 3) % 3 : (k / 3) % 2) {
      case 0:
        f = random_factors(s, rng);
        p = projective_product(f);
        how = "pi";
        break;
      case 1:
        f = random_factors(s, rng);
        p = injective_product(f);
        how = "eps";
        break;
      default:
        p = eta_retract(random_polytope(s.total(), s.total() + 3, rng).with_shape(s));
        f = extract_factors(p);
        how = "eta";
    }
    double err = 0;
    for (int j = 0; j < 200; ++j) {
      std::vector<Vec> xs;
      double prod = 1;
      for (int i = 0; i < s.order(); ++i) {
        xs.push_back(gaussian(s.dim(i), rng));
        prod *= gauge(f[i], xs.back());
      }
      err = std::max(err, std::abs(gauge(p, kron_vec(xs, s)) - prod) / prod);
    }
    worst = std::max(worst, err);
    per.push_back({{"shape", s.str()}, {"construction", how}, {"max_relative_error", err}});
  }
  v = {{"max_relative_error", worst}, {"bodies", per}};
  tol = {{"relative", 1e-6}, {"cpu_seconds", 30.0}};
  return worst <= 1e-6;
}

// ---- 3: the Loewner ellipsoid of a projective product is the Hilbert product ----
bool lowner_factorization(Rng& rng, json& v, json& tol) {
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    TensorShape s(k < 5 ? std::vector<int>{2, 2} : std::vector<int>{2, 3});
    std::vector<Body> f = random_factors(s, rng);
    Body lhs = lowner(projective_product(f));
    Body rhs = hilbert_product({lowner(f[0]), lowner(f[1])});
    worst = std::max(worst, hausdorff_value(lhs, rhs.without_shape()));
  }
  Body cube = lp_ball(INFINITY, 2);
  double concrete = hausdorff_value(lowner(projective_product({cube, cube})), euclidean_ball(4, 2.0));
  v = {{"max_hausdorff_random", worst}, {"hausdorff_cube_case", concrete}};
  tol = {{"random", 1e-4}, {"cube_case", 1e-5}};
  return worst <= 1e-4 && concrete <= 1e-5;
}

// ---- 4: retraction and equivariance laws ----
bool retractions(Rng& rng, json& v, json& tol) {
  const TensorShape s({2, 2});
  std::vector<Body> tensorial;
  for (int k = 0; k < 3; ++k) {
    std::vector<Body> f = random_factors(s, rng);
    tensorial.push_back(projective_product(f));
    tensorial.push_back(injective_product(f));
  }
  std::vector<Body> generic;
  for (int k = 0; k < 3; ++k) generic.push_back(random_polytope(4, 7, rng).with_shape(s));

  double ct_idem = 0, eta_idem = 0, eta_fix = 0, equiv = 0;
  for (const Body& p : tensorial) {
    Body c = conv_tensor(p);
    ct_idem = std::max(ct_idem, hausdorff_value(conv_tensor(c), c));
    eta_fix = std::max(eta_fix, hausdorff_value(eta_retract(p), p));
  }
  for (const Body& q : generic) {
    Body e = eta_retract(q);
    eta_idem = std::max(eta_idem, hausdorff_value(eta_retract(e), e));
  }
  for (int k = 0; k < 10; ++k) {
    const Body& p = tensorial[k % tensorial.size()];
    FactorMap t = random_factor_map(s, rng, false);
    equiv = std::max(equiv, hausdorff_value(conv_tensor(linear_image(t, p)), linear_image(t, conv_tensor(p))));
  }
  v = {{"conv_tensor_idempotence", ct_idem}, {"eta_idempotence", eta_idem}, {"eta_fixes_tensorial", eta_fix},
       {"conv_tensor_equivariance", equiv}};
  tol = {{"idempotence", 1e-8}, {"eta_fixed_point", 1e-8}, {"equivariance", 1e-6}};
  return ct_idem <= 1e-8 && eta_idem <= 1e-8 && eta_fix <= 1e-8 && equiv <= 1e-6;
}

// ---- 5: moving a scalar between factors changes nothing ----
bool scaling(Rng& rng, json& v, json& tol) {
  Body p1 = random_polytope(2, 4, rng), p2 = random_polytope(3, 5, rng);
  Body e1 = lowner(p1), e2 = lowner(p2);
  double pi = 0, eps = 0, h2 = 0;
  for (double lam : {0.25, 4.0}) {
    pi = std::max(pi, hausdorff_value(projective_product({scale(p1, lam), scale(p2, 1 / lam)}), projective_product({p1, p2})));
    eps = std::max(eps, hausdorff_value(injective_product({scale(p1, lam), scale(p2, 1 / lam)}), injective_product({p1, p2})));
    h2 = std::max(h2, hausdorff_value(hilbert_product({scale(e1, lam), scale(e2, 1 / lam)}), hilbert_product({e1, e2})));
  }
  v = {{"projective", pi}, {"injective", eps}, {"hilbert", h2}};
  tol = {{"hausdorff", 1e-10}};
  return pi <= 1e-10 && eps <= 1e-10 && h2 <= 1e-10;
}

// ---- 6: injective product inside projective inside d_1 times injective ----
bool sandwich(Rng& rng, json& v, json& tol) {
  const TensorShape s({2, 2});
  double pi_in_eps = 0, eps_in_pi = 0;
  for (int k = 0; k < 10; ++k) {
    std::vector<Body> f = random_factors(s, rng);
    Body pi = projective_product(f), ep = injective_product(f);
    pi_in_eps = std::max(pi_in_eps, nu(pi, ep));
    eps_in_pi = std::max(eps_in_pi, nu(ep, pi));
  }
  Body b2 = euclidean_ball(2);
  Body pb = projective_product({b2, b2}), eb = injective_product({b2, b2});
  Vec id = Mat::Identity(2, 2).reshaped();
  double witness = nu(eb, pb);
  double nuclear = gauge(pb, id), spectral = gauge(eb, id);
  v = {{"max_nu_pi_eps", pi_in_eps}, {"max_nu_eps_pi", eps_in_pi}, {"nu_eps_pi_euclidean", witness},
       {"identity_nuclear_gauge", nuclear}, {"identity_spectral_gauge", spectral}};
  tol = {{"pi_in_eps", 1e-9}, {"eps_in_pi", 1e-6}, {"witness", 1e-6}};
  return pi_in_eps <= 1 + 1e-9 && eps_in_pi <= 2 + 1e-6 && std::abs(witness - 2) <= 1e-6 &&
         std::abs(nuclear - 2) <= 1e-6 && std::abs(spectral - 1) <= 1e-6;
}

// ---- 7: slice normalization and homotopy endpoints ----
bool slice(Rng& rng, json& v, json& tol) {
  std::vector<Body> corpus;
  for (TensorShape s : {TensorShape({2, 2}), TensorShape({2, 3})}) {
    std::vector<Body> f = random_factors(s, rng);
    corpus.push_back(projective_product(f));
    corpus.push_back(injective_product(f));
    if (s.total() == 4) corpus.push_back(eta_retract(random_polytope(4, 7, rng).with_shape(s)));
  }
  double slice_err = 0, w0 = 0, g1 = 0, ffix = 0;
  for (const Body& p : corpus) {
    const TensorShape& s = p.require_shape();
    SliceNormalized n = slice_normalize(p);
    slice_err = std::max(slice_err, hausdorff_value(ell_tensor(n.body), euclidean_ball(s.total())));
    w0 = std::max(w0, hausdorff_value(homotopy_eval(Homotopy::W, n.body, 0), n.body));
    std::vector<Body> balls;
    for (int d : s.dims()) balls.push_back(euclidean_ball(d));
    g1 = std::max(g1, hausdorff_value(homotopy_eval(Homotopy::G, n.body, 1), projective_product(balls)));
  }
  for (TensorShape s : {TensorShape({2, 2}), TensorShape({2, 3})}) {
    std::vector<Body> balls;
    for (int d : s.dims()) balls.push_back(euclidean_ball(d));
    Body pb = projective_product(balls);
    for (double t : {0.3, 0.7}) ffix = std::max(ffix, hausdorff_value(homotopy_eval(Homotopy::F, pb, t), pb));
  }
  v = {{"max_slice_defect", slice_err}, {"W_at_0", w0}, {"G_at_1", g1}, {"F_fixes_projective_balls", ffix}};
  tol = {{"slice", 1e-4}, {"endpoints", 1e-6}};
  return slice_err <= 1e-4 && w0 <= 1e-6 && g1 <= 1e-6 && ffix <= 1e-6;
}

// ---- 8: three distinct bodies fixed by the orthogonal tensor group ----
bool orbit_fixed(Rng& rng, json& v, json& tol) {
  Body b2 = euclidean_ball(2);
  const TensorShape s({2, 2});
  std::vector<Body> bs{euclidean_ball(4).with_shape(s), projective_product({b2, b2}), injective_product({b2, b2})};
  const char* names[] = {"hilbert", "projective", "injective"};
  double orbit = 0;
  json per;
  for (int i = 0; i < 3; ++i) {
    double o = orbit_invariance_check(bs[i], 50, rng());
    per[names[i]] = o;
    orbit = std::max(orbit, o);
  }
  double sep = INFINITY;
  json pair;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double h = hausdorff_value(bs[i], bs[j]);
      pair[std::string(names[i]) + "-" + names[j]] = h;
      sep = std::min(sep, h);
    }
  v = {{"orbit_defect", per}, {"pairwise_hausdorff", pair}};
  tol = {{"orbit", 1e-8}, {"min_separation", 0.1}};
  return orbit <= 1e-8 && sep >= 0.1;
}

// ---- 9: Banach-Mazur estimator sanity ----
bool bm_sanity(Rng& rng, json& v, json& tol) {
  const TensorShape s({2, 2});
  Body p = projective_product(random_factors(s, rng));
  Body b2 = euclidean_ball(2);
  Body pb = projective_product({b2, b2}), eb = injective_product({b2, b2});
  double self = std::max(bm_estimate(p, p, BmMode::Tensorial, 16, rng()).lambda,
                         bm_estimate(pb, pb, BmMode::Tensorial, 16, rng()).lambda);
  double moved = 0;
  for (int k = 0; k < 5; ++k) {
    FactorMap t = random_factor_map(s, rng, false);
    moved = std::max(moved, bm_estimate(p, linear_image(t, p), BmMode::Tensorial, 32, rng()).lambda);
  }
  BmResult pe = bm_estimate(pb, eb, BmMode::Tensorial, 64, rng());
  v = {{"self", self}, {"max_transformed", moved}, {"projective_injective", pe.lambda}};
  tol = {{"self", 1e-6}, {"transformed", 1e-3}, {"projective_injective", {1.5, 2.001}}, {"cpu_seconds", 60.0}};
  return self <= 1 + 1e-6 && moved <= 1 + 1e-3 && pe.lambda >= 1.5 && pe.lambda <= 2.001;
}

// ---- 10: minimum-volume ellipsoid solver ----
bool mvee(Rng& rng, json& v, json& tol) {
  double rel = 0, gap = 0;
  for (int d : {2, 3, 4}) {
    Body cube = lp_ball(INFINITY, d);
    rel = std::max(rel, (xi(lowner(cube)) - std::sqrt(d) * Mat::Identity(d, d)).norm() / std::sqrt(d));
    gap = std::max(gap, mvee_symmetric(cube.vertices()).gap);
  }
  Mat pts(6, 1000);
  for (int j = 0; j < pts.cols(); ++j) pts.col(j) = gaussian(6, rng);
  double t0 = thread_cpu();
  MveeResult big = mvee_symmetric(pts);
  double secs = thread_cpu() - t0;
  gap = std::max(gap, big.gap);
  v = {{"cube_relative_error", rel}, {"max_gap", gap}, {"cpu_seconds_1000_points", secs}};
  tol = {{"relative", 1e-6}, {"gap", 1e-7}, {"cpu_seconds", 1.0}};
  return rel <= 1e-6 && gap <= 1e-7 && secs < 1.0;
}

// ---- 11: exact polytope Hausdorff distance ----
bool hausdorff_check(Rng& rng, json& v, json& tol) {
  double worst_above = -INFINITY, worst_slack = 0;
  for (int k = 0; k < 20; ++k) {
    const int d = k < 10 ? 2 : 3;
    Body p = random_polytope(d, d + 2, rng), q = random_polytope(d, d + 3, rng);
    double exact = hausdorff(p, q).value;
    // symmetric bodies: a half sphere of directions suffices
    const int n = d == 2 ? 4096 : 40000;
    double sampled = 0, rho = 0;
    for (int j = 0; j < n; ++j) {
      Vec u(d);
      if (d == 2) {
        double a = M_PI * (j + 0.5) / n;
        u << std::cos(a), std::sin(a);
      } else {  // Fibonacci sphere
        double z = 1 - (2.0 * j + 1) / n, r = std::sqrt(1 - z * z), a = j * M_PI * (3 - std::sqrt(5.0));
        u << r * std::cos(a), r * std::sin(a), z;
      }
      sampled = std::max(sampled, std::abs(support(p, u) - support(q, u)));
    }
    // h_P - h_Q is (R_P + R_Q)-Lipschitz; rho bounds the gap between sample directions
    rho = d == 2 ? M_PI / (2 * n) : 2 * std::sqrt(4 * M_PI / n);
    const double res = (circumradius(p) + circumradius(q)) * rho;
    worst_above = std::max(worst_above, sampled - exact);
    worst_slack = std::max(worst_slack, (exact - sampled) / res);
  }
  double ball_cube = hausdorff_value(lp_ball(2, 2), lp_ball(INFINITY, 2));
  double cubes = hausdorff_value(lp_ball(INFINITY, 2), lp_ball(INFINITY, 2, 2.0));
  double known = std::max(std::abs(ball_cube - (std::sqrt(2.0) - 1)), std::abs(cubes - std::sqrt(2.0)));
  v = {{"max_sampled_minus_exact", worst_above}, {"max_gap_over_resolution", worst_slack},
       {"ball_cube", ball_cube}, {"cube_double_cube", cubes}};
  tol = {{"sampled_above_exact", 1e-9}, {"gap_over_resolution", 1.0}, {"known_values", 1e-9}};
  return worst_above <= 1e-9 && worst_slack <= 1.0 && known <= 1e-9;
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all{
      {"Minkowski sum of two projective products fails to be tensorial", 2.0, sum_not_tensorial},
      {"tensorial bodies are reasonable crossnorm balls", 30.0, crossnorm},
      {"Loewner ellipsoid of a projective product is the Hilbertian product", 0, lowner_factorization},
      {"conv_tensor and eta are equivariant retractions", 0, retractions},
      {"scalars move freely between tensor factors", 0, scaling},
      {"injective and projective products sandwich each other", 0, sandwich},
      {"slice normalization and homotopy endpoints", 0, slice},
      {"fixed points of the orthogonal tensor group are not unique", 0, orbit_fixed},
      {"tensorial Banach-Mazur estimator sanity", 60.0, bm_sanity},
      {"minimum-volume enclosing ellipsoid", 0, mvee},
      {"Hausdorff distance of polytopes", 0, hausdorff_check},
  };
  return all;
}

}  // namespace

bool Report::all_pass() const {
  for (const CheckRecord& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

CheckRecord run_check(int id, std::uint64_t seed) {
  if (id < 1 || id > kCheckCount) throw InputError("no acceptance check " + std::to_string(id));
  const Check& c = checks()[id - 1];
  CheckRecord rec;
  rec.id = id;
  rec.anchor = c.anchor;
  Rng rng(seed * 1000003ULL + id);
  auto w0 = std::chrono::steady_clock::now();
  double c0 = thread_cpu();
  try {
    rec.pass = c.run(rng, rec.values, rec.tolerance);
  } catch (const std::exception& e) {
    rec.pass = false;
    rec.error = e.what();
  }
  rec.cpu_seconds = thread_cpu() - c0;
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - w0).count();
  if (c.budget > 0 && rec.cpu_seconds >= c.budget) rec.pass = false;
  return rec;
}

Report reproduce_suite(int jobs, std::uint64_t seed) {
  if (jobs < 1) throw InputError("jobs must be at least 1");
  Report rep;
  rep.seed = seed;
  rep.checks.resize(kCheckCount);
  auto w0 = std::chrono::steady_clock::now();
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next++) < kCheckCount;) rep.checks[i] = run_check(i + 1, seed);
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::min(jobs, kCheckCount); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - w0).count();
  return rep;
}

json report_to_json(const Report& r) {
  json checks = json::array();
  for (const CheckRecord& c : r.checks) {
    json j = {{"id", c.id}, {"anchor", c.anchor}, {"values", c.values}, {"tolerance", c.tolerance},
              {"pass", c.pass}, {"wall_seconds", c.wall_seconds}, {"cpu_seconds", c.cpu_seconds}};
    if (!c.error.empty()) j["error"] = c.error;
    checks.push_back(std::move(j));
  }
  return {{"suite_version", r.version}, {"seed", r.seed}, {"all_pass", r.all_pass()},
          {"wall_seconds", r.wall_seconds}, {"checks", checks}};
}

}  // namespace tensorial
