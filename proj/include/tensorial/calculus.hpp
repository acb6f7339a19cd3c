#pragma once

#include "tensorial/body.hpp"

#include <cstdint>
#include <functional>

namespace tensorial {

inline constexpr double kCertifyTol = 1e-6;

struct Extraction {
  std::vector<Body> factors;
  double scale = 0;  // g_P(e_1 (x) ... (x) e_1)
};

/// Factor bodies read off the slices through e_1 (x) ... (x) e_1. For i < l the
/// slice is divided by the scale so that the crossnorm identity holds exactly.
Extraction extract(const Body& p);
std::vector<Body> extract_factors(const Body& p);

struct Certificate {
  bool accepted = false;
  std::vector<Body> factors;
  double scale = 0;
  double lower_violation = 0;   // max(0, nu(pi-product of factors, P) - 1)
  double upper_violation = 0;   // max(0, nu(P, eps-product of factors) - 1)
  double factorization_error = 0;  // max relative crossnorm defect over probes
  int probe_count = 0;
  bool exact = true;  // false when smooth factors were replaced by polytopes
};

Certificate certify_tensorial(const Body& p, int probes = 200, std::uint64_t seed = 1);

Body conv_tensor(const Body& p, bool check = true);
Body ell_tensor(const Body& p, bool check = true);
Body eta_retract(const Body& p);

struct SliceNormalized {
  Body body;      // A^{-1} P
  FactorMap map;  // A = xi(ell_tensor(P)) = A_1 (x) ... (x) A_l
};
SliceNormalized slice_normalize(const Body& p);

/// Factors of a pi-product, each moved into Loewner position.
std::vector<Body> lowner_position_factors(const Body& p);

/// P + lambda R when the factors of P and R agree outside `slot` (0-based).
Body shared_factor_sum(const Body& p, const Body& r, int slot, double lambda);

enum class Homotopy { W, F, G };
Homotopy parse_homotopy(const std::string& s);
Body homotopy_eval(Homotopy kind, const Body& p, double t);

/// Two-segment path P -> P^1 (x)_pi R^2 -> R for 2-factor tensorial bodies.
Body polygonal_path(const Body& p, const Body& r, double t);

using FactorFn = std::function<Body(const Body&)>;
Body lift_eval(const Body& p, const std::vector<FactorFn>& maps);

/// Canonical representative of the ray {cQ}: scaled so that g(e_1) = 1.
Body canonical_scale(const Body& q);

}  // namespace tensorial
