#pragma once

#include "tensorial/body.hpp"

#include <cstdint>

namespace tensorial {

enum class BmMode { Classical, Tensorial };
BmMode parse_bm_mode(const std::string& s);

struct BmResult {
  double lambda = 0;   // nu(TP, R) * nu(R, TP) at the returned map
  FactorMap map;       // classical mode: one dense factor on shape (d)
  bool converged = false;
  int evaluations = 0;
  bool exact_evaluation = true;  // false when nu came from the multistart ascent
};

/// lambda(T) = nu(T P, R) nu(R, T P) for a fixed map.
double bm_lambda(const Body& p, const Body& r, const FactorMap& t);

/// Multistart Nelder-Mead over GL(d) or GL_(x); lambda is an upper bound on the
/// distance whenever the evaluation is exact.
BmResult bm_estimate(const Body& p, const Body& r, BmMode mode, int restarts = 16, std::uint64_t seed = 1);

/// max delta^H(T P, P) over random orthogonal factor maps with random admissible slot permutations.
double orbit_invariance_check(const Body& p, int trials = 50, std::uint64_t seed = 1);

}  // namespace tensorial
