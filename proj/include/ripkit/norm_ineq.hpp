#pragma once

// The l1/l2 norm gap bound: for x in R^n,
//
//   0 <= ||x||_2 - ||x||_1 / sqrt(n) <= (sqrt(n)/4) (max|x_i| - min|x_i|),
//
// with equality on the right when all |x_i| agree, or when n = 4m and x has
// exactly m nonzeros of equal magnitude.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ripkit/linalg.hpp"

namespace ripkit {

inline constexpr double kNormEqualityTol = 1e-12;

struct NormGapReport {
  Index n = 0;
  double gap = 0.0;    // ||x||_2 - ||x||_1 / sqrt(n)
  double bound = 0.0;  // (sqrt(n)/4)(max|x_i| - min|x_i|)
  bool holds = true;
  bool equality = false;
};

NormGapReport norm_gap(const Vector& x);

// x in R^{4m} with |x_i| = magnitude on `positions` (size m) and 0 elsewhere.
Vector extremal_vector(Index m, double magnitude, const SupportSet& positions);

// ||x||_1 / sqrt(n) + (sqrt(n)/4) ||x||_inf, an upper bound on ||x||_2.
double corollary_bound(const Vector& x);

// True when |x| matches one of the two equality patterns above (magnitudes
// compared to relative kNormEqualityTol).
bool matches_equality_pattern(const Vector& x);

nlohmann::json to_json(const NormGapReport& r);

struct NormSuiteResult {
  int vectors = 0;
  int lower_violations = 0;   // gap < -tol
  int upper_violations = 0;   // gap > bound + tol
  int equality_hits = 0;      // random vectors flagged as attaining the bound
  int pattern_mismatches = 0; // equality hits outside the characterized patterns
  int extremal_checked = 0;
  int extremal_failures = 0;  // extremal constructions missing equality

  bool passed() const {
    return lower_violations == 0 && upper_violations == 0 && pattern_mismatches == 0 &&
           extremal_failures == 0;
  }
};

// Seeded property sweep: `trials` random vectors with dimensions cycling
// through `dims` (Gaussian, heavy-tailed, sparse and equal-magnitude draws,
// random signs), plus extremal vectors with random sign flips for every
// m with 4m <= max(dims).
NormSuiteResult run_norm_suite(int trials, const std::vector<Index>& dims, std::uint64_t seed);

nlohmann::json to_json(const NormSuiteResult& r);

}  // namespace ripkit
