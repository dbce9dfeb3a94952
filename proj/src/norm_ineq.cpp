#include "ripkit/norm_ineq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ripkit/error.hpp"
#include "ripkit/random.hpp"

namespace ripkit {

NormGapReport norm_gap(const Vector& x) {
  if (x.size() == 0) throw Error(ErrorCode::kEmptyVector, "norm_gap of empty vector");
  const double n = static_cast<double>(x.size());
  const double root_n = std::sqrt(n);
  const Vector mag = x.cwiseAbs();

  NormGapReport r;
  r.n = x.size();
  r.gap = x.norm() - mag.sum() / root_n;
  r.bound = root_n / 4.0 * (mag.maxCoeff() - mag.minCoeff());
  const double scale = std::max(1.0, r.bound);
  r.holds = r.gap <= r.bound + kNormEqualityTol * scale;
  r.equality = std::abs(r.gap - r.bound) <= kNormEqualityTol * scale;
  return r;
}

Vector extremal_vector(Index m, double magnitude, const SupportSet& positions) {
  if (m < 1) throw Error(ErrorCode::kArityMismatch, "m must be positive");
  if (!(magnitude > 0.0) || !std::isfinite(magnitude)) {
    throw Error(ErrorCode::kInvalidArgument, "magnitude must be positive and finite");
  }
  if (positions.universe() != 4 * m || static_cast<Index>(positions.size()) != m) {
    throw Error(ErrorCode::kArityMismatch,
                "need exactly m = " + std::to_string(m) + " positions in universe " +
                    std::to_string(4 * m) + ", got " + std::to_string(positions.size()) +
                    " in universe " + std::to_string(positions.universe()));
  }
  Vector x = Vector::Zero(4 * m);
  for (Index i : positions) x(i) = magnitude;
  return x;
}

double corollary_bound(const Vector& x) {
  if (x.size() == 0) throw Error(ErrorCode::kEmptyVector, "corollary_bound of empty vector");
  const double root_n = std::sqrt(static_cast<double>(x.size()));
  return x.lpNorm<1>() / root_n + root_n / 4.0 * x.lpNorm<Eigen::Infinity>();
}

bool matches_equality_pattern(const Vector& x) {
  if (x.size() == 0) return false;
  const Vector mag = x.cwiseAbs();
  const double top = mag.maxCoeff();
  const double tol = kNormEqualityTol * std::max(1.0, top);
  if (top - mag.minCoeff() <= tol) return true;
  if (x.size() % 4 != 0) return false;
  Index nonzero = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (mag(i) <= tol) continue;
    if (top - mag(i) > tol) return false;
    ++nonzero;
  }
  return nonzero == x.size() / 4;
}

nlohmann::json to_json(const NormGapReport& r) {
  return {{"n", r.n},
          {"gap", r.gap},
          {"bound", r.bound},
          {"holds", r.holds},
          {"equality", r.equality}};
}

NormSuiteResult run_norm_suite(int trials, const std::vector<Index>& dims, std::uint64_t seed) {
  if (dims.empty()) throw Error(ErrorCode::kInvalidArgument, "dims must not be empty");
  for (Index d : dims) {
    if (d < 1) throw Error(ErrorCode::kInvalidArgument, "dims must be positive");
  }
  NormSuiteResult out;
  auto tally = [&out](const NormGapReport& r, const Vector& x) {
    const double tol = kNormEqualityTol * std::max(1.0, r.bound);
    if (r.gap < -tol) ++out.lower_violations;
    if (!r.holds) ++out.upper_violations;
    if (r.equality) {
      ++out.equality_hits;
      if (!matches_equality_pattern(x)) ++out.pattern_mismatches;
    }
  };

  for (int i = 0; i < trials; ++i) {
    Rng rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
    const Index n = dims[static_cast<std::size_t>(i) % dims.size()];
    Vector x(n);
    const int law = i % 4;
    for (Index j = 0; j < n; ++j) {
      switch (law) {
        case 0:
          x(j) = rng.normal();
          break;
        case 1:
          x(j) = std::tan(std::numbers::pi * (rng.uniform() - 0.5));
          break;
        case 2:
          x(j) = rng.uniform() < 0.6 ? 0.0 : rng.normal();
          break;
        default:
          x(j) = rng.sign() * 2.5;
          break;
      }
    }
    tally(norm_gap(x), x);
    ++out.vectors;
  }

  const Index top = *std::max_element(dims.begin(), dims.end());
  Rng rng(trial_seed(seed, static_cast<std::uint64_t>(trials)));
  for (Index m = 1; 4 * m <= top; ++m) {
    const SupportSet positions(random_support(rng, 4 * m, m), 4 * m);
    const double magnitude = 0.1 + 10.0 * rng.uniform();
    Vector x = extremal_vector(m, magnitude, positions);
    for (Index j = 0; j < x.size(); ++j) x(j) *= rng.sign();
    ++out.extremal_checked;
    if (!norm_gap(x).equality) ++out.extremal_failures;
  }
  return out;
}

nlohmann::json to_json(const NormSuiteResult& r) {
  return {{"vectors", r.vectors},
          {"lower_violations", r.lower_violations},
          {"upper_violations", r.upper_violations},
          {"equality_hits", r.equality_hits},
          {"pattern_mismatches", r.pattern_mismatches},
          {"extremal_checked", r.extremal_checked},
          {"extremal_failures", r.extremal_failures},
          {"passed", r.passed()}};
}

}  // namespace ripkit
