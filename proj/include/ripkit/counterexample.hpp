#pragma once

// A (2k-1) x 2k matrix with delta_k = (k-1)/(2k-1) < 1/2 on which two k-sparse
// vectors with disjoint supports have the same image.
//
// Gamma is 2k x 2k with unit diagonal and off-diagonal -1/(2k-1). Its spectrum
// is 0 (eigenvector all-ones) and 2k/(2k-1) with multiplicity 2k-1, so
// Phi = sqrt(2k/(2k-1)) U' over the nonzero eigenvectors U has Phi'Phi = Gamma.
// Every k x k Gram block has eigenvalues k/(2k-1) and 2k/(2k-1) (k-1 times).

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ripkit/rip.hpp"

namespace ripkit {

struct CounterexampleInstance {
  Index k = 0;
  SensingMatrix phi;
  Vector beta1;  // supported on {0..k-1}
  Vector beta2;  // supported on {k..2k-1}
  double delta_claimed = 0.0;
};

double claimed_delta(Index k);

Matrix gamma_matrix(Index k);
SensingMatrix phi_from_gamma(Index k);

// gamma = ones / sqrt(k), beta1 = first half of gamma, beta2 = minus the
// second half, so Phi beta1 = Phi beta2 and ||beta1|| = 1. Throws
// kDegenerateNull when the all-ones vector is not numerically in the null
// space of phi.
std::pair<Vector, Vector> null_split(const SensingMatrix& phi, Index k);

CounterexampleInstance make_counterexample(Index k);

struct VerificationCheck {
  std::string claim;
  bool passed = false;
  double error = 0.0;      // observed deviation
  double tolerance = 0.0;
  std::string detail;
};

struct VerificationReport {
  Index k = 0;
  std::vector<VerificationCheck> checks;

  bool all_passed() const;
  // Throws kAssertionFailure naming the first failed claim.
  void throw_if_failed() const;
};

// Checks: Gram reconstruction, exact delta_k, every k x k block spectrum,
// equal images, disjoint k-sparse supports, and two distinct k-sparse
// preimages found by the l0 oracle.
VerificationReport verify_instance(const CounterexampleInstance& inst, const RipOptions& opts = {});

nlohmann::json instance_to_json(const CounterexampleInstance& inst,
                                const VerificationReport& report);

}  // namespace ripkit
