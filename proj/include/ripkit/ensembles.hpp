#pragma once

// Seeded random sensing matrices and sparse signals.
//
// Ensembles:
//   gaussian              iid N(0,1) entries drawn row by row, then normalized
//   bernoulli             iid +-1/sqrt(n) entries
//   perturbed_orthogonal  p = n: Haar orthogonal Q
//   simplex               p = n + 1: n + 1 equiangular unit vectors with mutual
//                         inner product -1/n, randomly rotated
//   identity_hadamard     p = 2n: Q [I | H D / sqrt(n)] with H a Hadamard
//                         matrix and D random column signs
// The last three add `perturbation` * iid N(0,1) and rescale columns to unit
// norm. Their exact Gram structure gives small restricted isometry constants
// at dimensions where Gaussian matrices almost never have them.

#include <cstdint>
#include <string>

#include "ripkit/linalg.hpp"
#include "ripkit/random.hpp"

namespace ripkit {

enum class EnsembleKind { kGaussian, kBernoulli, kPerturbedOrthogonal, kSimplex, kIdentityHadamard };
enum class Normalization { kUnitL2, kScaleSqrtN };
enum class SignalLaw { kRademacher, kGaussian, kFlat };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kGaussian;
  Index n = 0;
  Index p = 0;
  Normalization normalization = Normalization::kUnitL2;  // gaussian only
  double perturbation = 0.0;                             // structured kinds only
  std::uint64_t seed = 0;
};

EnsembleKind parse_ensemble_kind(const std::string& s);
std::string to_string(EnsembleKind k);
Normalization parse_normalization(const std::string& s);
std::string to_string(Normalization n);
SignalLaw parse_signal_law(const std::string& s);
std::string to_string(SignalLaw l);

// Throws kInvalidArgument when the dimensions do not fit the kind.
void validate(const EnsembleSpec& spec);

SensingMatrix generate_matrix(const EnsembleSpec& spec);
SensingMatrix generate_matrix(const EnsembleSpec& spec, Rng& rng);

// Exactly k nonzeros on a uniform random support. Values: +-1 (rademacher),
// N(0,1) (gaussian) or uniform on [-1, 1] (flat); zero draws are redrawn.
Vector generate_sparse_signal(Index p, Index k, SignalLaw law, std::uint64_t seed);
Vector generate_sparse_signal(Index p, Index k, SignalLaw law, Rng& rng);

// Sylvester construction for powers of two, Paley construction for q + 1
// with q prime and q = 3 mod 4. Throws kInvalidArgument for other orders.
Matrix hadamard_matrix(Index order);
bool hadamard_order_supported(Index order);

Matrix random_orthogonal(Index n, Rng& rng);

// Columns rescaled to unit l2 norm.
Matrix normalize_columns(Matrix m);

}  // namespace ripkit
