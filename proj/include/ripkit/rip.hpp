#pragma once

// Exact restricted isometry constants delta_k and restricted orthogonality
// constants theta_{k,k'} by exhaustive support enumeration.
//
// delta_k = max over |T| = k of max(lambda_max(G_T) - 1, 1 - lambda_min(G_T)),
// with G_T = Phi_T' Phi_T. Supports smaller than k need not be visited: Gram
// eigenvalues of nested supports interlace, so the extremes over |T| <= k are
// attained at |T| = k.
//
// theta_{k,k'} = max over disjoint |T| = k, |T'| = k' of sigma_max(Phi_T' Phi_T').

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "ripkit/linalg.hpp"

namespace ripkit {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000;

struct RipOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  unsigned threads = 0;  // 0 = hardware concurrency
  double eig_tol = kDefaultEigTol;
};

struct DeltaEntry {
  Index k = 0;
  double value = 0.0;
  SupportSet witness;
  // Extreme Gram eigenvalues over all |T| = k, i.e. Lambda_min(k) and
  // Lambda_max(k). Absent on profiles imported without them.
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
};

struct ThetaEntry {
  Index k = 0;
  Index k2 = 0;
  double value = 0.0;
  SupportSet witness_a;  // |witness_a| = k
  SupportSet witness_b;  // |witness_b| = k2, disjoint from witness_a
};

struct RipProfile {
  std::string matrix_id;
  Index n = 0;
  Index p = 0;
  std::map<Index, DeltaEntry> delta;
  std::map<std::pair<Index, Index>, ThetaEntry> theta;

  // Throw kMissingProfileEntry when absent.
  double delta_value(Index k) const;
  double theta_value(Index k, Index k2) const;
  bool has_delta(Index k) const { return delta.contains(k); }
  bool has_theta(Index k, Index k2) const { return theta.contains({k, k2}); }
};

std::uint64_t delta_enumeration_count(Index p, Index k);
std::uint64_t theta_enumeration_count(Index p, Index k, Index k2);

// Deviation of the Gram spectrum on one support from 1.
double delta_on_support(const SensingMatrix& phi, const SupportSet& t,
                        double eig_tol = kDefaultEigTol);

DeltaEntry delta_exact(const SensingMatrix& phi, Index k, const RipOptions& opts = {});
ThetaEntry theta_exact(const SensingMatrix& phi, Index k, Index k2,
                       const RipOptions& opts = {});

// Thread-safe memo of per-matrix entries keyed by matrix content hash.
// Inserts are insert-if-absent.
class ProfileCache {
 public:
  std::optional<DeltaEntry> find_delta(const std::string& id, Index k) const;
  std::optional<ThetaEntry> find_theta(const std::string& id, Index k, Index k2) const;
  void insert_delta(const std::string& id, const DeltaEntry& e);
  void insert_theta(const std::string& id, const ThetaEntry& e);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, Index>, DeltaEntry> delta_;
  std::map<std::tuple<std::string, Index, Index>, ThetaEntry> theta_;
};

// Lazily computes and memoizes the constants of one matrix.
class RipEngine {
 public:
  explicit RipEngine(SensingMatrix phi, RipOptions opts = {},
                     ProfileCache* cache = nullptr);
  // Resumes from a previously exported profile; throws kInvalidArgument when
  // the profile belongs to a different matrix.
  RipEngine(SensingMatrix phi, RipProfile seed, RipOptions opts = {});

  const SensingMatrix& matrix() const { return phi_; }
  const RipProfile& profile() const { return profile_; }
  const RipOptions& options() const { return opts_; }

  const DeltaEntry& delta(Index k);
  const ThetaEntry& theta(Index k, Index k2);

 private:
  SensingMatrix phi_;
  RipOptions opts_;
  ProfileCache* cache_ = nullptr;
  RipProfile profile_;
};

nlohmann::json profile_to_json(const RipProfile& profile);
RipProfile profile_from_json(const nlohmann::json& j);

}  // namespace ripkit
