#pragma once

// Sufficient conditions for stable l1 recovery and the error bounds they
// imply.
//
// Split-block condition, for k1 >= k, 8(k1 - k) <= k2:
//
//   delta_{k1} + t theta_{k1,k2} < 1,
//   t = sqrt(k1/k2) + sqrt(k2/k1)/4 - 2(k1 - k)/sqrt(k1 k2)
//     = (8k - 4k1 + k2) / (4 sqrt(k1 k2)),
//
// giving ||b - b_hat|| <= 2 sqrt2 sqrt(1 + delta_{k1}) / (1 - delta_{k1} - t theta) * eps.
//
// Single-constant condition delta_k < 0.307 (k >= 2), giving
// ||b - b_hat|| <= eps / (0.307 - delta_k) for BPDN and
// sqrt(k) lambda / (0.307 - delta_k) for the Dantzig selector.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ripkit/rip.hpp"

namespace ripkit {

inline constexpr double kDeltaThreshold = 0.307;

// C0 = 1 + 23 / (2 sqrt 26), the supremum of A_k over k >= 7.
double refined_constant();

// t = numerator / (4 sqrt(radicand)) with integers, so t^2 is rational.
struct TFactor {
  std::int64_t numerator = 0;  // 8k - 4k1 + k2
  std::int64_t radicand = 0;   // k1 k2

  double value() const;
  // t^2 as a reduced fraction (num, den).
  std::pair<std::int64_t, std::int64_t> squared() const;
};

// Throws kPreconditionViolated naming every violated precondition.
TFactor t_factor_exact(Index k, Index k1, Index k2);
double t_factor(Index k, Index k1, Index k2);

// ceil(k * num / den), the sparsity index used for fractional multiples of k.
Index scaled_sparsity(Index k, Index num, Index den);

struct SplitRow {
  std::string label;  // e.g. "k1=9k/8,k2=k"
  Index k1 = 0;
  Index k2 = 0;
  std::optional<TFactor> t;  // absent when the rounded indices break the preconditions
};

// The four standard (k1, k2) choices: (k, k), (k, 4k/9), (9k/8, k),
// (8k/7, 8k/7), with ceilings.
std::vector<SplitRow> standard_splits(Index k);

// f(x) = 1 + (1/sqrt(1 - x)) (1/sqrt(x) + sqrt(x)/4) on (0, 1).
double a_factor_curve(double x);

struct AFactor {
  Index k = 0;
  Index k2 = 0;
  double t = 0.0;
  double a = 0.0;
};

// k2 from r_k = 4k mod 9: floor(4k/9) when r_k <= 4, else ceil(4k/9);
// t = sqrt(k/k2) + sqrt(k2/k)/4 and A_k = 1 + t sqrt(k/(k - k2)).
// For k = 2, 3: k2 = 1 and t = sqrt(k). Throws kPreconditionViolated for k < 2.
AFactor a_factor(Index k);

struct ConditionReport {
  std::string condition_id;
  std::map<std::string, double> inputs;
  double lhs = 0.0;
  double threshold = 0.0;
  bool holds = false;                              // lhs < threshold
  std::optional<double> error_bound_coefficient;   // present iff holds
  std::optional<double> error_bound;               // coefficient * noise level
  std::optional<double> refined_error_bound;       // delta condition only
};

// delta_{k1} + t theta_{k1,k2} < 1. theta is looked up under (k1, k2) or
// (k2, k1). Throws kMissingProfileEntry / kPreconditionViolated.
ConditionReport check_split_condition(const RipProfile& profile, Index k, Index k1, Index k2,
                                      double epsilon = 0.0);

// delta_k < 0.307 for BPDN with noise level epsilon. Also reports the sharper
// 2 sqrt2 sqrt(1 + delta) / (1 - C0 delta) * eps. Requires k >= 2, delta in [0, 1].
ConditionReport check_delta_condition(double delta, Index k, double epsilon = 0.0);

// Same condition for the Dantzig selector, coefficient sqrt(k) / (0.307 - delta)
// multiplying lambda.
ConditionReport check_dantzig_condition(double delta, Index k, double lambda = 0.0);

// eps / (0.307 - delta) + tail_l1 / (sqrt(k) (0.307 - delta)), where tail_l1 is
// the l1 norm of the signal outside its k largest entries.
double general_signal_bound(double delta, double epsilon, double tail_l1, Index k);

nlohmann::json to_json(const ConditionReport& r);

}  // namespace ripkit
