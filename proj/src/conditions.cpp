#include "ripkit/conditions.hpp"

#include <cmath>

#include "ripkit/error.hpp"

namespace ripkit {

namespace {

void require(bool ok, std::vector<std::string>& failures, std::string what) {
  if (!ok) failures.push_back(std::move(what));
}

void throw_if_any(const std::vector<std::string>& failures, const std::string& context) {
  if (failures.empty()) return;
  std::string msg = context + ":";
  for (const auto& f : failures) msg += " " + f + ";";
  msg.pop_back();
  throw Error(ErrorCode::kPreconditionViolated, msg);
}

void check_delta_inputs(double delta, Index k, double noise, const char* noise_name) {
  std::vector<std::string> failures;
  require(k > 1, failures, "k > 1");
  require(delta >= 0.0 && delta <= 1.0, failures, "0 <= delta <= 1");
  require(noise >= 0.0 && std::isfinite(noise), failures, std::string(noise_name) + " >= 0");
  throw_if_any(failures, "delta condition");
}

}  // namespace

double refined_constant() { return 1.0 + 23.0 / (2.0 * std::sqrt(26.0)); }

double TFactor::value() const {
  return static_cast<double>(numerator) / (4.0 * std::sqrt(static_cast<double>(radicand)));
}

std::pair<std::int64_t, std::int64_t> TFactor::squared() const {
  __int128 num = static_cast<__int128>(numerator) * numerator;
  __int128 den = static_cast<__int128>(16) * radicand;
  __int128 a = num, b = den;
  while (b != 0) {
    const __int128 r = a % b;
    a = b;
    b = r;
  }
  num /= a;
  den /= a;
  if (num > INT64_MAX || den > INT64_MAX) {
    throw Error(ErrorCode::kInvalidArgument, "t^2 does not fit in 64-bit integers");
  }
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

TFactor t_factor_exact(Index k, Index k1, Index k2) {
  std::vector<std::string> failures;
  require(k >= 1, failures, "k >= 1");
  require(k1 >= k, failures, "k1 >= k");
  require(k2 >= 1, failures, "k2 >= 1");
  require(8 * (k1 - k) <= k2, failures, "8(k1 - k) <= k2");
  throw_if_any(failures, "t_factor(" + std::to_string(k) + "," + std::to_string(k1) + "," +
                             std::to_string(k2) + ")");
  return {8 * k - 4 * k1 + k2, static_cast<std::int64_t>(k1) * k2};
}

double t_factor(Index k, Index k1, Index k2) { return t_factor_exact(k, k1, k2).value(); }

Index scaled_sparsity(Index k, Index num, Index den) {
  if (den <= 0 || num < 0 || k < 0) {
    throw Error(ErrorCode::kInvalidArgument, "scaled_sparsity needs k, num >= 0 and den > 0");
  }
  return (k * num + den - 1) / den;
}

std::vector<SplitRow> standard_splits(Index k) {
  struct Choice {
    const char* label;
    Index k1_num, k1_den, k2_num, k2_den;
  };
  static constexpr Choice kChoices[] = {
      {"k1=k,k2=k", 1, 1, 1, 1},
      {"k1=k,k2=4k/9", 1, 1, 4, 9},
      {"k1=9k/8,k2=k", 9, 8, 1, 1},
      {"k1=8k/7,k2=8k/7", 8, 7, 8, 7},
  };
  std::vector<SplitRow> rows;
  for (const auto& c : kChoices) {
    SplitRow row{c.label, scaled_sparsity(k, c.k1_num, c.k1_den),
                  scaled_sparsity(k, c.k2_num, c.k2_den), std::nullopt};
    try {
      row.t = t_factor_exact(k, row.k1, row.k2);
    } catch (const Error&) {
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double a_factor_curve(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "a_factor_curve needs 0 < x < 1");
  }
  return 1.0 + (1.0 / std::sqrt(1.0 - x)) * (1.0 / std::sqrt(x) + std::sqrt(x) / 4.0);
}

AFactor a_factor(Index k) {
  if (k < 2) {
    throw Error(ErrorCode::kPreconditionViolated, "a_factor needs k >= 2, got " + std::to_string(k));
  }
  const double kd = static_cast<double>(k);
  AFactor out;
  out.k = k;
  if (k <= 3) {
    out.k2 = 1;
    out.t = std::sqrt(kd);
  } else {
    const Index r = (4 * k) % 9;
    out.k2 = r <= 4 ? (4 * k) / 9 : (4 * k + 8) / 9;
    const double k2d = static_cast<double>(out.k2);
    out.t = std::sqrt(kd / k2d) + 0.25 * std::sqrt(k2d / kd);
  }
  out.a = 1.0 + out.t * std::sqrt(kd / static_cast<double>(k - out.k2));
  return out;
}

ConditionReport check_split_condition(const RipProfile& profile, Index k, Index k1, Index k2,
                                      double epsilon) {
  const TFactor tf = t_factor_exact(k, k1, k2);
  const double t = tf.value();
  const double delta = profile.delta_value(k1);
  const double theta = profile.has_theta(k1, k2) || !profile.has_theta(k2, k1)
                           ? profile.theta_value(k1, k2)
                           : profile.theta_value(k2, k1);
  ConditionReport r;
  r.condition_id = "split_block";
  r.inputs = {{"k", static_cast<double>(k)},  {"k1", static_cast<double>(k1)},
              {"k2", static_cast<double>(k2)}, {"t", t},
              {"delta_k1", delta},             {"theta_k1_k2", theta},
              {"epsilon", epsilon}};
  r.lhs = delta + t * theta;
  r.threshold = 1.0;
  r.holds = r.lhs < r.threshold;
  if (r.holds) {
    r.error_bound_coefficient = 2.0 * std::sqrt(2.0) * std::sqrt(1.0 + delta) / (1.0 - r.lhs);
    r.error_bound = *r.error_bound_coefficient * epsilon;
  }
  return r;
}

ConditionReport check_delta_condition(double delta, Index k, double epsilon) {
  check_delta_inputs(delta, k, epsilon, "epsilon");
  ConditionReport r;
  r.condition_id = "delta_threshold";
  r.inputs = {{"k", static_cast<double>(k)}, {"delta_k", delta}, {"epsilon", epsilon}};
  r.lhs = delta;
  r.threshold = kDeltaThreshold;
  r.holds = delta < kDeltaThreshold;
  if (r.holds) {
    r.error_bound_coefficient = 1.0 / (kDeltaThreshold - delta);
    r.error_bound = epsilon / (kDeltaThreshold - delta);
    r.refined_error_bound =
        2.0 * std::sqrt(2.0) * std::sqrt(1.0 + delta) / (1.0 - refined_constant() * delta) * epsilon;
  }
  return r;
}

ConditionReport check_dantzig_condition(double delta, Index k, double lambda) {
  check_delta_inputs(delta, k, lambda, "lambda");
  ConditionReport r;
  r.condition_id = "delta_threshold_dantzig";
  r.inputs = {{"k", static_cast<double>(k)}, {"delta_k", delta}, {"lambda", lambda}};
  r.lhs = delta;
  r.threshold = kDeltaThreshold;
  r.holds = delta < kDeltaThreshold;
  if (r.holds) {
    r.error_bound_coefficient = std::sqrt(static_cast<double>(k)) / (kDeltaThreshold - delta);
    r.error_bound = *r.error_bound_coefficient * lambda;
  }
  return r;
}

double general_signal_bound(double delta, double epsilon, double tail_l1, Index k) {
  std::vector<std::string> failures;
  require(k >= 1, failures, "k >= 1");
  require(delta >= 0.0 && delta < kDeltaThreshold, failures, "0 <= delta < 0.307");
  require(epsilon >= 0.0, failures, "epsilon >= 0");
  require(tail_l1 >= 0.0, failures, "tail_l1 >= 0");
  throw_if_any(failures, "general_signal_bound");
  const double gap = kDeltaThreshold - delta;
  return epsilon / gap + tail_l1 / (std::sqrt(static_cast<double>(k)) * gap);
}

nlohmann::json to_json(const ConditionReport& r) {
  nlohmann::json j{{"condition_id", r.condition_id},
                   {"inputs", r.inputs},
                   {"lhs", r.lhs},
                   {"threshold", r.threshold},
                   {"holds", r.holds}};
  j["error_bound_coefficient"] =
      r.error_bound_coefficient ? nlohmann::json(*r.error_bound_coefficient) : nlohmann::json();
  if (r.error_bound) j["error_bound"] = *r.error_bound;
  if (r.refined_error_bound) j["refined_error_bound"] = *r.refined_error_bound;
  return j;
}

}  // namespace ripkit
