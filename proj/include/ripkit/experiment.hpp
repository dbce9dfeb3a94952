#pragma once

// Seeded recovery experiments and phase diagrams.
//
// Config (JSON):
//   ensemble            gaussian | bernoulli | perturbed_orthogonal | simplex |
//                       identity_hadamard | counterexample
//   n, p, k             integer or list; trials cycle through the grid n x p x k.
//                       p may be omitted for kinds whose p is fixed by n, and
//                       n and p for counterexample (n = 2k-1, p = 2k).
//   constraint          {type: equality|l2|dantzig, epsilon|lambda} or a list;
//                       every trial solves each listed program on the same signal
//   trials, master_seed
//   compute_exact_rip   default true; compute_theta (theta_{k,k}) default false
//   success_threshold   default 1e-6 on ||b_hat - b||_2
//   bound_slack         default 1e-6, added to error bounds when checking them
//   normalization, perturbation, signal (rademacher|gaussian|flat), budget, threads
//
// Trial i draws everything from Rng(trial_seed(master_seed, i)) in order:
// matrix, signal, then one noise vector per constraint. l2 noise has
// ||z||_2 = epsilon; Dantzig noise has ||Phi'z||_inf = lambda. On
// counterexample matrices even trials use beta1 and odd trials beta2.
//
// A trial is a soundness violation when exact delta_k < 0.307 (k >= 2) and the
// error exceeds the implied bound plus bound_slack.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ripkit/ensembles.hpp"
#include "ripkit/recovery.hpp"

namespace ripkit {

struct ExperimentConfig {
  std::string ensemble = "gaussian";
  std::vector<Index> n;
  std::vector<Index> p;  // empty when derived from n or k
  std::vector<Index> k;
  Normalization normalization = Normalization::kUnitL2;
  double perturbation = 0.0;
  SignalLaw signal = SignalLaw::kRademacher;
  std::vector<Constraint> constraints;
  int trials = 0;
  std::uint64_t master_seed = 0;
  bool compute_exact_rip = true;
  bool compute_theta = false;
  double success_threshold = 1e-6;
  double bound_slack = 1e-6;
  std::uint64_t budget = 1'000'000;
  unsigned threads = 0;
  SolverOptions solver;
  std::string hash;  // of the canonical config, excluding `threads`
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct GridPoint {
  Index n = 0;
  Index p = 0;
  Index k = 0;
};

// All (n, p, k) combinations in trial order. Throws kInvalidArgument on a
// combination the ensemble cannot produce.
std::vector<GridPoint> experiment_grid(const ExperimentConfig& cfg);

struct TrialOutcome {
  std::string constraint;
  double noise_level = 0.0;
  double error_l2 = 0.0;  // NaN when the solver failed
  bool success = false;
  std::optional<bool> condition_holds;  // absent without exact delta_k or for k = 1
  std::optional<double> bound;          // present when the condition holds
  std::optional<bool> bound_satisfied;
  bool converged = false;
  bool nonunique = false;
  int iterations = 0;
  double kkt_gap = 0.0;
  std::string solver_error;

  bool violation() const { return condition_holds.value_or(false) && !bound_satisfied.value_or(false); }
};

struct ExperimentRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string ensemble;
  Index n = 0;
  Index p = 0;
  Index k = 0;
  std::string matrix_id;
  std::optional<double> delta_k;
  std::optional<double> theta_k_k;
  std::string rip_error;  // e.g. budget exceeded
  std::vector<TrialOutcome> outcomes;

  bool violation() const;
};

struct ExperimentResult {
  std::vector<ExperimentRecord> records;  // ordered by trial index
  std::size_t soundness_violations = 0;
  double wall_time_seconds = 0.0;
};

ExperimentResult run_recovery_experiment(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentRecord& r);
void write_records_jsonl(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_summary_csv(std::ostream& os, const ExperimentConfig& cfg, const ExperimentResult& result);
// Writes records.jsonl and summary.csv into `dir` (created if needed).
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                              const ExperimentResult& result);

struct PhaseCell {
  GridPoint point;
  int trials = 0;
  int successes = 0;
  int rip_computed = 0;
  int qualifying = 0;  // trials with delta_k < 0.307
  int qualifying_successes = 0;
  int rip_errors = 0;
  double mean_delta = 0.0;  // NaN when no delta was computed
};

struct PhaseDiagramResult {
  std::vector<PhaseCell> cells;
  std::size_t soundness_violations = 0;
};

// Runs `trials` trials per grid cell against the first constraint. Cell c
// uses master seed trial_seed(master_seed, c).
PhaseDiagramResult run_phase_diagram(const ExperimentConfig& cfg);

// Long format: n,p,k,k_over_n,n_over_p,trials,successes,success_rate,
// mean_delta,rip_computed,qualifying,qualifying_successes,rip_errors
void write_phase_csv(std::ostream& os, const PhaseDiagramResult& result);

}  // namespace ripkit
