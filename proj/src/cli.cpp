#include "ripkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ripkit/audit.hpp"
#include "ripkit/conditions.hpp"
#include "ripkit/counterexample.hpp"
#include "ripkit/error.hpp"
#include "ripkit/experiment.hpp"
#include "ripkit/matrix_io.hpp"
#include "ripkit/norm_ineq.hpp"
#include "ripkit/recovery.hpp"
#include "ripkit/rip.hpp"

namespace ripkit {

namespace {

constexpr double kBoundSlack = 1e-6;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t budget_from_env() {
  const char* v = std::getenv("RIPKIT_BUDGET");
  if (v == nullptr || *v == '\0') return kDefaultEnumerationBudget;
  char* end = nullptr;
  const unsigned long long b = std::strtoull(v, &end, 10);
  if (*end != '\0' || b == 0) throw UsageError(std::string("invalid RIPKIT_BUDGET '") + v + "'");
  return b;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  try {
    nlohmann::json j;
    is >> j;
    return j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParseError, path + ": " + ex.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  os << text;
}

// ---------------------------------------------------------------------------

struct RipArgs {
  std::string matrix;
  std::vector<Index> ks;
  std::vector<Index> theta;
  Index audit = 0;
  std::string audit_out;
  std::string json_out;
  unsigned threads = 0;
};

int cmd_rip(const RipArgs& a, std::ostream& out) {
  if (!a.theta.empty() && a.theta.size() % 2 != 0) throw UsageError("--theta takes pairs K K2");
  const SensingMatrix phi(read_matrix_csv(std::filesystem::path(a.matrix)));
  RipEngine engine(phi, RipOptions{budget_from_env(), a.threads, kDefaultEigTol});
  const bool json_stdout = a.json_out == "-";
  std::ostringstream human;

  for (Index k : a.ks) {
    const DeltaEntry& e = engine.delta(k);
    human << "delta_" << k << " = " << format_double(e.value) << "  witness " << e.witness.to_string();
    if (e.lambda_min && e.lambda_max) {
      human << "  lambda_min " << format_double(*e.lambda_min) << "  lambda_max "
            << format_double(*e.lambda_max);
    }
    human << '\n';
  }
  for (std::size_t i = 0; i + 1 < a.theta.size(); i += 2) {
    const ThetaEntry& e = engine.theta(a.theta[i], a.theta[i + 1]);
    human << "theta_" << e.k << ',' << e.k2 << " = " << format_double(e.value) << "  witness "
          << e.witness_a.to_string() << ' ' << e.witness_b.to_string() << '\n';
  }

  int code = kExitOk;
  if (a.audit > 0) {
    const InequalityAuditReport report = audit_inequalities(engine, a.audit);
    std::ostringstream csv;
    write_audit_csv(csv, report);
    if (!a.audit_out.empty()) {
      write_text(a.audit_out, csv.str());
    } else if (!json_stdout) {
      human << csv.str();
    }
    human << "audit: " << report.entries.size() << " inequalities, " << report.violations()
          << " violations\n";
    if (!report.all_hold()) code = kExitFailure;
  }

  const std::string profile = profile_to_json(engine.profile()).dump(2) + "\n";
  if (json_stdout) {
    out << profile;
  } else {
    out << human.str();
    if (!a.json_out.empty()) write_text(a.json_out, profile);
  }
  return code;
}

// ---------------------------------------------------------------------------

struct RecoverArgs {
  std::string problem;
  std::string solver;
  bool check_conditions = false;
  Index k = 0;
};

int cmd_recover(const RecoverArgs& a, std::ostream& out) {
  const std::filesystem::path path(a.problem);
  RecoveryProblem problem =
      problem_from_json(read_json_file(a.problem), path.parent_path().string().empty()
                                                       ? std::string(".")
                                                       : path.parent_path().string());
  if (a.solver == "bp") {
    problem.constraint = EqualityConstraint{};
  } else if (a.solver == "bpdn" && !std::holds_alternative<L2BallConstraint>(problem.constraint)) {
    throw UsageError("--solver bpdn needs a problem with constraint type l2 and epsilon");
  } else if (a.solver == "ds" && !std::holds_alternative<DantzigBoxConstraint>(problem.constraint)) {
    throw UsageError("--solver ds needs a problem with constraint type dantzig and lambda");
  }

  const RecoverySolution sol = solve(problem);
  nlohmann::json result = solution_to_json(sol);
  if (!a.check_conditions) {
    out << result.dump(2) << '\n';
    return kExitOk;
  }

  Index k = a.k;
  if (k == 0 && problem.beta_true) {
    k = static_cast<Index>((problem.beta_true->array() != 0.0).count());
  }
  if (k < 1) throw UsageError("--check-conditions needs --k or a problem with beta_true");

  RipEngine engine(problem.phi, RipOptions{budget_from_env(), 0, kDefaultEigTol});
  const double delta = engine.delta(k).value;
  const double noise = std::holds_alternative<L2BallConstraint>(problem.constraint)
                           ? std::get<L2BallConstraint>(problem.constraint).epsilon
                           : std::holds_alternative<DantzigBoxConstraint>(problem.constraint)
                                 ? std::get<DantzigBoxConstraint>(problem.constraint).lambda
                                 : 0.0;
  std::vector<ConditionReport> reports;
  nlohmann::json notes = nlohmann::json::array();
  if (k < 2) {
    notes.push_back("delta condition needs k >= 2");
  } else if (std::holds_alternative<DantzigBoxConstraint>(problem.constraint)) {
    reports.push_back(check_dantzig_condition(std::min(delta, 1.0), k, noise));
  } else {
    reports.push_back(check_delta_condition(std::min(delta, 1.0), k, noise));
  }
  if (!std::holds_alternative<DantzigBoxConstraint>(problem.constraint) && 2 * k <= problem.phi.cols()) {
    engine.theta(k, k);
    reports.push_back(check_split_condition(engine.profile(), k, k, k, noise));
  }

  nlohmann::json conds = nlohmann::json::array();
  nlohmann::json checks = nlohmann::json::array();
  bool breach = false;
  const double err = problem.beta_true ? (sol.beta_hat - *problem.beta_true).norm() : 0.0;
  for (const auto& r : reports) {
    conds.push_back(to_json(r));
    if (problem.beta_true && r.holds && r.error_bound) {
      const bool ok = err <= *r.error_bound + kBoundSlack;
      breach = breach || !ok;
      checks.push_back({{"condition_id", r.condition_id},
                        {"bound", *r.error_bound},
                        {"error_l2", err},
                        {"satisfied", ok}});
    }
  }
  nlohmann::json full{{"solution", result}, {"k", k}, {"delta_k", delta}, {"conditions", conds},
                      {"bound_checks", checks}};
  if (!notes.empty()) full["notes"] = notes;
  out << full.dump(2) << '\n';
  return breach ? kExitFailure : kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_counterexample(Index k, const std::string& dir, std::ostream& out) {
  if (k < 1) throw UsageError("--k must be >= 1");
  const CounterexampleInstance inst = make_counterexample(k);
  const VerificationReport report = verify_instance(inst, RipOptions{budget_from_env(), 0, kDefaultEigTol});
  const std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  const std::string tag = "k" + std::to_string(k);
  write_matrix_csv(base / ("phi_" + tag + ".csv"), inst.phi.matrix());
  write_text((base / ("instance_" + tag + ".json")).string(), instance_to_json(inst, report).dump(2) + "\n");

  out << "counterexample k=" << k << "  n=" << inst.phi.rows() << "  p=" << inst.phi.cols()
      << "  delta_k claimed " << format_double(inst.delta_claimed) << '\n';
  for (const auto& c : report.checks) {
    out << "  " << (c.passed ? "pass" : "FAIL") << "  " << c.claim << "  (" << c.detail << ")\n";
  }
  return report.all_passed() ? kExitOk : kExitFailure;
}

int cmd_experiment(const std::string& cfg_path, const std::string& dir, unsigned threads,
                   std::ostream& out) {
  ExperimentConfig cfg = load_experiment_config(cfg_path);
  if (threads > 0) cfg.threads = threads;
  const ExperimentResult result = run_recovery_experiment(cfg);
  write_experiment_outputs(dir, cfg, result);
  std::ostringstream summary;
  write_summary_csv(summary, cfg, result);
  out << summary.str();
  out << result.records.size() << " trials, " << result.soundness_violations
      << " soundness violations; outputs in " << dir << '\n';
  return result.soundness_violations == 0 ? kExitOk : kExitFailure;
}

int cmd_phase(const std::string& cfg_path, const std::string& out_path, unsigned threads,
              std::ostream& out) {
  ExperimentConfig cfg = load_experiment_config(cfg_path);
  if (threads > 0) cfg.threads = threads;
  const PhaseDiagramResult result = run_phase_diagram(cfg);
  std::ostringstream csv;
  write_phase_csv(csv, result);
  if (out_path.empty()) {
    out << csv.str();
  } else {
    write_text(out_path, csv.str());
    out << result.cells.size() << " cells written to " << out_path << '\n';
  }
  return result.soundness_violations == 0 ? kExitOk : kExitFailure;
}

int cmd_verify_norms(int trials, const std::vector<Index>& dims, std::uint64_t seed, bool json,
                     std::ostream& out) {
  if (trials < 0) throw UsageError("--trials must be >= 0");
  const NormSuiteResult r = run_norm_suite(trials, dims, seed);
  if (json) {
    out << to_json(r).dump(2) << '\n';
  } else {
    out << "vectors " << r.vectors << "  lower violations " << r.lower_violations
        << "  upper violations " << r.upper_violations << "  equality hits " << r.equality_hits
        << "  pattern mismatches " << r.pattern_mismatches << '\n'
        << "extremal constructions " << r.extremal_checked << "  failures " << r.extremal_failures
        << '\n'
        << (r.passed() ? "PASS" : "FAIL") << '\n';
  }
  return r.passed() ? kExitOk : kExitFailure;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kBudgetExceeded:
      return kExitBudget;
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidArity:
    case ErrorCode::kIndexOutOfRange:
    case ErrorCode::kArityMismatch:
    case ErrorCode::kPreconditionViolated:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact restricted isometry constants, l1 recovery and sparse recovery conditions",
               "ripkit"};
  app.require_subcommand(1);

  RipArgs rip;
  auto* rip_cmd = app.add_subcommand("rip", "Exact delta_k / theta_{k,k'} of a matrix CSV");
  rip_cmd->add_option("matrix", rip.matrix, "Matrix CSV (first line rows,cols)")->required();
  rip_cmd->add_option("--k", rip.ks, "Sparsity levels for delta_k")->take_all();
  rip_cmd->add_option("--theta", rip.theta, "Pair K K2 for theta_{K,K2}")->expected(2);
  rip_cmd->add_option("--audit", rip.audit, "Audit all inequalities up to this sparsity");
  rip_cmd->add_option("--audit-out", rip.audit_out, "Write the audit CSV here instead of stdout");
  rip_cmd->add_option("--json", rip.json_out, "Write the profile JSON here ('-' for stdout only)");
  rip_cmd->add_option("--threads", rip.threads, "Worker threads (0 = all cores)");

  RecoverArgs rec;
  auto* rec_cmd = app.add_subcommand("recover", "Solve an l1 recovery problem JSON");
  rec_cmd->add_option("problem", rec.problem, "Problem JSON")->required();
  rec_cmd->add_option("--solver", rec.solver, "bp | bpdn | ds (default: from constraint)")
      ->check(CLI::IsMember({"bp", "bpdn", "ds"}));
  rec_cmd->add_flag("--check-conditions", rec.check_conditions,
                    "Evaluate recovery conditions with exact constants");
  rec_cmd->add_option("--k", rec.k, "Sparsity for condition checks (default: from beta_true)");

  Index ce_k = 0;
  std::string ce_out = ".";
  auto* ce_cmd = app.add_subcommand("counterexample", "Build and verify the delta_k = (k-1)/(2k-1) matrix");
  ce_cmd->add_option("--k", ce_k, "Sparsity k")->required();
  ce_cmd->add_option("--out", ce_out, "Output directory");

  std::string exp_cfg, exp_out = "experiment_out";
  unsigned exp_threads = 0;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a seeded recovery experiment");
  exp_cmd->add_option("config", exp_cfg, "Experiment config JSON")->required();
  exp_cmd->add_option("--out", exp_out, "Output directory for records.jsonl and summary.csv");
  exp_cmd->add_option("--threads", exp_threads, "Worker threads (0 = config / all cores)");

  std::string phase_cfg, phase_out;
  unsigned phase_threads = 0;
  auto* phase_cmd = app.add_subcommand("phase", "Phase diagram over the config grid (CSV)");
  phase_cmd->add_option("config", phase_cfg, "Experiment config JSON (trials per cell)")->required();
  phase_cmd->add_option("--out", phase_out, "CSV output path (default stdout)");
  phase_cmd->add_option("--threads", phase_threads, "Worker threads");

  int norm_trials = 10000;
  std::vector<Index> norm_dims;
  std::uint64_t norm_seed = 1;
  bool norm_json = false;
  auto* norm_cmd = app.add_subcommand("verify-norms", "Property sweep of the l1/l2 norm gap bound");
  norm_cmd->add_option("--trials", norm_trials, "Number of random vectors");
  norm_cmd->add_option("--dims", norm_dims, "Dimensions (default 1..64)")->delimiter(',');
  norm_cmd->add_option("--seed", norm_seed, "Seed");
  norm_cmd->add_flag("--json", norm_json, "Print JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*rip_cmd) return cmd_rip(rip, out);
    if (*rec_cmd) return cmd_recover(rec, out);
    if (*ce_cmd) return cmd_counterexample(ce_k, ce_out, out);
    if (*exp_cmd) return cmd_experiment(exp_cfg, exp_out, exp_threads, out);
    if (*phase_cmd) return cmd_phase(phase_cfg, phase_out, phase_threads, out);
    if (*norm_cmd) {
      if (norm_dims.empty()) {
        for (Index d = 1; d <= 64; ++d) norm_dims.push_back(d);
      }
      return cmd_verify_norms(norm_trials, norm_dims, norm_seed, norm_json, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace ripkit
