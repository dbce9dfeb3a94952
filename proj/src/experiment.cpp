#include "ripkit/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ripkit/combinatorics.hpp"
#include "ripkit/conditions.hpp"
#include "ripkit/counterexample.hpp"
#include "ripkit/error.hpp"
#include "ripkit/matrix_io.hpp"
#include "ripkit/rip.hpp"

namespace ripkit {

namespace {

constexpr const char* kCounterexample = "counterexample";

std::vector<Index> index_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& v = j.at(key);
  std::vector<Index> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(x.get<Index>());
  } else {
    out.push_back(v.get<Index>());
  }
  for (Index x : out) {
    if (x < 1) throw Error(ErrorCode::kParseError, std::string(key) + " entries must be >= 1");
  }
  return out;
}

Constraint parse_constraint(const nlohmann::json& c) {
  const std::string type = c.at("type").get<std::string>();
  if (type == "equality") return EqualityConstraint{};
  if (type == "l2") {
    const double eps = c.at("epsilon").get<double>();
    if (!(eps >= 0.0)) throw Error(ErrorCode::kParseError, "epsilon must be >= 0");
    return L2BallConstraint{eps};
  }
  if (type == "dantzig") {
    const double lambda = c.at("lambda").get<double>();
    if (!(lambda >= 0.0)) throw Error(ErrorCode::kParseError, "lambda must be >= 0");
    return DantzigBoxConstraint{lambda};
  }
  throw Error(ErrorCode::kParseError, "unknown constraint type '" + type + "'");
}

double noise_level(const Constraint& c) {
  if (const auto* ball = std::get_if<L2BallConstraint>(&c)) return ball->epsilon;
  if (const auto* box = std::get_if<DantzigBoxConstraint>(&c)) return box->lambda;
  return 0.0;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool derived_p(const std::string& ensemble) {
  return ensemble == kCounterexample || ensemble == "perturbed_orthogonal" ||
         ensemble == "simplex" || ensemble == "identity_hadamard";
}

Index derive_p(const std::string& ensemble, Index n) {
  if (ensemble == "perturbed_orthogonal") return n;
  if (ensemble == "simplex") return n + 1;
  return 2 * n;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

nlohmann::json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string csv_number(double v) {
  return std::isfinite(v) ? format_double(v) : std::string("nan");
}

ExperimentRecord run_trial(const ExperimentConfig& cfg, const GridPoint& pt, int index,
                           std::uint64_t seed) {
  ExperimentRecord rec;
  rec.trial = index;
  rec.seed = seed;
  rec.config_hash = cfg.hash;
  rec.ensemble = cfg.ensemble;
  rec.n = pt.n;
  rec.p = pt.p;
  rec.k = pt.k;

  Rng rng(seed);
  SensingMatrix phi;
  Vector beta;
  if (cfg.ensemble == kCounterexample) {
    CounterexampleInstance inst = make_counterexample(pt.k);
    beta = index % 2 == 0 ? inst.beta1 : inst.beta2;
    phi = std::move(inst.phi);
  } else {
    EnsembleSpec spec{parse_ensemble_kind(cfg.ensemble), pt.n, pt.p, cfg.normalization,
                      cfg.perturbation, seed};
    phi = generate_matrix(spec, rng);
    beta = generate_sparse_signal(pt.p, pt.k, cfg.signal, rng);
  }
  rec.matrix_id = phi.id();

  if (cfg.compute_exact_rip) {
    const RipOptions opts{cfg.budget, 1, kDefaultEigTol};
    try {
      rec.delta_k = delta_exact(phi, pt.k, opts).value;
      if (cfg.compute_theta && 2 * pt.k <= pt.p) rec.theta_k_k = theta_exact(phi, pt.k, pt.k, opts).value;
    } catch (const BudgetExceeded& ex) {
      rec.rip_error = ex.what();
    }
  }
  const bool condition_defined = rec.delta_k && pt.k >= 2;
  const double gap = rec.delta_k ? kDeltaThreshold - *rec.delta_k : 0.0;

  for (const Constraint& c : cfg.constraints) {
    TrialOutcome out;
    out.constraint = constraint_name(c);
    out.noise_level = noise_level(c);
    Vector z = Vector::Zero(pt.n);
    if (!std::holds_alternative<EqualityConstraint>(c)) {
      for (Index i = 0; i < pt.n; ++i) z(i) = rng.normal();
      const double scale = std::holds_alternative<L2BallConstraint>(c)
                               ? z.norm()
                               : (phi.matrix().transpose() * z).lpNorm<Eigen::Infinity>();
      z *= out.noise_level / scale;
    }
    const Vector y = phi.matrix() * beta + z;
    try {
      const RecoverySolution sol = solve({phi, y, c, beta}, cfg.solver);
      out.error_l2 = (sol.beta_hat - beta).norm();
      out.converged = sol.converged;
      out.nonunique = sol.nonunique;
      out.iterations = sol.iterations;
      out.kkt_gap = sol.kkt_gap;
    } catch (const Error& ex) {
      out.error_l2 = std::numeric_limits<double>::quiet_NaN();
      out.solver_error = ex.what();
    }
    out.success = out.error_l2 <= cfg.success_threshold;
    if (condition_defined) {
      out.condition_holds = *rec.delta_k < kDeltaThreshold;
      if (*out.condition_holds) {
        double bound = 0.0;
        if (std::holds_alternative<L2BallConstraint>(c)) {
          bound = out.noise_level / gap;
        } else if (std::holds_alternative<DantzigBoxConstraint>(c)) {
          bound = std::sqrt(static_cast<double>(pt.k)) * out.noise_level / gap;
        }
        out.bound = bound;
        out.bound_satisfied = out.error_l2 <= bound + cfg.bound_slack;
      }
    }
    rec.outcomes.push_back(std::move(out));
  }
  return rec;
}

std::vector<ExperimentRecord> run_trials(const ExperimentConfig& cfg,
                                         const std::vector<GridPoint>& grid) {
  std::vector<ExperimentRecord> records(static_cast<std::size_t>(cfg.trials));
  parallel_ranges(static_cast<std::uint64_t>(cfg.trials), cfg.threads,
                  [&](std::uint64_t begin, std::uint64_t end) {
                    for (std::uint64_t i = begin; i < end; ++i) {
                      const GridPoint& pt = grid[i % grid.size()];
                      records[i] = run_trial(cfg, pt, static_cast<int>(i),
                                             trial_seed(cfg.master_seed, i));
                    }
                  });
  return records;
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg;
    cfg.ensemble = j.value("ensemble", std::string("gaussian"));
    if (cfg.ensemble != kCounterexample) parse_ensemble_kind(cfg.ensemble);
    cfg.n = index_list(j, "n");
    cfg.p = index_list(j, "p");
    cfg.k = index_list(j, "k");
    if (cfg.k.empty()) throw Error(ErrorCode::kParseError, "config needs k");
    if (cfg.ensemble != kCounterexample && cfg.n.empty()) {
      throw Error(ErrorCode::kParseError, "config needs n");
    }
    if (cfg.p.empty() && !derived_p(cfg.ensemble)) throw Error(ErrorCode::kParseError, "config needs p");
    if (j.contains("normalization")) cfg.normalization = parse_normalization(j.at("normalization"));
    cfg.perturbation = j.value("perturbation", 0.0);
    if (j.contains("signal")) cfg.signal = parse_signal_law(j.at("signal"));
    if (!j.contains("constraint")) throw Error(ErrorCode::kParseError, "config needs constraint");
    const auto& c = j.at("constraint");
    if (c.is_array()) {
      for (const auto& item : c) cfg.constraints.push_back(parse_constraint(item));
    } else {
      cfg.constraints.push_back(parse_constraint(c));
    }
    if (cfg.constraints.empty()) throw Error(ErrorCode::kParseError, "constraint list is empty");
    cfg.trials = j.at("trials").get<int>();
    if (cfg.trials < 1) throw Error(ErrorCode::kParseError, "trials must be >= 1");
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.compute_exact_rip = j.value("compute_exact_rip", true);
    cfg.compute_theta = j.value("compute_theta", false);
    cfg.success_threshold = j.value("success_threshold", 1e-6);
    cfg.bound_slack = j.value("bound_slack", 1e-6);
    cfg.budget = j.value("budget", std::uint64_t{1'000'000});
    cfg.threads = j.value("threads", 0u);

    nlohmann::json canonical = j;
    canonical.erase("threads");
    cfg.hash = fnv1a_hex(canonical.dump());
    experiment_grid(cfg);
    return cfg;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParseError, std::string("experiment config: ") + ex.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + ex.what());
  }
  return parse_experiment_config(j);
}

std::vector<GridPoint> experiment_grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> grid;
  if (cfg.ensemble == kCounterexample) {
    for (Index k : cfg.k) grid.push_back({2 * k - 1, 2 * k, k});
    return grid;
  }
  const EnsembleKind kind = parse_ensemble_kind(cfg.ensemble);
  for (Index n : cfg.n) {
    const std::vector<Index> ps = cfg.p.empty() ? std::vector<Index>{derive_p(cfg.ensemble, n)} : cfg.p;
    for (Index p : ps) {
      validate(EnsembleSpec{kind, n, p, cfg.normalization, cfg.perturbation, 0});
      for (Index k : cfg.k) {
        if (k > p) {
          throw Error(ErrorCode::kInvalidArgument,
                      "k=" + std::to_string(k) + " exceeds p=" + std::to_string(p));
        }
        grid.push_back({n, p, k});
      }
    }
  }
  return grid;
}

bool ExperimentRecord::violation() const {
  for (const auto& o : outcomes) {
    if (o.violation()) return true;
  }
  return false;
}

ExperimentResult run_recovery_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.records = run_trials(cfg, experiment_grid(cfg));
  for (const auto& r : result.records) result.soundness_violations += r.violation() ? 1 : 0;
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

nlohmann::json to_json(const ExperimentRecord& r) {
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : r.outcomes) {
    nlohmann::json j{{"constraint", o.constraint},
                     {"noise_level", o.noise_level},
                     {"error_l2", finite_or_null(o.error_l2)},
                     {"success", o.success},
                     {"condition_holds", o.condition_holds ? nlohmann::json(*o.condition_holds) : nullptr},
                     {"bound", optional_number(o.bound)},
                     {"bound_satisfied", o.bound_satisfied ? nlohmann::json(*o.bound_satisfied) : nullptr},
                     {"converged", o.converged},
                     {"nonunique", o.nonunique},
                     {"iterations", o.iterations},
                     {"kkt_gap", finite_or_null(o.kkt_gap)}};
    if (!o.solver_error.empty()) j["solver_error"] = o.solver_error;
    outcomes.push_back(std::move(j));
  }
  nlohmann::json j{{"trial", r.trial},
                   {"seed", r.seed},
                   {"config_hash", r.config_hash},
                   {"ensemble", r.ensemble},
                   {"n", r.n},
                   {"p", r.p},
                   {"k", r.k},
                   {"matrix_id", r.matrix_id},
                   {"delta_k", optional_number(r.delta_k)},
                   {"outcomes", outcomes}};
  if (r.theta_k_k) j["theta_k_k"] = *r.theta_k_k;
  if (!r.rip_error.empty()) j["rip_error"] = r.rip_error;
  return j;
}

void write_records_jsonl(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  for (const auto& r : records) os << to_json(r).dump() << '\n';
}

void write_summary_csv(std::ostream& os, const ExperimentConfig& cfg, const ExperimentResult& result) {
  os << "config_hash,constraint,noise_level,trials,successes,success_rate,rip_computed,"
        "qualifying,bound_violations,mean_delta,mean_error,solver_errors,wall_time_s\n";
  for (std::size_t c = 0; c < cfg.constraints.size(); ++c) {
    int successes = 0, rip = 0, qualifying = 0, violations = 0, solver_errors = 0, errors_counted = 0;
    double delta_sum = 0.0, error_sum = 0.0;
    for (const auto& r : result.records) {
      const auto& o = r.outcomes[c];
      successes += o.success;
      if (r.delta_k) {
        ++rip;
        delta_sum += *r.delta_k;
      }
      qualifying += o.condition_holds.value_or(false);
      violations += o.violation();
      if (o.solver_error.empty()) {
        error_sum += o.error_l2;
        ++errors_counted;
      } else {
        ++solver_errors;
      }
    }
    const double trials = static_cast<double>(result.records.size());
    os << cfg.hash << ',' << constraint_name(cfg.constraints[c]) << ','
       << format_double(noise_level(cfg.constraints[c])) << ',' << result.records.size() << ','
       << successes << ',' << csv_number(successes / trials) << ',' << rip << ',' << qualifying
       << ',' << violations << ','
       << csv_number(rip ? delta_sum / rip : std::numeric_limits<double>::quiet_NaN()) << ','
       << csv_number(errors_counted ? error_sum / errors_counted
                                    : std::numeric_limits<double>::quiet_NaN())
       << ',' << solver_errors << ',' << csv_number(result.wall_time_seconds) << '\n';
  }
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                              const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  std::ofstream records(dir / "records.jsonl", std::ios::binary);
  std::ofstream summary(dir / "summary.csv", std::ios::binary);
  if (!records || !summary) throw Error(ErrorCode::kInvalidArgument, "cannot write to " + dir.string());
  write_records_jsonl(records, result.records);
  write_summary_csv(summary, cfg, result);
}

PhaseDiagramResult run_phase_diagram(const ExperimentConfig& cfg) {
  PhaseDiagramResult result;
  const std::vector<GridPoint> grid = experiment_grid(cfg);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    ExperimentConfig cell_cfg = cfg;
    cell_cfg.constraints = {cfg.constraints.front()};
    cell_cfg.master_seed = trial_seed(cfg.master_seed, c);
    const std::vector<GridPoint> one{grid[c]};
    const std::vector<ExperimentRecord> records = run_trials(cell_cfg, one);

    PhaseCell cell;
    cell.point = grid[c];
    cell.trials = cfg.trials;
    double delta_sum = 0.0;
    for (const auto& r : records) {
      const TrialOutcome& o = r.outcomes.front();
      cell.successes += o.success;
      if (r.delta_k) {
        ++cell.rip_computed;
        delta_sum += *r.delta_k;
      }
      if (!r.rip_error.empty()) ++cell.rip_errors;
      if (o.condition_holds.value_or(false)) {
        ++cell.qualifying;
        cell.qualifying_successes += o.success;
      }
      result.soundness_violations += o.violation();
    }
    cell.mean_delta = cell.rip_computed ? delta_sum / cell.rip_computed
                                        : std::numeric_limits<double>::quiet_NaN();
    result.cells.push_back(cell);
  }
  return result;
}

void write_phase_csv(std::ostream& os, const PhaseDiagramResult& result) {
  os << "n,p,k,k_over_n,n_over_p,trials,successes,success_rate,mean_delta,rip_computed,"
        "qualifying,qualifying_successes,rip_errors\n";
  for (const auto& c : result.cells) {
    const double n = static_cast<double>(c.point.n);
    os << c.point.n << ',' << c.point.p << ',' << c.point.k << ','
       << format_double(static_cast<double>(c.point.k) / n) << ','
       << format_double(n / static_cast<double>(c.point.p)) << ',' << c.trials << ','
       << c.successes << ',' << format_double(static_cast<double>(c.successes) / c.trials) << ','
       << csv_number(c.mean_delta) << ',' << c.rip_computed << ',' << c.qualifying << ','
       << c.qualifying_successes << ',' << c.rip_errors << '\n';
  }
}

}  // namespace ripkit
