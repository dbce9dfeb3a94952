#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "ripkit/combinatorics.hpp"
#include "ripkit/conditions.hpp"
#include "ripkit/ensembles.hpp"
#include "ripkit/error.hpp"
#include "ripkit/experiment.hpp"
#include "ripkit/random.hpp"
#include "ripkit/rip.hpp"

namespace ripkit {
namespace {

TEST(Random, SplitmixReferenceValues) {
  // First outputs of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(0x9E3779B97F4A7C15ULL), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(trial_seed(0, 0), 0x6E789E6AA1B965F4ULL);
  EXPECT_NE(trial_seed(1, 0), trial_seed(0, 0));
  EXPECT_NE(trial_seed(0, 1), trial_seed(0, 0));
}

TEST(Random, Mt19937ReferenceOutput) {
  // The 10000th output of mt19937_64 with the default seed is fixed by the standard.
  Rng rng(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next_u64();
  EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(Random, UniformAndNormalMoments) {
  Rng rng(1);
  double sum = 0.0, sq = 0.0, usum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    usum += u;
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(usum / n, 0.5, 5 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum / n, 0.0, 5 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(sq / n, 1.0, 5 * std::sqrt(2.0 / n));
}

TEST(Random, UniformIntIsInRangeAndBalanced) {
  Rng rng(2);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_int(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 5 * std::sqrt(10000.0 * 6 / 7));
}

TEST(Ensembles, SameSpecGivesIdenticalMatrix) {
  for (auto kind : {EnsembleKind::kGaussian, EnsembleKind::kBernoulli, EnsembleKind::kPerturbedOrthogonal,
                    EnsembleKind::kSimplex, EnsembleKind::kIdentityHadamard}) {
    EnsembleSpec spec{kind, 8, 16, Normalization::kUnitL2, 0.01, 42};
    if (kind == EnsembleKind::kPerturbedOrthogonal) spec.p = 8;
    if (kind == EnsembleKind::kSimplex) spec.p = 9;
    const SensingMatrix a = generate_matrix(spec);
    const SensingMatrix b = generate_matrix(spec);
    EXPECT_EQ(a.id(), b.id()) << to_string(kind);
    EXPECT_EQ(a.matrix(), b.matrix());
    spec.seed = 43;
    EXPECT_NE(generate_matrix(spec).id(), a.id());
  }
}

TEST(Ensembles, UnitNormalizationGivesZeroDeltaOne) {
  const SensingMatrix phi =
      generate_matrix({EnsembleKind::kGaussian, 10, 30, Normalization::kUnitL2, 0.0, 3});
  for (Index j = 0; j < 30; ++j) EXPECT_NEAR(phi.matrix().col(j).norm(), 1.0, 1e-12);
  EXPECT_LE(delta_exact(phi, 1).value, 1e-12);
}

TEST(Ensembles, ScaledGaussianEntryMeanIsCentered) {
  const SensingMatrix phi =
      generate_matrix({EnsembleKind::kGaussian, 50, 100, Normalization::kScaleSqrtN, 0.0, 11});
  const double mean = phi.matrix().mean();
  const double sigma = 1.0 / std::sqrt(50.0);
  EXPECT_LE(std::abs(mean), 4.0 * sigma / std::sqrt(5000.0));
  const double var = (phi.matrix().array() - mean).square().mean();
  EXPECT_NEAR(var, sigma * sigma, 0.1 * sigma * sigma);
}

TEST(Ensembles, BernoulliEntries) {
  const SensingMatrix phi =
      generate_matrix({EnsembleKind::kBernoulli, 9, 12, Normalization::kUnitL2, 0.0, 1});
  for (Index i = 0; i < 9; ++i) {
    for (Index j = 0; j < 12; ++j) EXPECT_NEAR(std::abs(phi.matrix()(i, j)), 1.0 / 3.0, 1e-15);
  }
}

TEST(Ensembles, StructuredKindsHaveExpectedGram) {
  const SensingMatrix orth =
      generate_matrix({EnsembleKind::kPerturbedOrthogonal, 6, 6, Normalization::kUnitL2, 0.0, 2});
  EXPECT_LE((orth.gram() - Matrix::Identity(6, 6)).norm(), 1e-12);

  const SensingMatrix simplex =
      generate_matrix({EnsembleKind::kSimplex, 6, 7, Normalization::kUnitL2, 0.0, 2});
  for (Index i = 0; i < 7; ++i) {
    for (Index j = 0; j < 7; ++j) EXPECT_NEAR(simplex.gram()(i, j), i == j ? 1.0 : -1.0 / 6.0, 1e-12);
  }

  const SensingMatrix ih =
      generate_matrix({EnsembleKind::kIdentityHadamard, 8, 16, Normalization::kUnitL2, 0.0, 2});
  for (Index i = 0; i < 16; ++i) {
    for (Index j = i + 1; j < 16; ++j) {
      const double g = std::abs(ih.gram()(i, j));
      const bool same_block = (i < 8) == (j < 8);
      EXPECT_NEAR(g, same_block ? 0.0 : 1.0 / std::sqrt(8.0), 1e-12);
    }
  }
}

TEST(Ensembles, HadamardOrders) {
  for (Index order : {1, 2, 4, 8, 12, 16, 20, 24, 32}) {
    ASSERT_TRUE(hadamard_order_supported(order)) << order;
    const Matrix h = hadamard_matrix(order);
    EXPECT_EQ(h.transpose() * h, static_cast<double>(order) * Matrix::Identity(order, order));
    EXPECT_EQ(h.cwiseAbs(), Matrix::Ones(order, order));
  }
  EXPECT_FALSE(hadamard_order_supported(6));
  EXPECT_THROW(hadamard_matrix(10), Error);
}

TEST(Ensembles, RejectsMismatchedDimensions) {
  EXPECT_THROW(generate_matrix({EnsembleKind::kSimplex, 5, 5, Normalization::kUnitL2, 0.0, 1}), Error);
  EXPECT_THROW(generate_matrix({EnsembleKind::kIdentityHadamard, 6, 12, Normalization::kUnitL2, 0.0, 1}),
               Error);
  EXPECT_THROW(parse_ensemble_kind("wishart"), Error);
}

TEST(SparseSignal, SparsityAndDeterminism) {
  const Vector dense = generate_sparse_signal(10, 10, SignalLaw::kGaussian, 4);
  EXPECT_EQ((dense.array() != 0.0).count(), 10);
  const Vector single = generate_sparse_signal(10, 1, SignalLaw::kFlat, 4);
  EXPECT_EQ((single.array() != 0.0).count(), 1);
  const Vector r = generate_sparse_signal(12, 4, SignalLaw::kRademacher, 5);
  EXPECT_EQ(r, generate_sparse_signal(12, 4, SignalLaw::kRademacher, 5));
  for (Index i = 0; i < 12; ++i) EXPECT_TRUE(r(i) == 0.0 || std::abs(r(i)) == 1.0);
}

TEST(SparseSignal, SupportsAreUniform) {
  Rng rng(77);
  std::map<std::vector<Index>, int> counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Vector v = generate_sparse_signal(20, 3, SignalLaw::kRademacher, rng);
    std::vector<Index> s;
    for (Index j = 0; j < 20; ++j) {
      if (v(j) != 0.0) s.push_back(j);
    }
    ++counts[s];
  }
  const double cells = static_cast<double>(binomial(20, 3));
  const double expected = draws / cells;
  const double sigma = std::sqrt(draws * (1.0 / cells) * (1.0 - 1.0 / cells));
  for (const auto& [s, c] : counts) EXPECT_LE(std::abs(c - expected), 5.0 * sigma);
  double chi2 = 0.0;
  for_each_combination(20, 3, [&](const std::vector<Index>& s) {
    const auto it = counts.find(s);
    const double c = it == counts.end() ? 0.0 : it->second;
    chi2 += (c - expected) * (c - expected) / expected;
  });
  // 1139 degrees of freedom; mean 1139, sd about 47.7.
  EXPECT_LT(chi2, 1139 + 5 * 47.7);
}

nlohmann::json small_config() {
  return {{"ensemble", "simplex"},
          {"n", {8, 9}},
          {"k", {2, 3}},
          {"perturbation", 0.01},
          {"constraint",
           {{{"type", "equality"}}, {{"type", "l2"}, {"epsilon", 0.01}}, {{"type", "dantzig"}, {"lambda", 0.01}}}},
          {"trials", 12},
          {"master_seed", 2024}};
}

std::string records_text(const ExperimentResult& r) {
  std::ostringstream os;
  write_records_jsonl(os, r.records);
  return os.str();
}

TEST(Experiment, GridCyclesThroughCombinations) {
  const ExperimentConfig cfg = parse_experiment_config(small_config());
  const auto grid = experiment_grid(cfg);
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[0].p, 9);
  EXPECT_EQ(grid[3].n, 9);
  EXPECT_EQ(grid[3].p, 10);
  EXPECT_EQ(grid[3].k, 3);
}

TEST(Experiment, RecordsAreDeterministicAcrossThreadCounts) {
  ExperimentConfig cfg = parse_experiment_config(small_config());
  cfg.threads = 1;
  const ExperimentResult a = run_recovery_experiment(cfg);
  cfg.threads = 4;
  const ExperimentResult b = run_recovery_experiment(cfg);
  EXPECT_EQ(records_text(a), records_text(b));
  EXPECT_EQ(a.records.size(), 12u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].trial, static_cast<int>(i));
    EXPECT_EQ(a.records[i].seed, trial_seed(2024, i));
  }
}

TEST(Experiment, HashIgnoresThreadsButTracksSeed) {
  nlohmann::json j = small_config();
  const std::string h = parse_experiment_config(j).hash;
  j["threads"] = 3;
  EXPECT_EQ(parse_experiment_config(j).hash, h);
  j["master_seed"] = 2025;
  EXPECT_NE(parse_experiment_config(j).hash, h);
}

TEST(Experiment, QualifyingTrialsSatisfyBounds) {
  const ExperimentResult r = run_recovery_experiment(parse_experiment_config(small_config()));
  EXPECT_EQ(r.soundness_violations, 0u);
  int qualifying = 0;
  for (const auto& rec : r.records) {
    ASSERT_TRUE(rec.delta_k.has_value());
    ASSERT_EQ(rec.outcomes.size(), 3u);
    if (*rec.delta_k >= kDeltaThreshold) continue;
    ++qualifying;
    const double gap = kDeltaThreshold - *rec.delta_k;
    EXPECT_LE(rec.outcomes[0].error_l2, 1e-6);
    EXPECT_TRUE(rec.outcomes[0].success);
    EXPECT_LE(rec.outcomes[1].error_l2, 0.01 / gap);
    EXPECT_LE(rec.outcomes[2].error_l2, std::sqrt(static_cast<double>(rec.k)) * 0.01 / gap);
  }
  EXPECT_EQ(qualifying, 12);
}

TEST(Experiment, NoiselessGaussianTrialsWithSmallDeltaRecover) {
  const nlohmann::json j{{"ensemble", "gaussian"}, {"n", 8},          {"p", 16},
                         {"k", 2},                 {"trials", 100},   {"master_seed", 7},
                         {"constraint", {{"type", "equality"}}}};
  const ExperimentResult r = run_recovery_experiment(parse_experiment_config(j));
  EXPECT_EQ(r.soundness_violations, 0u);
  for (const auto& rec : r.records) {
    ASSERT_TRUE(rec.delta_k.has_value());
    if (*rec.delta_k < kDeltaThreshold) EXPECT_TRUE(rec.outcomes[0].success);
  }
}

TEST(Experiment, CounterexampleTrialsDoNotAllSucceed) {
  const nlohmann::json j{{"ensemble", "counterexample"}, {"k", {2, 3}}, {"trials", 8},
                         {"master_seed", 1}, {"constraint", {{"type", "equality"}}}};
  const ExperimentResult r = run_recovery_experiment(parse_experiment_config(j));
  int successes = 0;
  for (const auto& rec : r.records) successes += rec.outcomes[0].success ? 1 : 0;
  EXPECT_LT(successes, 8);
  EXPECT_EQ(r.soundness_violations, 0u);
}

TEST(Experiment, BudgetErrorsAreRecordedNotFatal) {
  nlohmann::json j = small_config();
  j["budget"] = 5;
  const ExperimentResult r = run_recovery_experiment(parse_experiment_config(j));
  ASSERT_EQ(r.records.size(), 12u);
  for (const auto& rec : r.records) {
    EXPECT_FALSE(rec.delta_k.has_value());
    EXPECT_FALSE(rec.rip_error.empty());
    EXPECT_FALSE(rec.outcomes[0].condition_holds.has_value());
  }
}

TEST(Experiment, SummaryCsvHeader) {
  const ExperimentConfig cfg = parse_experiment_config(small_config());
  const ExperimentResult r = run_recovery_experiment(cfg);
  std::ostringstream os;
  write_summary_csv(os, cfg, r);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header,
            "config_hash,constraint,noise_level,trials,successes,success_rate,rip_computed,qualifying,"
            "bound_violations,mean_delta,mean_error,solver_errors,wall_time_s");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Experiment, RejectsMalformedConfig) {
  nlohmann::json j = small_config();
  j.erase("constraint");
  EXPECT_THROW(parse_experiment_config(j), Error);
  j = small_config();
  j["ensemble"] = "simplex";
  j["p"] = 20;
  EXPECT_THROW(experiment_grid(parse_experiment_config(j)), Error);
}

TEST(PhaseDiagram, OrthogonalCellAlwaysSucceeds) {
  const nlohmann::json j{{"ensemble", "perturbed_orthogonal"}, {"n", {6, 8}}, {"k", {1, 2, 3}},
                         {"perturbation", 0.0}, {"trials", 5}, {"master_seed", 3},
                         {"constraint", {{"type", "equality"}}}};
  const PhaseDiagramResult r = run_phase_diagram(parse_experiment_config(j));
  ASSERT_EQ(r.cells.size(), 6u);
  for (const auto& c : r.cells) {
    EXPECT_EQ(c.trials, 5);
    EXPECT_EQ(c.successes, 5);
    EXPECT_NEAR(c.mean_delta, 0.0, 1e-12);
  }
  std::ostringstream os;
  write_phase_csv(os, r);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "n,p,k,k_over_n,n_over_p,trials,successes,success_rate,mean_delta,rip_computed,qualifying,"
            "qualifying_successes,rip_errors");
}

TEST(PhaseDiagram, QualifyingTrialsSucceed) {
  const nlohmann::json j{{"ensemble", "simplex"}, {"n", {8, 10}}, {"k", {2, 3}}, {"perturbation", 0.02},
                         {"trials", 6}, {"master_seed", 9}, {"constraint", {{"type", "equality"}}}};
  const PhaseDiagramResult r = run_phase_diagram(parse_experiment_config(j));
  EXPECT_EQ(r.soundness_violations, 0u);
  for (const auto& c : r.cells) EXPECT_EQ(c.qualifying_successes, c.qualifying);
}

}  // namespace
}  // namespace ripkit
