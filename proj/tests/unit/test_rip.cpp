#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "ripkit/audit.hpp"
#include "ripkit/counterexample.hpp"
#include "ripkit/ensembles.hpp"
#include "ripkit/error.hpp"
#include "ripkit/rip.hpp"

namespace ripkit {
namespace {

SensingMatrix gaussian(Index n, Index p, std::uint64_t seed) {
  return generate_matrix({EnsembleKind::kGaussian, n, p, Normalization::kUnitL2, 0.0, seed});
}

SensingMatrix raw_gaussian(Index n, Index p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) m(i, j) = rng.normal() / std::sqrt(static_cast<double>(n));
  }
  return SensingMatrix(m);
}

TEST(DeltaExact, OrthonormalColumnsGiveZero) {
  const SensingMatrix phi(Matrix::Identity(6, 6));
  for (Index k = 1; k <= 6; ++k) EXPECT_NEAR(delta_exact(phi, k).value, 0.0, 1e-15);
}

TEST(DeltaExact, CounterexampleKTwo) {
  const DeltaEntry d = delta_exact(phi_from_gamma(2), 2);
  EXPECT_NEAR(d.value, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(d.witness.size(), 2u);
}

TEST(DeltaExact, MatchesIndependentEnumeration) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SensingMatrix phi = raw_gaussian(6, 10, seed);
    for (Index k = 1; k <= 4; ++k) {
      EXPECT_NEAR(delta_exact(phi, k).value, oracle::delta(phi.matrix(), static_cast<int>(k)), 1e-10)
          << "seed " << seed << " k " << k;
    }
  }
}

TEST(DeltaExact, KTwoIsMaxOverAllPairs) {
  const SensingMatrix phi = raw_gaussian(6, 10, 17);
  double best = 0.0;
  int pairs = 0;
  for (Index i = 0; i < 10; ++i) {
    for (Index j = i + 1; j < 10; ++j) {
      best = std::max(best, delta_on_support(phi, SupportSet({i, j}, 10)));
      ++pairs;
    }
  }
  EXPECT_EQ(pairs, 45);
  EXPECT_NEAR(delta_exact(phi, 2).value, best, 1e-14);
}

TEST(DeltaExact, WitnessReproducesValue) {
  const SensingMatrix phi = raw_gaussian(7, 11, 3);
  for (Index k = 1; k <= 4; ++k) {
    const DeltaEntry d = delta_exact(phi, k);
    EXPECT_NEAR(delta_on_support(phi, d.witness), d.value, 1e-10);
    ASSERT_TRUE(d.lambda_min && d.lambda_max);
    EXPECT_NEAR(d.value, std::max(*d.lambda_max - 1.0, 1.0 - *d.lambda_min), 1e-14);
  }
}

TEST(DeltaExact, ThreadCountDoesNotChangeResult) {
  const SensingMatrix phi = raw_gaussian(8, 14, 5);
  RipOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const DeltaEntry a = delta_exact(phi, 4, one);
  const DeltaEntry b = delta_exact(phi, 4, many);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(DeltaExact, BudgetExceededBeforeWork) {
  RipOptions opts;
  opts.budget = 100;
  try {
    delta_exact(raw_gaussian(5, 12, 1), 3, opts);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required(), 220u);
    EXPECT_EQ(e.budget(), 100u);
  }
}

TEST(DeltaExact, RejectsBadArity) {
  const SensingMatrix phi(Matrix::Identity(3, 3));
  EXPECT_THROW(delta_exact(phi, 0), Error);
  EXPECT_THROW(delta_exact(phi, 4), Error);
}

TEST(DeltaExact, ScaledMatrixScalesWitnessSpectrum) {
  const SensingMatrix phi = raw_gaussian(5, 8, 9);
  const SensingMatrix scaled(2.5 * phi.matrix());
  const DeltaEntry d = delta_exact(phi, 3);
  const Vector ev = sym_eigenvalues(gram_submatrix(phi, d.witness));
  const Vector ev_scaled = sym_eigenvalues(gram_submatrix(scaled, d.witness));
  EXPECT_LE((ev_scaled - 6.25 * ev).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ThetaExact, OrthonormalColumnsGiveZero) {
  const SensingMatrix phi(Matrix::Identity(5, 5));
  for (Index k = 1; k <= 4; ++k) {
    for (Index k2 = 1; k + k2 <= 5; ++k2) EXPECT_EQ(theta_exact(phi, k, k2).value, 0.0);
  }
}

TEST(ThetaExact, CounterexampleOneOne) {
  EXPECT_NEAR(theta_exact(phi_from_gamma(2), 1, 1).value, 1.0 / 3.0, 1e-12);
}

TEST(ThetaExact, MatchesIndependentEnumeration) {
  const SensingMatrix phi = raw_gaussian(6, 10, 23);
  for (auto [k, k2] : {std::pair<Index, Index>{1, 1}, {1, 2}, {2, 2}, {1, 3}, {2, 3}}) {
    EXPECT_NEAR(theta_exact(phi, k, k2).value,
                oracle::theta(phi.matrix(), static_cast<int>(k), static_cast<int>(k2)), 1e-10);
  }
}

TEST(ThetaExact, SymmetricInArguments) {
  const SensingMatrix phi = raw_gaussian(6, 9, 29);
  EXPECT_NEAR(theta_exact(phi, 1, 3).value, theta_exact(phi, 3, 1).value, 1e-12);
}

TEST(ThetaExact, WitnessesAreDisjointAndReproduce) {
  const SensingMatrix phi = raw_gaussian(6, 10, 31);
  const ThetaEntry t = theta_exact(phi, 2, 3);
  EXPECT_EQ(t.witness_a.size(), 2u);
  EXPECT_EQ(t.witness_b.size(), 3u);
  EXPECT_TRUE(t.witness_a.disjoint_from(t.witness_b));
  EXPECT_NEAR(cross_gram_spectral_norm(phi, t.witness_a, t.witness_b), t.value, 1e-10);
}

TEST(ThetaExact, RejectsOversizedSupports) {
  const SensingMatrix phi(Matrix::Identity(4, 4));
  try {
    theta_exact(phi, 3, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArity);
  }
}

TEST(RipEngine, MonotoneProfiles) {
  RipEngine engine(raw_gaussian(7, 12, 37));
  for (Index k = 1; k < 5; ++k) {
    EXPECT_LE(engine.delta(k).value, engine.delta(k + 1).value + 1e-12);
  }
  EXPECT_LE(engine.theta(1, 1).value, engine.theta(1, 2).value + 1e-12);
  EXPECT_LE(engine.theta(1, 2).value, engine.theta(2, 2).value + 1e-12);
}

TEST(RipEngine, CacheSharesEntriesAcrossEngines) {
  ProfileCache cache;
  const SensingMatrix phi = raw_gaussian(5, 8, 41);
  RipEngine a(phi, {}, &cache);
  const double d = a.delta(3).value;
  EXPECT_GE(cache.size(), 1u);
  RipEngine b(phi, {}, &cache);
  EXPECT_EQ(b.delta(3).value, d);
  EXPECT_TRUE(cache.find_delta(phi.id(), 3).has_value());
}

TEST(RipEngine, ProfileJsonRoundTrip) {
  const SensingMatrix phi = raw_gaussian(5, 8, 43);
  RipEngine engine(phi);
  engine.delta(2);
  engine.theta(1, 2);
  const RipProfile back = profile_from_json(profile_to_json(engine.profile()));
  EXPECT_EQ(back.matrix_id, phi.id());
  EXPECT_EQ(back.delta_value(2), engine.profile().delta_value(2));
  EXPECT_EQ(back.theta_value(1, 2), engine.profile().theta_value(1, 2));
  EXPECT_THROW(back.delta_value(3), Error);

  RipEngine resumed(phi, back);
  EXPECT_EQ(resumed.delta(2).value, engine.profile().delta_value(2));
  EXPECT_THROW(RipEngine(raw_gaussian(5, 8, 44), back), Error);
}

TEST(Audit, OrthonormalColumnsHaveZeroLhs) {
  RipEngine engine(SensingMatrix(Matrix::Identity(8, 8)));
  const auto report = audit_inequalities(engine, 4);
  ASSERT_FALSE(report.entries.empty());
  for (const auto& e : report.entries) {
    EXPECT_TRUE(e.holds) << e.inequality_id;
    if (e.inequality_id.rfind("spectrum_", 0) != 0) {
      EXPECT_NEAR(e.lhs, 0.0, 1e-14) << e.inequality_id << " " << e.inputs;
      EXPECT_NEAR(e.slack, e.rhs, 1e-14);
    }
  }
}

TEST(Audit, CounterexampleUsesExplicitSpectrum) {
  RipEngine engine(phi_from_gamma(3));
  const auto report = audit_inequalities(engine, 3);
  EXPECT_TRUE(report.all_hold());
  // Blocks of size j have extreme eigenvalues 1 - (j-1)/5 and 1 + 1/5.
  EXPECT_NEAR(engine.delta(1).value, 0.0, 1e-12);
  EXPECT_NEAR(engine.delta(2).value, 1.0 / 5.0, 1e-12);
  EXPECT_NEAR(engine.delta(3).value, 2.0 / 5.0, 1e-12);
  std::set<std::string> families;
  for (const auto& e : report.entries) families.insert(e.inequality_id);
  EXPECT_TRUE(families.contains("theta_le_delta"));
  EXPECT_TRUE(families.contains("delta_sum_upper"));
}

TEST(Audit, RandomGaussianMatricesHaveNoViolations) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RipEngine engine(gaussian(8, 12, seed));
    const auto report = audit_inequalities(engine, 4);
    EXPECT_TRUE(report.all_hold()) << "seed " << seed;
    EXPECT_GT(report.entries.size(), 30u);
  }
}

TEST(Audit, CoversEveryFamilyAtKmaxFour) {
  RipEngine engine(gaussian(10, 14, 7));
  const auto report = audit_inequalities(engine, 4);
  std::set<std::string> families;
  for (const auto& e : report.entries) families.insert(e.inequality_id);
  for (const char* f : {"spectrum_lower", "spectrum_upper", "delta_monotone", "theta_monotone",
                        "theta_le_delta", "delta_sum_upper", "delta_sum_weighted",
                        "delta_sum_balanced", "theta_partition_sum", "theta_partition_delta",
                        "sqrt_lifting", "delta_4k", "delta_3k"}) {
    EXPECT_TRUE(families.contains(f)) << f;
  }
}

TEST(Audit, CsvHasOneRowPerEntry) {
  RipEngine engine(gaussian(6, 8, 3));
  const auto report = audit_inequalities(engine, 3);
  std::ostringstream os;
  write_audit_csv(os, report);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "inequality_id,lhs,rhs,slack,holds");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_NE(line.find('['), std::string::npos);
  }
  EXPECT_EQ(rows, report.entries.size());
}

TEST(Audit, ProperPartitions) {
  EXPECT_TRUE(proper_partitions(1).empty());
  EXPECT_EQ(proper_partitions(3), (std::vector<std::vector<Index>>{{2, 1}, {1, 1, 1}}));
  EXPECT_EQ(proper_partitions(4).size(), 4u);
}

}  // namespace
}  // namespace ripkit
