#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "ripkit/combinatorics.hpp"
#include "ripkit/counterexample.hpp"
#include "ripkit/error.hpp"
#include "ripkit/linalg.hpp"
#include "ripkit/matrix_io.hpp"
#include "ripkit/random.hpp"

namespace ripkit {
namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

Matrix random_symmetric(Index n, std::uint64_t seed) {
  const Matrix a = random_matrix(n, n, seed);
  return 0.5 * (a + a.transpose());
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kAssertionFailure;
}

TEST(SymEig, IdentityHasUnitSpectrum) {
  const auto r = sym_eig(Matrix::Identity(4, 4));
  for (Index i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(r.eigenvalues(i), 1.0);
}

TEST(SymEig, GammaForKTwo) {
  const auto r = sym_eig(gamma_matrix(2));
  EXPECT_NEAR(r.eigenvalues(0), 0.0, 1e-14);
  for (Index i = 1; i < 4; ++i) EXPECT_NEAR(r.eigenvalues(i), 4.0 / 3.0, 1e-14);
}

TEST(SymEig, TwoByTwoMatchesQuadraticFormula) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Matrix a = random_symmetric(2, seed);
    const double tr = a.trace();
    const double det = a.determinant();
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    const auto r = sym_eig(a);
    EXPECT_NEAR(r.eigenvalues(0), tr / 2.0 - disc, 1e-13);
    EXPECT_NEAR(r.eigenvalues(1), tr / 2.0 + disc, 1e-13);
  }
}

TEST(SymEig, ResidualOrthonormalityAndReconstruction) {
  for (Index n : {1, 3, 7, 12, 30}) {
    const Matrix a = random_symmetric(n, 100 + static_cast<std::uint64_t>(n));
    const auto r = sym_eig(a);
    const double fro = a.norm();
    for (Index i = 0; i < n; ++i) {
      const Vector v = r.eigenvectors.col(i);
      EXPECT_LE((a * v - r.eigenvalues(i) * v).norm(), 1e-12 * fro);
    }
    EXPECT_LE((r.eigenvectors.transpose() * r.eigenvectors - Matrix::Identity(n, n)).norm(), 1e-12 * n);
    const Matrix rebuilt = r.eigenvectors * r.eigenvalues.asDiagonal() * r.eigenvectors.transpose();
    EXPECT_LE((rebuilt - a).norm(), 10 * kDefaultEigTol * fro);
    for (Index i = 1; i < n; ++i) EXPECT_LE(r.eigenvalues(i - 1), r.eigenvalues(i));
  }
}

TEST(SymEig, AgreesWithEigenSolver) {
  const Matrix a = random_symmetric(9, 77);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  EXPECT_LE((sym_eigenvalues(a) - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SymEig, Deterministic) {
  const Matrix a = random_symmetric(8, 5);
  const auto r1 = sym_eig(a);
  const auto r2 = sym_eig(a);
  EXPECT_EQ(r1.eigenvalues, r2.eigenvalues);
  EXPECT_EQ(r1.eigenvectors, r2.eigenvectors);
}

TEST(SymEig, RejectsNonSymmetric) {
  Matrix a = Matrix::Identity(3, 3);
  a(0, 1) = 1e-3;
  EXPECT_EQ(code_of([&] { sym_eig(a); }), ErrorCode::kNonSymmetric);
}

TEST(SymEig, ReportsNoConvergence) {
  EXPECT_EQ(code_of([&] { sym_eig(random_symmetric(10, 3), 1e-12, 1); }), ErrorCode::kNoConvergence);
}

TEST(GramSubmatrix, IdentityColumns) {
  const SensingMatrix phi(Matrix::Identity(3, 3));
  EXPECT_EQ(gram_submatrix(phi, SupportSet({0, 2}, 3)), Matrix::Identity(2, 2));
}

TEST(GramSubmatrix, CounterexampleBlocks) {
  const SensingMatrix phi = phi_from_gamma(2);
  for_each_combination(4, 2, [&](const std::vector<Index>& t) {
    const Matrix g = gram_submatrix(phi, SupportSet(t, 4));
    EXPECT_NEAR(g(0, 0), 1.0, 1e-14);
    EXPECT_NEAR(g(1, 1), 1.0, 1e-14);
    EXPECT_NEAR(g(0, 1), -1.0 / 3.0, 1e-14);
  });
}

TEST(GramSubmatrix, MatchesDirectDotProducts) {
  const Matrix m = random_matrix(4, 6, 11);
  const Matrix g = gram_submatrix(SensingMatrix(m), SupportSet({1, 3}, 6));
  EXPECT_NEAR(g(0, 0), m.col(1).dot(m.col(1)), 1e-14);
  EXPECT_NEAR(g(0, 1), m.col(1).dot(m.col(3)), 1e-14);
  EXPECT_NEAR(g(1, 1), m.col(3).dot(m.col(3)), 1e-14);
  EXPECT_EQ(g(0, 1), g(1, 0));
}

TEST(GramSubmatrix, RejectsWrongUniverse) {
  const SensingMatrix phi(Matrix::Identity(3, 3));
  EXPECT_EQ(code_of([&] { gram_submatrix(phi, SupportSet({0, 4}, 5)); }), ErrorCode::kIndexOutOfRange);
}

TEST(SupportSet, Validation) {
  EXPECT_EQ(code_of([] { SupportSet({3}, 3); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([] { SupportSet({1, 1}, 3); }), ErrorCode::kInvalidArgument);
  const SupportSet s({2, 0}, 4);
  EXPECT_EQ(s.indices(), (std::vector<Index>{0, 2}));
  EXPECT_EQ(s.complement().indices(), (std::vector<Index>{1, 3}));
  EXPECT_TRUE(s.disjoint_from(SupportSet({1, 3}, 4)));
  EXPECT_FALSE(s.disjoint_from(SupportSet({2}, 4)));
}

TEST(CrossGram, OrthonormalColumnsGiveZero) {
  const SensingMatrix phi(Matrix::Identity(5, 5));
  EXPECT_EQ(cross_gram_spectral_norm(phi, SupportSet({0, 1}, 5), SupportSet({2, 4}, 5)), 0.0);
}

TEST(CrossGram, CounterexampleSingleColumns) {
  const SensingMatrix phi = phi_from_gamma(2);
  EXPECT_NEAR(cross_gram_spectral_norm(phi, SupportSet({0}, 4), SupportSet({1}, 4)), 1.0 / 3.0, 1e-14);
}

TEST(CrossGram, MatchesPowerIterationAndIsSymmetric) {
  const Matrix m = random_matrix(5, 8, 21);
  const SensingMatrix phi(m);
  const SupportSet t({0, 5}, 8), t2({2, 7}, 8);
  const double v = cross_gram_spectral_norm(phi, t, t2);
  const Matrix cross = oracle::select_columns(m, {0, 5}).transpose() * oracle::select_columns(m, {2, 7});
  EXPECT_NEAR(v, oracle::power_sigma_max(cross), 1e-10);
  EXPECT_NEAR(v, cross_gram_spectral_norm(phi, t2, t), 1e-12);
}

TEST(CrossGram, RejectsOverlap) {
  const SensingMatrix phi(Matrix::Identity(3, 3));
  EXPECT_EQ(code_of([&] { cross_gram_spectral_norm(phi, SupportSet({0, 1}, 3), SupportSet({1}, 3)); }),
            ErrorCode::kOverlappingSupports);
}

TEST(SpectralNorm, MatchesSvd) {
  for (auto [r, c] : {std::pair<Index, Index>{3, 7}, {7, 3}, {5, 5}}) {
    const Matrix m = random_matrix(r, c, static_cast<std::uint64_t>(r * 10 + c));
    Eigen::JacobiSVD<Matrix> svd(m);
    EXPECT_NEAR(spectral_norm(m), svd.singularValues()(0), 1e-12);
  }
}

TEST(TruncateTopK, UniqueMaximum) {
  Vector v(3);
  v << 3, -5, 1;
  const auto [head, tail] = truncate_top_k(v, 1);
  EXPECT_EQ(head, (Vector(3) << 0, -5, 0).finished());
  EXPECT_EQ(tail, (Vector(3) << 3, 0, 1).finished());
}

TEST(TruncateTopK, TiesKeepLowerIndices) {
  const auto [head, tail] = truncate_top_k(Vector::Ones(4), 2);
  EXPECT_EQ(head, (Vector(4) << 1, 1, 0, 0).finished());
  EXPECT_EQ(tail, (Vector(4) << 0, 0, 1, 1).finished());
}

TEST(TruncateTopK, BestKTermApproximationByExhaustiveCheck) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Vector v(10);
    for (Index i = 0; i < 10; ++i) v(i) = rng.normal();
    const auto [head, tail] = truncate_top_k(v, 4);
    EXPECT_EQ(head + tail, v);
    double best = std::numeric_limits<double>::infinity();
    for_each_combination(10, 4, [&](const std::vector<Index>& t) {
      Vector r = v;
      for (Index i : t) r(i) = 0.0;
      best = std::min(best, r.norm());
    });
    EXPECT_NEAR(tail.norm(), best, 1e-14);
    for_each_combination(10, 4, [&](const std::vector<Index>& t) {
      double kept = 0.0;
      for (Index i : t) kept += v(i) * v(i);
      EXPECT_GE(head.squaredNorm() + 1e-15, kept);
    });
  }
}

TEST(TruncateTopK, RejectsBadK) {
  EXPECT_EQ(code_of([] { truncate_top_k(Vector::Ones(3), 4); }), ErrorCode::kInvalidArgument);
}

TEST(Interlacing, NestedSupportsBracketSpectrum) {
  const SensingMatrix phi(random_matrix(6, 9, 41));
  for_each_combination(9, 3, [&](const std::vector<Index>& t) {
    const Vector inner = sym_eigenvalues(gram_submatrix(phi, SupportSet(t, 9)));
    for (Index extra = 0; extra < 9; ++extra) {
      if (std::find(t.begin(), t.end(), extra) != t.end()) continue;
      std::vector<Index> t1 = t;
      t1.push_back(extra);
      const Vector outer = sym_eigenvalues(gram_submatrix(phi, SupportSet(t1, 9)));
      EXPECT_LE(outer(0), inner(0) + 1e-12);
      EXPECT_GE(outer(outer.size() - 1), inner(inner.size() - 1) - 1e-12);
    }
  });
}

TEST(SensingMatrix, RejectsNonFinite) {
  Matrix m = Matrix::Ones(2, 2);
  m(1, 1) = std::nan("");
  EXPECT_EQ(code_of([&] { SensingMatrix s(m); }), ErrorCode::kInvalidArgument);
}

TEST(SensingMatrix, IdDependsOnContent) {
  const Matrix m = random_matrix(3, 4, 1);
  Matrix m2 = m;
  m2(2, 3) += 1e-15;
  EXPECT_EQ(SensingMatrix(m).id(), SensingMatrix(m).id());
  EXPECT_NE(SensingMatrix(m).id(), SensingMatrix(m2).id());
  EXPECT_NE(SensingMatrix(Matrix::Zero(2, 3)).id(), SensingMatrix(Matrix::Zero(3, 2)).id());
}

TEST(MatrixCsv, RoundTripIsExact) {
  const Matrix m = random_matrix(4, 5, 9);
  std::stringstream ss;
  write_matrix_csv(ss, m);
  EXPECT_EQ(read_matrix_csv(ss), m);
}

TEST(MatrixCsv, RejectsMalformedInput) {
  std::istringstream bad_header("2\n1,2\n");
  EXPECT_EQ(code_of([&] { read_matrix_csv(bad_header); }), ErrorCode::kParseError);
  std::istringstream short_rows("2,2\n1,2\n");
  EXPECT_EQ(code_of([&] { read_matrix_csv(short_rows); }), ErrorCode::kParseError);
  std::istringstream wide("1,2\n1,2,3\n");
  EXPECT_EQ(code_of([&] { read_matrix_csv(wide); }), ErrorCode::kParseError);
  std::istringstream nan_entry("1,1\nnan\n");
  EXPECT_EQ(code_of([&] { read_matrix_csv(nan_entry); }), ErrorCode::kParseError);
}

TEST(Combinatorics, BinomialAndUnrank) {
  EXPECT_EQ(binomial(10, 3), 120u);
  EXPECT_EQ(binomial(5, 7), 0u);
  EXPECT_EQ(binomial(200, 100), UINT64_MAX);
  std::vector<std::vector<Index>> all;
  for_each_combination(6, 3, [&](const std::vector<Index>& c) { all.push_back(c); });
  ASSERT_EQ(all.size(), 20u);
  for (std::size_t r = 0; r < all.size(); ++r) EXPECT_EQ(unrank_combination(r, 6, 3), all[r]);
}

TEST(Combinatorics, ParallelRangesCoverEverythingOnce) {
  std::vector<int> hits(1000, 0);
  parallel_ranges(1000, 4, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Combinatorics, ParallelRangesPropagateExceptions) {
  EXPECT_THROW(parallel_ranges(100, 3,
                               [](std::uint64_t b, std::uint64_t) {
                                 if (b == 0) throw std::runtime_error("boom");
                               }),
               std::runtime_error);
}

}  // namespace
}  // namespace ripkit
