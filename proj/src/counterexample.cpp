#include "ripkit/counterexample.hpp"

#include <cmath>

#include "ripkit/combinatorics.hpp"
#include "ripkit/error.hpp"
#include "ripkit/matrix_io.hpp"
#include "ripkit/recovery.hpp"

namespace ripkit {

namespace {

constexpr double kGramTol = 1e-10;
constexpr double kDeltaTol = 1e-9;
constexpr double kImageTol = 1e-9;

void require_k(Index k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

double claimed_delta(Index k) {
  require_k(k);
  return static_cast<double>(k - 1) / static_cast<double>(2 * k - 1);
}

Matrix gamma_matrix(Index k) {
  require_k(k);
  const Index m = 2 * k;
  Matrix g = Matrix::Constant(m, m, -1.0 / static_cast<double>(2 * k - 1));
  g.diagonal().setOnes();
  return g;
}

SensingMatrix phi_from_gamma(Index k) {
  const Matrix g = gamma_matrix(k);
  const SymmetricEigenResult eig = sym_eig(g);
  const Index m = 2 * k;
  const double scale = std::sqrt(static_cast<double>(m) / static_cast<double>(2 * k - 1));
  // Eigenvalues are ascending: column 0 spans the null space.
  Matrix phi = scale * eig.eigenvectors.rightCols(m - 1).transpose();
  return SensingMatrix(std::move(phi));
}

std::pair<Vector, Vector> null_split(const SensingMatrix& phi, Index k) {
  require_k(k);
  if (phi.cols() != 2 * k) {
    throw Error(ErrorCode::kInvalidArgument, "matrix must have 2k columns");
  }
  const Vector gamma = Vector::Ones(2 * k) / std::sqrt(static_cast<double>(k));
  const double image = (phi.matrix() * gamma).norm();
  if (image > kImageTol) {
    throw Error(ErrorCode::kDegenerateNull,
                "all-ones direction is not in the null space (||Phi 1|| = " +
                    std::to_string(image) + ")");
  }
  Vector beta1 = Vector::Zero(2 * k);
  Vector beta2 = Vector::Zero(2 * k);
  beta1.head(k) = gamma.head(k);
  beta2.tail(k) = -gamma.tail(k);
  return {beta1, beta2};
}

CounterexampleInstance make_counterexample(Index k) {
  SensingMatrix phi = phi_from_gamma(k);
  auto [b1, b2] = null_split(phi, k);
  return {k, std::move(phi), std::move(b1), std::move(b2), claimed_delta(k)};
}

bool VerificationReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

void VerificationReport::throw_if_failed() const {
  for (const auto& c : checks) {
    if (!c.passed) {
      throw Error(ErrorCode::kAssertionFailure,
                  "k=" + std::to_string(k) + ": " + c.claim + " failed (" + c.detail + ")");
    }
  }
}

VerificationReport verify_instance(const CounterexampleInstance& inst, const RipOptions& opts) {
  const Index k = inst.k;
  const SensingMatrix& phi = inst.phi;
  VerificationReport report;
  report.k = k;
  auto add = [&](std::string claim, double error, double tol, std::string detail) {
    report.checks.push_back({std::move(claim), error <= tol, error, tol, std::move(detail)});
  };

  const double gram_err = (phi.gram() - gamma_matrix(k)).norm();
  add("gram_reconstruction", gram_err, kGramTol, "||Phi'Phi - Gamma||_F = " + format_double(gram_err));

  const DeltaEntry d = delta_exact(phi, k, opts);
  const double delta_err = std::abs(d.value - inst.delta_claimed);
  add("delta_exact", delta_err, kDeltaTol,
      "delta_k = " + format_double(d.value) + ", claimed " + format_double(inst.delta_claimed));

  const double kd = static_cast<double>(k);
  Vector expected(k);
  expected(0) = kd / (2.0 * kd - 1.0);
  for (Index i = 1; i < k; ++i) expected(i) = 2.0 * kd / (2.0 * kd - 1.0);
  double spec_err = 0.0;
  std::string worst_block;
  for_each_combination(2 * k, k, [&](const std::vector<Index>& t) {
    const SupportSet support(t, 2 * k);
    const Vector ev = sym_eigenvalues(gram_submatrix(phi, support), opts.eig_tol);
    const double e = (ev - expected).lpNorm<Eigen::Infinity>();
    if (e > spec_err) {
      spec_err = e;
      worst_block = support.to_string();
    }
  });
  add("block_spectrum", spec_err, kGramTol,
      "max eigenvalue deviation " + format_double(spec_err) +
          (worst_block.empty() ? "" : " on " + worst_block));

  const Vector y1 = phi.matrix() * inst.beta1;
  const double image_err = (y1 - phi.matrix() * inst.beta2).norm();
  add("equal_images", image_err, kImageTol, "||Phi(beta1 - beta2)|| = " + format_double(image_err));

  bool supports_ok = inst.beta1.size() == 2 * k && inst.beta2.size() == 2 * k;
  for (Index i = 0; supports_ok && i < 2 * k; ++i) {
    const bool first = i < k;
    supports_ok = first ? (inst.beta1(i) != 0.0 && inst.beta2(i) == 0.0)
                        : (inst.beta1(i) == 0.0 && inst.beta2(i) != 0.0);
  }
  add("disjoint_k_sparse_supports", supports_ok ? 0.0 : 1.0, 0.0,
      supports_ok ? "supports {0..k-1} and {k..2k-1}" : "support pattern mismatch");

  const auto pre = l0_preimages(phi, y1, k, 1e-9, opts.budget);
  std::size_t exact_k = 0;
  for (const auto& s : pre) {
    if (static_cast<Index>(s.support.size()) == k) ++exact_k;
  }
  add("non_identifiable", exact_k >= 2 ? 0.0 : 1.0, 0.0,
      std::to_string(exact_k) + " distinct k-sparse preimages of Phi beta1");
  return report;
}

nlohmann::json instance_to_json(const CounterexampleInstance& inst,
                                const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"claim", c.claim},
                      {"passed", c.passed},
                      {"error", c.error},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  return {{"k", inst.k},
          {"n", inst.phi.rows()},
          {"p", inst.phi.cols()},
          {"matrix_id", inst.phi.id()},
          {"delta_claimed", inst.delta_claimed},
          {"beta1", to_std(inst.beta1)},
          {"beta2", to_std(inst.beta2)},
          {"verification", {{"all_passed", report.all_passed()}, {"checks", checks}}}};
}

}  // namespace ripkit
