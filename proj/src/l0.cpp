#include <algorithm>
#include <cmath>
#include <limits>

#include "ripkit/combinatorics.hpp"
#include "ripkit/error.hpp"
#include "ripkit/recovery.hpp"

namespace ripkit {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr double kResidualTieTol = 1e-12;

struct Fit {
  Vector gamma;
  double residual = 0.0;
};

std::optional<Fit> fit_support(const Matrix& phi, const Vector& y,
                               const std::vector<Index>& support) {
  const Index p = phi.cols();
  if (support.empty()) return Fit{Vector::Zero(p), y.norm()};
  if (static_cast<Index>(support.size()) > phi.rows()) return std::nullopt;
  const Matrix cols = columns(phi, support);
  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(kRankThreshold);
  qr.compute(cols);
  if (qr.rank() < static_cast<Index>(support.size())) return std::nullopt;
  const Vector xs = qr.solve(y);
  Fit f{Vector::Zero(p), (cols * xs - y).norm()};
  for (std::size_t i = 0; i < support.size(); ++i) f.gamma(support[i]) = xs(static_cast<Index>(i));
  return f;
}

// Zeroes entries that are negligible next to the largest one and returns the
// resulting support.
SupportSet clean_support(Vector& gamma) {
  const double scale = gamma.lpNorm<Eigen::Infinity>();
  std::vector<Index> s;
  for (Index i = 0; i < gamma.size(); ++i) {
    if (std::abs(gamma(i)) <= kResidualTieTol * scale) {
      gamma(i) = 0.0;
    } else {
      s.push_back(i);
    }
  }
  return SupportSet(std::move(s), gamma.size());
}

void check_inputs(const SensingMatrix& phi, const Vector& y, Index k) {
  if (y.size() != phi.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "y dimension does not match matrix rows");
  }
  if (k < 0 || k > phi.cols()) {
    throw Error(ErrorCode::kInvalidArity,
                "sparsity " + std::to_string(k) + " outside [0, " + std::to_string(phi.cols()) + "]");
  }
}

}  // namespace

L0Solution l0_oracle(const SensingMatrix& phi, const Vector& y, Index k_max, double tol,
                     std::uint64_t budget) {
  check_inputs(phi, y, k_max);
  const Index p = phi.cols();
  std::uint64_t required = 0;
  for (Index s = 0; s <= k_max; ++s) {
    required = std::min(std::numeric_limits<std::uint64_t>::max() - 1, required + binomial(p, s));
  }
  if (required > budget) throw BudgetExceeded(required, budget);

  const double fit_tol = tol * std::max(1.0, y.norm());
  const double tie_tol = kResidualTieTol * std::max(1.0, y.norm());
  for (Index s = 0; s <= k_max; ++s) {
    std::optional<Fit> best;
    for_each_combination(p, s, [&](const std::vector<Index>& support) {
      auto f = fit_support(phi.matrix(), y, support);
      if (!f || f->residual > fit_tol) return;
      if (!best || f->residual < best->residual - tie_tol) best = std::move(f);
    });
    if (best) {
      L0Solution out;
      out.gamma = best->gamma;
      out.support = clean_support(out.gamma);
      out.residual = best->residual;
      return out;
    }
  }
  throw Error(ErrorCode::kNotFound,
              "no vector with at most " + std::to_string(k_max) + " nonzeros reproduces y");
}

std::vector<L0Solution> l0_preimages(const SensingMatrix& phi, const Vector& y, Index sparsity,
                                     double tol, std::uint64_t budget) {
  check_inputs(phi, y, sparsity);
  const std::uint64_t required = binomial(phi.cols(), sparsity);
  if (required > budget) throw BudgetExceeded(required, budget);

  const double fit_tol = tol * std::max(1.0, y.norm());
  std::vector<L0Solution> out;
  for_each_combination(phi.cols(), sparsity, [&](const std::vector<Index>& support) {
    auto f = fit_support(phi.matrix(), y, support);
    if (!f || f->residual > fit_tol) return;
    L0Solution sol;
    sol.gamma = f->gamma;
    sol.support = clean_support(sol.gamma);
    sol.residual = f->residual;
    const double same_tol = 1e-9 * std::max(1.0, sol.gamma.lpNorm<Eigen::Infinity>());
    for (const auto& seen : out) {
      if ((seen.gamma - sol.gamma).lpNorm<Eigen::Infinity>() <= same_tol) return;
    }
    out.push_back(std::move(sol));
  });
  return out;
}

}  // namespace ripkit
