#include "ripkit/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ripkit/error.hpp"

namespace ripkit {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonSymmetric: return "NonSymmetric";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kOverlappingSupports: return "OverlappingSupports";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kInvalidArity: return "InvalidArity";
    case ErrorCode::kEmptyVector: return "EmptyVector";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kMissingProfileEntry: return "MissingProfileEntry";
    case ErrorCode::kDegenerateNull: return "DegenerateNull";
    case ErrorCode::kAssertionFailure: return "AssertionFailure";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// SupportSet

SupportSet::SupportSet(std::vector<Index> indices, Index universe)
    : indices_(std::move(indices)), universe_(universe) {
  if (universe_ < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative support universe");
  }
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= universe_) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "index " + std::to_string(indices_[i]) +
                      " outside universe " + std::to_string(universe_));
    }
    if (i > 0 && indices_[i] == indices_[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate support index " + std::to_string(indices_[i]));
    }
  }
}

SupportSet SupportSet::range(Index first, Index last, Index universe) {
  std::vector<Index> idx;
  for (Index i = first; i < last; ++i) idx.push_back(i);
  return SupportSet(std::move(idx), universe);
}

bool SupportSet::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool SupportSet::disjoint_from(const SupportSet& other) const {
  auto a = indices_.begin();
  auto b = other.indices_.begin();
  while (a != indices_.end() && b != other.indices_.end()) {
    if (*a == *b) return false;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return true;
}

SupportSet SupportSet::complement() const {
  std::vector<Index> rest;
  for (Index i = 0; i < universe_; ++i) {
    if (!contains(i)) rest.push_back(i);
  }
  return SupportSet(std::move(rest), universe_);
}

std::string SupportSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) os << ',';
    os << indices_[i];
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------
// SensingMatrix

bool all_finite(const Matrix& m) { return m.allFinite(); }

std::string content_hash(const Matrix& m) {
  // FNV-1a over (rows, cols, row-major entry bytes).
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(m.rows()));
  mix(static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      mix(std::bit_cast<std::uint64_t>(m(i, j)));
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SensingMatrix::SensingMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sensing matrix must be non-empty");
  }
  if (!all_finite(entries_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "sensing matrix has non-finite entries");
  }
  column_norms_ = entries_.colwise().norm().transpose();
  const Index p = entries_.cols();
  gram_.resize(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i; j < p; ++j) {
      const double v = entries_.col(i).dot(entries_.col(j));
      gram_(i, j) = v;
      gram_(j, i) = v;
    }
  }
  id_ = content_hash(entries_);
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver

namespace {

void check_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kNonSymmetric, "matrix is not square");
  }
  double worst = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = i + 1; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
    }
  }
  if (worst > tol) {
    std::ostringstream os;
    os << "max |A_ij - A_ji| = " << worst << " exceeds " << tol;
    throw Error(ErrorCode::kNonSymmetric, os.str());
  }
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

// Runs cyclic sweeps in place. Returns the number of sweeps used.
int jacobi_sweeps(Matrix& a, Matrix* v, double tol, int max_sweeps) {
  const Index n = a.rows();
  const double fro = a.norm();
  if (n <= 1 || fro == 0.0) return 0;
  const double target = tol * fro;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) return sweep;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        if (v != nullptr) {
          for (Index k = 0; k < n; ++k) {
            const double vkp = (*v)(k, p);
            const double vkq = (*v)(k, q);
            (*v)(k, p) = c * vkp - s * vkq;
            (*v)(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (off_diagonal_norm(a) <= target) return max_sweeps;
  throw Error(ErrorCode::kNoConvergence,
              "Jacobi did not converge in " + std::to_string(max_sweeps) +
                  " sweeps");
}

}  // namespace

SymmetricEigenResult sym_eig(const Matrix& a, double tol, int max_sweeps) {
  check_symmetric(a, tol);
  const Index n = a.rows();
  Matrix work = a;
  Matrix v = Matrix::Identity(n, n);
  SymmetricEigenResult out;
  out.sweeps = jacobi_sweeps(work, &v, tol, max_sweeps);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&work](Index i, Index j) {
    return work(i, i) < work(j, j);
  });
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = work(order[i], order[i]);
    out.eigenvectors.col(i) = v.col(order[i]);
  }
  return out;
}

Vector sym_eigenvalues(const Matrix& a, double tol, int max_sweeps) {
  check_symmetric(a, tol);
  Matrix work = a;
  jacobi_sweeps(work, nullptr, tol, max_sweeps);
  Vector ev = work.diagonal();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

double spectral_norm(const Matrix& m, double tol) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Matrix prod;
  if (m.rows() <= m.cols()) {
    prod = m * m.transpose();
  } else {
    prod = m.transpose() * m;
  }
  prod = 0.5 * (prod + prod.transpose());
  const Vector ev = sym_eigenvalues(prod, tol);
  return std::sqrt(std::max(0.0, ev(ev.size() - 1)));
}

// ---------------------------------------------------------------------------
// Gram blocks

namespace {

void check_universe(const SupportSet& t, Index cols) {
  if (t.universe() != cols) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "support universe " + std::to_string(t.universe()) +
                    " does not match column count " + std::to_string(cols));
  }
}

}  // namespace

Matrix gram_submatrix(const Matrix& phi, const SupportSet& t) {
  check_universe(t, phi.cols());
  const Index k = static_cast<Index>(t.size());
  Matrix g(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = i; j < k; ++j) {
      const double v = phi.col(t[i]).dot(phi.col(t[j]));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Matrix gram_submatrix(const SensingMatrix& phi, const SupportSet& t) {
  return gram_submatrix(phi.matrix(), t);
}

double cross_gram_spectral_norm(const SensingMatrix& phi, const SupportSet& t,
                                const SupportSet& t2) {
  check_universe(t, phi.cols());
  check_universe(t2, phi.cols());
  if (!t.disjoint_from(t2)) {
    throw Error(ErrorCode::kOverlappingSupports,
                t.to_string() + " and " + t2.to_string() + " intersect");
  }
  Matrix cross(static_cast<Index>(t.size()), static_cast<Index>(t2.size()));
  for (Index i = 0; i < cross.rows(); ++i) {
    for (Index j = 0; j < cross.cols(); ++j) {
      cross(i, j) = phi.gram()(t[i], t2[j]);
    }
  }
  return spectral_norm(cross);
}

// ---------------------------------------------------------------------------
// Vector helpers

std::vector<Index> top_k_indices(const Vector& v, Index k) {
  if (k < 0 || k > v.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "k = " + std::to_string(k) + " outside [0, " +
                    std::to_string(v.size()) + "]");
  }
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&v](Index i, Index j) {
    return std::abs(v(i)) > std::abs(v(j));
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

std::pair<Vector, Vector> truncate_top_k(const Vector& v, Index k) {
  Vector head = Vector::Zero(v.size());
  for (Index i : top_k_indices(v, k)) head(i) = v(i);
  Vector tail = v - head;
  return {head, tail};
}

Vector restrict_to(const Vector& v, const SupportSet& t) {
  Vector out(static_cast<Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) out(static_cast<Index>(i)) = v(t[i]);
  return out;
}

Matrix columns(const Matrix& phi, std::span<const Index> idx) {
  Matrix out(phi.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(static_cast<Index>(j)) = phi.col(idx[j]);
  }
  return out;
}

}  // namespace ripkit
