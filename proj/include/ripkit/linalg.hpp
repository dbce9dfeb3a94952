#pragma once

// Dense real linear algebra shared by every ripkit module.
//
// Storage is Eigen; the symmetric eigensolver is a cyclic Jacobi sweep so
// that eigenvectors come out orthonormal and results are reproducible for a
// fixed input. Singular values are taken from the eigenvalues of the smaller
// of M'M and MM'.

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ripkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultEigTol = 1e-12;
inline constexpr int kDefaultMaxSweeps = 100;

// Strictly increasing column indices drawn from {0, ..., universe-1}.
class SupportSet {
 public:
  SupportSet() = default;

  // Throws kIndexOutOfRange / kInvalidArgument on invalid input. Indices are
  // sorted; duplicates are rejected.
  SupportSet(std::vector<Index> indices, Index universe);
  SupportSet(std::initializer_list<Index> indices, Index universe)
      : SupportSet(std::vector<Index>(indices), universe) {}

  static SupportSet range(Index first, Index last, Index universe);

  const std::vector<Index>& indices() const { return indices_; }
  Index universe() const { return universe_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  Index operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(Index i) const;
  bool disjoint_from(const SupportSet& other) const;
  SupportSet complement() const;

  std::string to_string() const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;
  friend auto operator<=>(const SupportSet& a, const SupportSet& b) {
    return a.indices_ <=> b.indices_;
  }

 private:
  std::vector<Index> indices_;
  Index universe_ = 0;
};

// Dense n x p sensing matrix with finite entries. Immutable after
// construction; `id()` is a content hash of the dimensions and entry bytes.
class SensingMatrix {
 public:
  SensingMatrix() = default;
  explicit SensingMatrix(Matrix entries);

  const Matrix& matrix() const { return entries_; }
  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  const std::string& id() const { return id_; }
  const Vector& column_norms() const { return column_norms_; }

  // Full p x p Gram matrix, exactly symmetric.
  const Matrix& gram() const { return gram_; }

 private:
  Matrix entries_;
  Vector column_norms_;
  Matrix gram_;
  std::string id_;
};

std::string content_hash(const Matrix& m);

bool all_finite(const Matrix& m);

struct SymmetricEigenResult {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // column i pairs with eigenvalues(i)
  int sweeps = 0;
};

// Cyclic Jacobi. `tol` is both the absolute symmetry tolerance and the
// off-diagonal convergence threshold relative to the Frobenius norm.
SymmetricEigenResult sym_eig(const Matrix& a, double tol = kDefaultEigTol,
                             int max_sweeps = kDefaultMaxSweeps);

// Eigenvalues only; same algorithm without accumulating rotations.
Vector sym_eigenvalues(const Matrix& a, double tol = kDefaultEigTol,
                       int max_sweeps = kDefaultMaxSweeps);

// Largest singular value of an arbitrary dense matrix.
double spectral_norm(const Matrix& m, double tol = kDefaultEigTol);

// |T| x |T| matrix of inner products of the selected columns.
Matrix gram_submatrix(const SensingMatrix& phi, const SupportSet& t);
Matrix gram_submatrix(const Matrix& phi, const SupportSet& t);

// sigma_max(Phi_T' Phi_T2) for disjoint T, T2.
double cross_gram_spectral_norm(const SensingMatrix& phi, const SupportSet& t,
                                const SupportSet& t2);

// Keeps the k largest-magnitude entries (ties: lower index first). Returns
// (v_max(k), v - v_max(k)).
std::pair<Vector, Vector> truncate_top_k(const Vector& v, Index k);

// Indices of the k largest-magnitude entries under the same tie rule.
std::vector<Index> top_k_indices(const Vector& v, Index k);

Vector restrict_to(const Vector& v, const SupportSet& t);

Matrix columns(const Matrix& phi, std::span<const Index> idx);

}  // namespace ripkit
