#include "ripkit/ensembles.hpp"

#include <cmath>

#include "ripkit/error.hpp"

namespace ripkit {

namespace {

bool is_prime(Index q) {
  if (q < 2) return false;
  for (Index d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

bool is_power_of_two(Index n) { return n >= 1 && (n & (n - 1)) == 0; }

Matrix sylvester(Index order) {
  Matrix h = Matrix::Ones(1, 1);
  while (h.rows() < order) {
    const Index m = h.rows();
    Matrix next(2 * m, 2 * m);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

Matrix paley(Index q) {
  std::vector<int> chi(static_cast<std::size_t>(q), -1);
  chi[0] = 0;
  for (Index x = 1; x < q; ++x) chi[static_cast<std::size_t>((x * x) % q)] = 1;
  const Index m = q + 1;
  Matrix s = Matrix::Zero(m, m);
  for (Index j = 1; j < m; ++j) {
    s(0, j) = 1.0;
    s(j, 0) = -1.0;
  }
  for (Index i = 0; i < q; ++i) {
    for (Index j = 0; j < q; ++j) {
      s(i + 1, j + 1) = chi[static_cast<std::size_t>(((j - i) % q + q) % q)];
    }
  }
  return Matrix::Identity(m, m) + s;
}

Matrix simplex_frame(Index n) {
  const Index p = n + 1;
  const double nd = static_cast<double>(n);
  Matrix g = Matrix::Constant(p, p, -1.0 / nd);
  g.diagonal().setOnes();
  const SymmetricEigenResult eig = sym_eig(g);
  return std::sqrt((nd + 1.0) / nd) * eig.eigenvectors.rightCols(n).transpose();
}

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

double nonzero_draw(SignalLaw law, Rng& rng) {
  while (true) {
    double v = 0.0;
    switch (law) {
      case SignalLaw::kRademacher:
        return rng.sign();
      case SignalLaw::kGaussian:
        v = rng.normal();
        break;
      case SignalLaw::kFlat:
        v = 2.0 * rng.uniform() - 1.0;
        break;
    }
    if (v != 0.0) return v;
  }
}

}  // namespace

EnsembleKind parse_ensemble_kind(const std::string& s) {
  if (s == "gaussian") return EnsembleKind::kGaussian;
  if (s == "bernoulli") return EnsembleKind::kBernoulli;
  if (s == "perturbed_orthogonal") return EnsembleKind::kPerturbedOrthogonal;
  if (s == "simplex") return EnsembleKind::kSimplex;
  if (s == "identity_hadamard") return EnsembleKind::kIdentityHadamard;
  throw Error(ErrorCode::kParseError, "unknown ensemble '" + s + "'");
}

std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::kGaussian: return "gaussian";
    case EnsembleKind::kBernoulli: return "bernoulli";
    case EnsembleKind::kPerturbedOrthogonal: return "perturbed_orthogonal";
    case EnsembleKind::kSimplex: return "simplex";
    case EnsembleKind::kIdentityHadamard: return "identity_hadamard";
  }
  return "?";
}

Normalization parse_normalization(const std::string& s) {
  if (s == "unit_l2") return Normalization::kUnitL2;
  if (s == "scale_sqrt_n") return Normalization::kScaleSqrtN;
  throw Error(ErrorCode::kParseError, "unknown normalization '" + s + "'");
}

std::string to_string(Normalization n) {
  return n == Normalization::kUnitL2 ? "unit_l2" : "scale_sqrt_n";
}

SignalLaw parse_signal_law(const std::string& s) {
  if (s == "rademacher") return SignalLaw::kRademacher;
  if (s == "gaussian") return SignalLaw::kGaussian;
  if (s == "flat") return SignalLaw::kFlat;
  throw Error(ErrorCode::kParseError, "unknown signal law '" + s + "'");
}

std::string to_string(SignalLaw l) {
  switch (l) {
    case SignalLaw::kRademacher: return "rademacher";
    case SignalLaw::kGaussian: return "gaussian";
    case SignalLaw::kFlat: return "flat";
  }
  return "?";
}

bool hadamard_order_supported(Index order) {
  if (is_power_of_two(order)) return true;
  const Index q = order - 1;
  return order % 4 == 0 && is_prime(q) && q % 4 == 3;
}

Matrix hadamard_matrix(Index order) {
  if (is_power_of_two(order)) return sylvester(order);
  if (!hadamard_order_supported(order)) {
    throw Error(ErrorCode::kInvalidArgument,
                "no Hadamard construction for order " + std::to_string(order));
  }
  return paley(order - 1);
}

Matrix random_orthogonal(Index n, Rng& rng) {
  const Matrix a = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Matrix normalize_columns(Matrix m) {
  for (Index j = 0; j < m.cols(); ++j) {
    const double norm = m.col(j).norm();
    if (norm == 0.0) throw Error(ErrorCode::kInvalidArgument, "zero column cannot be normalized");
    m.col(j) /= norm;
  }
  return m;
}

void validate(const EnsembleSpec& spec) {
  if (spec.n < 1 || spec.p < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ensemble dimensions must be positive");
  }
  if (!(spec.perturbation >= 0.0) || !std::isfinite(spec.perturbation)) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation must be finite and >= 0");
  }
  const std::string name = to_string(spec.kind);
  const std::string dims = " (n=" + std::to_string(spec.n) + ", p=" + std::to_string(spec.p) + ")";
  switch (spec.kind) {
    case EnsembleKind::kGaussian:
    case EnsembleKind::kBernoulli:
      return;
    case EnsembleKind::kPerturbedOrthogonal:
      if (spec.p != spec.n) throw Error(ErrorCode::kInvalidArgument, name + " needs p = n" + dims);
      return;
    case EnsembleKind::kSimplex:
      if (spec.p != spec.n + 1) {
        throw Error(ErrorCode::kInvalidArgument, name + " needs p = n + 1" + dims);
      }
      return;
    case EnsembleKind::kIdentityHadamard:
      if (spec.p != 2 * spec.n || !hadamard_order_supported(spec.n)) {
        throw Error(ErrorCode::kInvalidArgument,
                    name + " needs p = 2n and a supported Hadamard order n" + dims);
      }
      return;
  }
}

SensingMatrix generate_matrix(const EnsembleSpec& spec) {
  Rng rng(spec.seed);
  return generate_matrix(spec, rng);
}

SensingMatrix generate_matrix(const EnsembleSpec& spec, Rng& rng) {
  validate(spec);
  const Index n = spec.n;
  const Index p = spec.p;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  switch (spec.kind) {
    case EnsembleKind::kGaussian: {
      Matrix m = gaussian_matrix(n, p, rng);
      if (spec.normalization == Normalization::kUnitL2) return SensingMatrix(normalize_columns(std::move(m)));
      return SensingMatrix(m * inv_sqrt_n);
    }
    case EnsembleKind::kBernoulli: {
      Matrix m(n, p);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) m(i, j) = rng.sign() * inv_sqrt_n;
      }
      return SensingMatrix(std::move(m));
    }
    default:
      break;
  }

  Matrix base;
  if (spec.kind == EnsembleKind::kPerturbedOrthogonal) {
    base = Matrix::Identity(n, n);
  } else if (spec.kind == EnsembleKind::kSimplex) {
    base = simplex_frame(n);
  } else {
    base.resize(n, 2 * n);
    Matrix h = hadamard_matrix(n) * inv_sqrt_n;
    for (Index j = 0; j < n; ++j) h.col(j) *= rng.sign();
    base << Matrix::Identity(n, n), h;
  }
  Matrix m = random_orthogonal(n, rng) * base;
  if (spec.perturbation > 0.0) m += spec.perturbation * gaussian_matrix(n, p, rng);
  return SensingMatrix(normalize_columns(std::move(m)));
}

Vector generate_sparse_signal(Index p, Index k, SignalLaw law, std::uint64_t seed) {
  Rng rng(seed);
  return generate_sparse_signal(p, k, law, rng);
}

Vector generate_sparse_signal(Index p, Index k, SignalLaw law, Rng& rng) {
  if (p < 1 || k < 1 || k > p) {
    throw Error(ErrorCode::kInvalidArgument,
                "signal needs 1 <= k <= p (k=" + std::to_string(k) + ", p=" + std::to_string(p) + ")");
  }
  Vector beta = Vector::Zero(p);
  for (Index i : random_support(rng, p, k)) beta(i) = nonzero_draw(law, rng);
  return beta;
}

}  // namespace ripkit
