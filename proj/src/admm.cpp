#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ripkit/error.hpp"
#include "ripkit/matrix_io.hpp"
#include "ripkit/recovery.hpp"

namespace ripkit {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr double kResidualBalance = 10.0;

Vector soft_threshold(const Vector& v, double kappa) {
  return ((v.array() - kappa).max(0.0) - (-v.array() - kappa).max(0.0)).matrix();
}

std::vector<Index> nonzero_support(const Vector& z) {
  std::vector<Index> s;
  for (Index i = 0; i < z.size(); ++i) {
    if (z(i) != 0.0) s.push_back(i);
  }
  return s;
}

double relative_gap(double primal, double dual) {
  return std::max(0.0, primal - dual) / std::max(1.0, std::abs(primal));
}

double off_support_max(const Vector& c, const std::vector<Index>& support) {
  double worst = 0.0;
  std::size_t next = 0;
  for (Index j = 0; j < c.size(); ++j) {
    if (next < support.size() && support[next] == j) {
      ++next;
      continue;
    }
    worst = std::max(worst, std::abs(c(j)));
  }
  return worst;
}

Vector sign_of(const Vector& v) {
  return v.unaryExpr([](double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); });
}

Vector scatter(const Vector& values, const std::vector<Index>& support, Index p) {
  Vector out = Vector::Zero(p);
  for (std::size_t i = 0; i < support.size(); ++i) out(support[i]) = values(static_cast<Index>(i));
  return out;
}

// Phi_S with a rank-revealing factorization; empty when Phi_S has dependent
// columns (the restricted problem then has no unique closed form).
struct RestrictedColumns {
  Matrix cols;
  Eigen::ColPivHouseholderQR<Matrix> qr;
  Eigen::LDLT<Matrix> gram;
};

std::optional<RestrictedColumns> restrict_columns(const Matrix& phi,
                                                  const std::vector<Index>& support) {
  if (support.empty() || static_cast<Index>(support.size()) > phi.rows()) return std::nullopt;
  RestrictedColumns rc;
  rc.cols = columns(phi, support);
  rc.qr.setThreshold(kRankThreshold);
  rc.qr.compute(rc.cols);
  if (rc.qr.rank() < static_cast<Index>(support.size())) return std::nullopt;
  rc.gram.compute(rc.cols.transpose() * rc.cols);
  return rc;
}

struct Candidate {
  Vector x;
  double gap = std::numeric_limits<double>::infinity();
  bool nonunique = false;
};

// Picks the certificate with the smallest duality gap. `dual_value(nu, scale)`
// returns the dual objective of nu / scale; `dual_operator(nu)` returns the
// vector whose sup-norm must be <= 1 (Phi' nu or A nu).
template <typename DualValue, typename DualOperator>
void score_certificates(Candidate& cand, const std::vector<Vector>& certificates,
                        const std::vector<Index>& support, DualValue dual_value,
                        DualOperator dual_operator, double margin) {
  const double primal = cand.x.lpNorm<1>();
  double best_off = std::numeric_limits<double>::infinity();
  for (const Vector& nu : certificates) {
    if (!nu.allFinite()) continue;
    const Vector c = dual_operator(nu);
    const double scale = std::max(1.0, c.lpNorm<Eigen::Infinity>());
    cand.gap = std::min(cand.gap, relative_gap(primal, dual_value(nu, scale)));
    best_off = std::min(best_off, off_support_max(c, support));
  }
  cand.nonunique = best_off >= 1.0 - margin;
}

RecoverySolution finish(const Vector& x, double gap, int iterations, bool converged,
                        bool polished, bool nonunique, double residual) {
  RecoverySolution s;
  s.beta_hat = x;
  s.objective = x.lpNorm<1>();
  s.kkt_gap = gap;
  s.iterations = iterations;
  s.converged = converged;
  s.polished = polished;
  s.nonunique = nonunique;
  s.feasibility_residual = residual;
  return s;
}

void check_dims(const SensingMatrix& phi, const Vector& y) {
  if (y.size() != phi.rows()) {
    throw Error(ErrorCode::kInvalidArgument,
                "y has dimension " + std::to_string(y.size()) + ", Phi has " +
                    std::to_string(phi.rows()) + " rows");
  }
  if (!y.allFinite()) throw Error(ErrorCode::kInvalidArgument, "y has non-finite entries");
}

// Uniqueness assessment for an unpolished iterate: support from the sparse
// ADMM variable, certificate from the ADMM dual corrected onto the support.
template <typename DualOperator>
bool assess_nonunique(const Matrix& phi, const std::vector<Index>& support,
                      const Vector& nu, DualOperator dual_operator, double margin) {
  if (support.empty()) return false;
  if (!restrict_columns(phi, support)) return true;
  return off_support_max(dual_operator(nu), support) >= 1.0 - margin;
}

bool adapt_rho(double r, double s, double& rho) {
  if (r > kResidualBalance * s) {
    rho *= 2.0;
    return true;
  }
  if (s > kResidualBalance * r) {
    rho /= 2.0;
    return true;
  }
  return false;
}

}  // namespace

double feasibility_residual(const SensingMatrix& phi, const Vector& y, const Constraint& c,
                            const Vector& beta) {
  const Vector r = phi.matrix() * beta - y;
  if (std::holds_alternative<EqualityConstraint>(c)) return r.norm();
  if (const auto* ball = std::get_if<L2BallConstraint>(&c)) {
    return std::max(0.0, r.norm() - ball->epsilon);
  }
  const auto& box = std::get<DantzigBoxConstraint>(c);
  return std::max(0.0, (phi.matrix().transpose() * r).lpNorm<Eigen::Infinity>() - box.lambda);
}

// ---------------------------------------------------------------------------
// Basis pursuit

RecoverySolution basis_pursuit(const SensingMatrix& phi_m, const Vector& y,
                               const SolverOptions& o) {
  check_dims(phi_m, y);
  const Matrix& phi = phi_m.matrix();
  const Index p = phi.cols();
  const double y_norm = y.norm();
  const double eq_tol = o.equality_tol * std::max(1.0, y_norm);

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(phi);
  const Matrix pinv = cod.pseudoInverse();
  const Vector x0 = pinv * y;
  if ((phi * x0 - y).norm() > eq_tol) {
    throw Error(ErrorCode::kInfeasible, "y is not in the range of Phi");
  }
  if (y_norm == 0.0) return finish(Vector::Zero(p), 0.0, 0, true, true, false, 0.0);

  const Matrix pinv_t = pinv.transpose();
  auto dual_op = [&phi](const Vector& nu) -> Vector { return phi.transpose() * nu; };
  auto dual_value = [&y](const Vector& nu, double scale) { return y.dot(nu) / scale; };
  auto residual = [&](const Vector& x) { return (phi * x - y).norm(); };

  auto polish = [&](const Vector& z, const Vector& w) -> std::optional<Candidate> {
    const std::vector<Index> support = nonzero_support(z);
    auto rc = restrict_columns(phi, support);
    if (!rc) return std::nullopt;
    const Vector xs = rc->qr.solve(y);
    if ((rc->cols * xs - y).norm() > eq_tol || (xs.array() == 0.0).any()) return std::nullopt;
    const Vector s = sign_of(xs);
    const Vector nu_ls = rc->cols * rc->gram.solve(s);
    const Vector nu0 = pinv_t * w;
    const Vector nu_admm = nu0 + rc->cols * rc->gram.solve(s - rc->cols.transpose() * nu0);
    Candidate c;
    c.x = scatter(xs, support, p);
    score_certificates(c, {nu_ls, nu_admm}, support, dual_value, dual_op, o.nonunique_margin);
    if (c.gap > o.tol) return std::nullopt;
    return c;
  };

  Vector x = x0;
  Vector z = x0;
  Vector u = Vector::Zero(p);
  double rho = o.rho;
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  double gap = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= o.max_iterations; ++it) {
    const Vector v = z - u;
    x = v - pinv * (phi * v - y);
    const Vector xh = o.relaxation * x + (1.0 - o.relaxation) * z;
    const Vector z_old = z;
    z = soft_threshold(xh + u, 1.0 / rho);
    u += xh - z;

    const double r = (x - z).norm();
    const double s = rho * (z - z_old).norm();
    const bool small = r <= sqrt_p * o.tol + o.tol * std::max(x.norm(), z.norm()) &&
                       s <= sqrt_p * o.tol + o.tol * rho * u.norm();

    if (small || it % o.polish_interval == 0) {
      if (auto c = polish(z, rho * u)) {
        return finish(c->x, c->gap, it, true, true, c->nonunique, residual(c->x));
      }
    }
    if (small) {
      const Vector nu = pinv_t * (rho * u);
      gap = relative_gap(x.lpNorm<1>(), dual_value(nu, std::max(1.0, dual_op(nu).lpNorm<Eigen::Infinity>())));
      if (gap <= o.tol) {
        const bool nonunique = assess_nonunique(phi, nonzero_support(z), nu, dual_op,
                                                o.nonunique_margin);
        return finish(x, gap, it, true, false, nonunique, residual(x));
      }
    }
    if (it % o.rho_update_interval == 0) {
      const double old = rho;
      if (adapt_rho(r, s, rho)) u *= old / rho;
    }
  }
  const Vector nu = pinv_t * (rho * u);
  gap = relative_gap(x.lpNorm<1>(), dual_value(nu, std::max(1.0, dual_op(nu).lpNorm<Eigen::Infinity>())));
  return finish(x, gap, o.max_iterations, false, false,
                assess_nonunique(phi, nonzero_support(z), nu, dual_op, o.nonunique_margin),
                residual(x));
}

// ---------------------------------------------------------------------------
// Constrained BPDN

RecoverySolution bpdn(const SensingMatrix& phi_m, const Vector& y, double epsilon,
                      const SolverOptions& o) {
  check_dims(phi_m, y);
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be finite and >= 0");
  }
  const Matrix& phi = phi_m.matrix();
  const Index n = phi.rows();
  const Index p = phi.cols();
  if (y.norm() <= epsilon) return finish(Vector::Zero(p), 0.0, 0, true, true, false, 0.0);
  if (epsilon == 0.0) return basis_pursuit(phi_m, y, o);

  auto residual = [&](const Vector& x) {
    return std::max(0.0, (phi * x - y).norm() - epsilon);
  };
  auto dual_op = [&phi](const Vector& nu) -> Vector { return phi.transpose() * nu; };
  auto dual_value = [&](const Vector& nu, double scale) {
    return (y.dot(nu) - epsilon * nu.norm()) / scale;
  };
  const double feas_tol = o.tol * std::max(1.0, epsilon);

  auto polish = [&](const Vector& z, const Vector& nu_admm) -> std::optional<Candidate> {
    const std::vector<Index> support = nonzero_support(z);
    auto rc = restrict_columns(phi, support);
    if (!rc) return std::nullopt;
    const Vector x_ls = rc->qr.solve(y);
    const Vector r_ls = y - rc->cols * x_ls;
    const double slack = epsilon * epsilon - r_ls.squaredNorm();
    if (slack <= 0.0) return std::nullopt;
    // Restricted KKT point for the signs of the ADMM iterate:
    // x_S = x_LS - (1/mu) G^-1 s with ||y - Phi_S x_S|| = eps.
    const Vector s = sign_of(restrict_to(z, SupportSet(support, p)));
    const Vector g_inv_s = rc->gram.solve(s);
    const Vector q = rc->cols * g_inv_s;
    if (q.norm() == 0.0) return std::nullopt;
    const double inv_mu = std::sqrt(slack) / q.norm();
    const Vector xs = x_ls - inv_mu * g_inv_s;
    if ((sign_of(xs) - s).cwiseAbs().maxCoeff() != 0.0) return std::nullopt;
    Candidate c;
    c.x = scatter(xs, support, p);
    if (residual(c.x) > feas_tol) return std::nullopt;
    const Vector nu_kkt = (y - rc->cols * xs) / inv_mu;
    score_certificates(c, {nu_kkt, nu_admm}, support, dual_value, dual_op,
                       o.nonunique_margin);
    if (c.gap > o.tol) return std::nullopt;
    return c;
  };

  Eigen::LLT<Matrix> llt(Matrix::Identity(p, p) + phi.transpose() * phi);
  Vector x = Vector::Zero(p);
  Vector z = Vector::Zero(p);
  Vector u = Vector::Zero(p);
  Vector w = y;
  Vector v = Vector::Zero(n);
  double rho = o.rho;
  const double sqrt_dim = std::sqrt(static_cast<double>(p + n));

  auto project_ball = [&](const Vector& t) -> Vector {
    const Vector d = t - y;
    const double dn = d.norm();
    if (dn <= epsilon) return t;
    return y + d * (epsilon / dn);
  };

  for (int it = 1; it <= o.max_iterations; ++it) {
    x = llt.solve(z - u + phi.transpose() * (w - v));
    const Vector px = phi * x;
    const Vector xh = o.relaxation * x + (1.0 - o.relaxation) * z;
    const Vector wh = o.relaxation * px + (1.0 - o.relaxation) * w;
    const Vector z_old = z;
    const Vector w_old = w;
    z = soft_threshold(xh + u, 1.0 / rho);
    w = project_ball(wh + v);
    u += xh - z;
    v += wh - w;

    const double r = std::sqrt((x - z).squaredNorm() + (px - w).squaredNorm());
    const double s = rho * ((z - z_old) + phi.transpose() * (w - w_old)).norm();
    const double primal_scale = std::max(std::sqrt(x.squaredNorm() + px.squaredNorm()),
                                         std::sqrt(z.squaredNorm() + w.squaredNorm()));
    const bool small = r <= sqrt_dim * o.tol + o.tol * primal_scale &&
                       s <= sqrt_dim * o.tol + o.tol * rho * u.norm();

    if (small || it % o.polish_interval == 0) {
      if (auto c = polish(z, -rho * v)) {
        return finish(c->x, c->gap, it, true, true, c->nonunique, residual(c->x));
      }
    }
    if (small) {
      const Vector nu = -rho * v;
      const double gap = relative_gap(
          x.lpNorm<1>(), dual_value(nu, std::max(1.0, dual_op(nu).lpNorm<Eigen::Infinity>())));
      if (gap <= o.tol && residual(x) <= feas_tol) {
        return finish(x, gap, it, true, false,
                      assess_nonunique(phi, nonzero_support(z), nu, dual_op, o.nonunique_margin),
                      residual(x));
      }
    }
    if (it % o.rho_update_interval == 0) {
      const double old = rho;
      if (adapt_rho(r, s, rho)) {
        u *= old / rho;
        v *= old / rho;
      }
    }
  }
  const Vector nu = -rho * v;
  const double gap = relative_gap(
      x.lpNorm<1>(), dual_value(nu, std::max(1.0, dual_op(nu).lpNorm<Eigen::Infinity>())));
  return finish(x, gap, o.max_iterations, false, false,
                assess_nonunique(phi, nonzero_support(z), nu, dual_op, o.nonunique_margin),
                residual(x));
}

// ---------------------------------------------------------------------------
// Dantzig selector

RecoverySolution dantzig_selector(const SensingMatrix& phi_m, const Vector& y, double lambda,
                                  const SolverOptions& o) {
  check_dims(phi_m, y);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be finite and >= 0");
  }
  const Matrix& phi = phi_m.matrix();
  const Matrix& a = phi_m.gram();
  const Index p = phi.cols();
  const Vector b = phi.transpose() * y;
  if (b.lpNorm<Eigen::Infinity>() <= lambda) {
    return finish(Vector::Zero(p), 0.0, 0, true, true, false, 0.0);
  }

  auto residual = [&](const Vector& x) {
    return std::max(0.0, (a * x - b).lpNorm<Eigen::Infinity>() - lambda);
  };
  auto dual_op = [&a](const Vector& nu) -> Vector { return a * nu; };
  auto dual_value = [&](const Vector& nu, double scale) {
    return (b.dot(nu) - lambda * nu.lpNorm<1>()) / scale;
  };
  const double feas_tol = o.tol * std::max(1.0, b.lpNorm<Eigen::Infinity>());

  // Active constraints from the pre-clip box argument: +1 at the upper face,
  // -1 at the lower face.
  auto polish = [&](const Vector& z, const Vector& box_arg,
                    const Vector& nu_admm) -> std::optional<Candidate> {
    const std::vector<Index> support = nonzero_support(z);
    if (support.empty()) return std::nullopt;
    std::vector<Index> active;
    std::vector<double> side;
    for (Index j = 0; j < p; ++j) {
      if (box_arg(j) >= b(j) + lambda) {
        active.push_back(j);
        side.push_back(1.0);
      } else if (box_arg(j) <= b(j) - lambda) {
        active.push_back(j);
        side.push_back(-1.0);
      }
    }
    if (active.size() < support.size()) return std::nullopt;
    const Index ns = static_cast<Index>(support.size());
    const Index nj = static_cast<Index>(active.size());
    Matrix a_js(nj, ns);
    Vector rhs(nj);
    for (Index i = 0; i < nj; ++i) {
      for (Index j = 0; j < ns; ++j) a_js(i, j) = a(active[i], support[j]);
      rhs(i) = b(active[i]) + lambda * side[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Matrix> qr;
    qr.setThreshold(kRankThreshold);
    qr.compute(a_js);
    if (qr.rank() < ns) return std::nullopt;
    const Vector xs = qr.solve(rhs);
    if ((a_js * xs - rhs).norm() > feas_tol || (xs.array() == 0.0).any()) return std::nullopt;
    Candidate c;
    c.x = scatter(xs, support, p);
    if (residual(c.x) > feas_tol) return std::nullopt;

    // Certificate supported on the active set with A_{S,J} nu_J = sign(x_S).
    const Vector s = sign_of(xs);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a_js.transpose());
    const Vector nu_j = cod.solve(s);
    Vector nu_active = Vector::Zero(p);
    for (Index i = 0; i < nj; ++i) nu_active(active[i]) = nu_j(i);
    score_certificates(c, {nu_active, nu_admm}, support, dual_value, dual_op,
                       o.nonunique_margin);
    if (c.gap > o.tol) return std::nullopt;
    return c;
  };

  Eigen::LLT<Matrix> llt(Matrix::Identity(p, p) + a * a);
  Vector x = Vector::Zero(p);
  Vector z = Vector::Zero(p);
  Vector u = Vector::Zero(p);
  Vector w = b;
  Vector v = Vector::Zero(p);
  double rho = o.rho;
  const double sqrt_dim = std::sqrt(static_cast<double>(2 * p));
  const Vector lower = b.array() - lambda;
  const Vector upper = b.array() + lambda;

  for (int it = 1; it <= o.max_iterations; ++it) {
    x = llt.solve(z - u + a * (w - v));
    const Vector ax = a * x;
    const Vector xh = o.relaxation * x + (1.0 - o.relaxation) * z;
    const Vector wh = o.relaxation * ax + (1.0 - o.relaxation) * w;
    const Vector z_old = z;
    const Vector w_old = w;
    z = soft_threshold(xh + u, 1.0 / rho);
    const Vector box_arg = wh + v;
    w = box_arg.cwiseMax(lower).cwiseMin(upper);
    u += xh - z;
    v += wh - w;

    const double r = std::sqrt((x - z).squaredNorm() + (ax - w).squaredNorm());
    const double s = rho * ((z - z_old) + a * (w - w_old)).norm();
    const double primal_scale = std::max(std::sqrt(x.squaredNorm() + ax.squaredNorm()),
                                         std::sqrt(z.squaredNorm() + w.squaredNorm()));
    const bool small = r <= sqrt_dim * o.tol + o.tol * primal_scale &&
                       s <= sqrt_dim * o.tol + o.tol * rho * u.norm();

    if (small || it % o.polish_interval == 0) {
      if (auto c = polish(z, box_arg, -rho * v)) {
        return finish(c->x, c->gap, it, true, true, c->nonunique, residual(c->x));
      }
    }
    if (small) {
      const Vector nu = -rho * v;
      const double gap = relative_gap(
          x.lpNorm<1>(), dual_value(nu, std::max(1.0, dual_op(nu).lpNorm<Eigen::Infinity>())));
      if (gap <= o.tol && residual(x) <= feas_tol) {
        return finish(x, gap, it, true, false,
                      assess_nonunique(phi, nonzero_support(z), nu, dual_op, o.nonunique_margin),
                      residual(x));
      }
    }
    if (it % o.rho_update_interval == 0) {
      const double old = rho;
      if (adapt_rho(r, s, rho)) {
        u *= old / rho;
        v *= old / rho;
      }
    }
  }
  const Vector nu = -rho * v;
  const double gap = relative_gap(
      x.lpNorm<1>(), dual_value(nu, std::max(1.0, dual_op(nu).lpNorm<Eigen::Infinity>())));
  return finish(x, gap, o.max_iterations, false, false,
                assess_nonunique(phi, nonzero_support(z), nu, dual_op, o.nonunique_margin),
                residual(x));
}

RecoverySolution solve(const RecoveryProblem& problem, const SolverOptions& opts) {
  return std::visit(
      [&](const auto& c) -> RecoverySolution {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, EqualityConstraint>) {
          return basis_pursuit(problem.phi, problem.y, opts);
        } else if constexpr (std::is_same_v<T, L2BallConstraint>) {
          return bpdn(problem.phi, problem.y, c.epsilon, opts);
        } else {
          return dantzig_selector(problem.phi, problem.y, c.lambda, opts);
        }
      },
      problem.constraint);
}

// ---------------------------------------------------------------------------
// JSON

const char* constraint_name(const Constraint& c) {
  if (std::holds_alternative<EqualityConstraint>(c)) return "equality";
  if (std::holds_alternative<L2BallConstraint>(c)) return "l2";
  return "dantzig";
}

RecoveryProblem problem_from_json(const nlohmann::json& j, const std::string& base_dir) {
  try {
    const std::string m = j.at("matrix").get<std::string>();
    Matrix phi;
    if (m.find('\n') != std::string::npos) {
      std::istringstream is(m);
      phi = read_matrix_csv(is);
    } else {
      std::filesystem::path path(m);
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      phi = read_matrix_csv(path);
    }
    const auto yv = j.at("y").get<std::vector<double>>();
    Vector y = Eigen::Map<const Vector>(yv.data(), static_cast<Index>(yv.size()));

    Constraint constraint = EqualityConstraint{};
    if (j.contains("constraint")) {
      const auto& c = j.at("constraint");
      const std::string type = c.at("type").get<std::string>();
      if (type == "equality" || type == "bp") {
        constraint = EqualityConstraint{};
      } else if (type == "l2" || type == "bpdn" || type == "l2ball") {
        constraint = L2BallConstraint{c.at("epsilon").get<double>()};
      } else if (type == "dantzig" || type == "ds") {
        constraint = DantzigBoxConstraint{c.at("lambda").get<double>()};
      } else {
        throw Error(ErrorCode::kParseError, "unknown constraint type '" + type + "'");
      }
    }
    RecoveryProblem out{SensingMatrix(std::move(phi)), std::move(y), constraint, std::nullopt};
    if (out.y.size() != out.phi.rows()) {
      throw Error(ErrorCode::kParseError, "y dimension does not match matrix rows");
    }
    if (j.contains("beta_true")) {
      const auto bv = j.at("beta_true").get<std::vector<double>>();
      out.beta_true = Eigen::Map<const Vector>(bv.data(), static_cast<Index>(bv.size()));
      if (out.beta_true->size() != out.phi.cols()) {
        throw Error(ErrorCode::kParseError, "beta_true dimension does not match matrix columns");
      }
    }
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParseError, std::string("problem JSON: ") + ex.what());
  }
}

nlohmann::json problem_to_json(const RecoveryProblem& p) {
  std::ostringstream csv;
  write_matrix_csv(csv, p.phi.matrix());
  nlohmann::json j;
  j["matrix"] = csv.str();
  j["y"] = std::vector<double>(p.y.data(), p.y.data() + p.y.size());
  nlohmann::json c{{"type", constraint_name(p.constraint)}};
  if (const auto* ball = std::get_if<L2BallConstraint>(&p.constraint)) c["epsilon"] = ball->epsilon;
  if (const auto* box = std::get_if<DantzigBoxConstraint>(&p.constraint)) c["lambda"] = box->lambda;
  j["constraint"] = c;
  if (p.beta_true) {
    j["beta_true"] = std::vector<double>(p.beta_true->data(), p.beta_true->data() + p.beta_true->size());
  }
  return j;
}

nlohmann::json solution_to_json(const RecoverySolution& s) {
  return {{"beta_hat", std::vector<double>(s.beta_hat.data(), s.beta_hat.data() + s.beta_hat.size())},
          {"objective", s.objective},
          {"residual", s.feasibility_residual},
          {"kkt_gap", s.kkt_gap},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"polished", s.polished},
          {"nonunique_flag", s.nonunique}};
}

}  // namespace ripkit
