#pragma once

// l1-minimization recovery programs
//
//   basis pursuit      min ||g||_1  s.t.  Phi g = y
//   constrained BPDN   min ||g||_1  s.t.  ||Phi g - y||_2 <= eps
//   Dantzig selector   min ||g||_1  s.t.  ||Phi'(y - Phi g)||_inf <= lambda
//
// solved by over-relaxed ADMM with residual-balanced penalty. Every few
// iterations the solver tries to "polish": it fixes the support and signs of
// the current sparse iterate, solves the restricted optimality system in
// closed form, and accepts the result only when an explicit dual certificate
// closes the duality gap to `tol`. Reported `kkt_gap` is always the relative
// duality gap of the returned point against a feasible dual point.

#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ripkit/linalg.hpp"

namespace ripkit {

struct EqualityConstraint {};
struct L2BallConstraint {
  double epsilon = 0.0;
};
struct DantzigBoxConstraint {
  double lambda = 0.0;
};
using Constraint = std::variant<EqualityConstraint, L2BallConstraint, DantzigBoxConstraint>;

struct RecoveryProblem {
  SensingMatrix phi;
  Vector y;
  Constraint constraint;
  // Optional ground truth, used only for reporting.
  std::optional<Vector> beta_true;
};

struct SolverOptions {
  double tol = 1e-9;           // residuals and relative duality gap
  double equality_tol = 1e-9;  // ||Phi g - y||_2 for basis pursuit, relative to max(1, ||y||)
  int max_iterations = 100000;
  double rho = 1.0;
  double relaxation = 1.6;
  int polish_interval = 20;
  int rho_update_interval = 20;
  double nonunique_margin = 1e-7;
};

struct RecoverySolution {
  Vector beta_hat;
  double objective = 0.0;             // ||beta_hat||_1
  double feasibility_residual = 0.0;  // constraint-specific, see below
  double kkt_gap = 0.0;               // relative duality gap
  int iterations = 0;
  bool converged = false;
  bool polished = false;
  // Set when the support is rank deficient or the best dual certificate
  // touches +-1 off the support within `nonunique_margin`.
  bool nonunique = false;
};

// feasibility_residual:
//   equality  ||Phi b - y||_2
//   l2 ball   max(0, ||Phi b - y||_2 - eps)
//   Dantzig   max(0, ||Phi'(y - Phi b)||_inf - lambda)

// Throws kInfeasible when y is not in the range of Phi.
RecoverySolution basis_pursuit(const SensingMatrix& phi, const Vector& y,
                               const SolverOptions& opts = {});
RecoverySolution bpdn(const SensingMatrix& phi, const Vector& y, double epsilon,
                      const SolverOptions& opts = {});
RecoverySolution dantzig_selector(const SensingMatrix& phi, const Vector& y,
                                  double lambda, const SolverOptions& opts = {});

RecoverySolution solve(const RecoveryProblem& problem, const SolverOptions& opts = {});

double feasibility_residual(const SensingMatrix& phi, const Vector& y,
                            const Constraint& c, const Vector& beta);

// ---------------------------------------------------------------------------
// Exhaustive l0 oracle

struct L0Solution {
  Vector gamma;
  SupportSet support;
  double residual = 0.0;
};

// Sparsest gamma with ||Phi gamma - y||_2 <= tol max(1, ||y||), scanning sparsity 0..k_max
// and all supports of each size (least squares per support). Ties: smaller
// residual (beyond 1e-12 relative), then lexicographic support. Throws
// kNotFound when nothing fits, BudgetExceeded when the scan is too large.
L0Solution l0_oracle(const SensingMatrix& phi, const Vector& y, Index k_max,
                     double tol = 1e-9, std::uint64_t budget = 1'000'000);

// Every distinct vector with support of size exactly `sparsity` reproducing y
// to tol. Vectors that are sparser than `sparsity` are reported once.
std::vector<L0Solution> l0_preimages(const SensingMatrix& phi, const Vector& y,
                                     Index sparsity, double tol = 1e-9,
                                     std::uint64_t budget = 1'000'000);

// ---------------------------------------------------------------------------
// JSON

// {matrix: "<inline CSV>" | "path.csv", y: [...], constraint: {type, epsilon|lambda},
//  beta_true?: [...]}. Relative matrix paths resolve against `base_dir`.
RecoveryProblem problem_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
nlohmann::json problem_to_json(const RecoveryProblem& p);
nlohmann::json solution_to_json(const RecoverySolution& s);

const char* constraint_name(const Constraint& c);

}  // namespace ripkit
