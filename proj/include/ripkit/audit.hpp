#pragma once

// Machine-checkable audit of the standard inequalities relating delta_k and
// theta_{k,k'}. Every entry holds for any matrix, so a violation beyond tolerance
// points at a numerical or enumeration bug, not at the matrix.

#include <iosfwd>
#include <string>
#include <vector>

#include "ripkit/rip.hpp"

namespace ripkit {

inline constexpr double kAuditTolerance = 1e-9;

struct AuditEntry {
  std::string inequality_id;  // family name, e.g. "sqrt_lifting"
  std::string inputs;         // instance parameters, e.g. "k=1;k2=1;m=2"
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool holds = true;   // slack >= -tol
};

struct InequalityAuditReport {
  std::vector<AuditEntry> entries;
  double tolerance = kAuditTolerance;

  std::size_t violations() const;
  bool all_hold() const { return violations() == 0; }
};

// Instantiates every inequality whose sparsity indices fit in
// min(kmax, p), computing missing constants through the engine.
//
// Families:
//   spectrum_lower / spectrum_upper   1-d_k <= L_min(k) <= L_max(k) <= 1+d_k
//   delta_monotone                    d_k <= d_k1 for k < k1
//   theta_monotone                    t_{k,k'} <= t_{k1,k1'} componentwise
//   theta_le_delta                    t_{k,k'} <= d_{k+k'}
//   delta_sum_upper                   d_{k+k'} <= t_{k,k'} + max(d_k, d_k')
//   delta_sum_weighted                d_{k+k'} <= t_{k,k'} + (k d_k + k' d_k')/(k+k')
//   delta_sum_balanced                d_{k+k'} <= 2sqrt(kk')/(k+k') t_{k,k'} + max(d_k, d_k')
//   theta_partition_sum               t_{k,sum k_i} <= sqrt(sum t_{k,k_i}^2)
//   theta_partition_delta             sqrt(sum t_{k,k_i}^2) <= sqrt(sum d_{k+k_i}^2)
//   sqrt_lifting                      t_{k,m} <= sqrt(m/k') t_{k,k'} for m > k'
//   delta_4k                          d_4k <= 3 d_2k
//   delta_3k                          d_3k <= d_k/3 + (sqrt2 + 2/3) d_2k
InequalityAuditReport audit_inequalities(RipEngine& engine, Index kmax,
                                         double tol = kAuditTolerance);

// Columns: inequality_id,lhs,rhs,slack,holds. The id column carries the
// instance parameters in brackets, e.g. sqrt_lifting[k=1;k2=1;m=2].
void write_audit_csv(std::ostream& os, const InequalityAuditReport& report);

// Integer partitions of m into at least two positive parts, parts
// non-increasing.
std::vector<std::vector<Index>> proper_partitions(Index m);

}  // namespace ripkit
