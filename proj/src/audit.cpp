#include "ripkit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "ripkit/matrix_io.hpp"

namespace ripkit {

std::size_t InequalityAuditReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(),
                    [](const AuditEntry& e) { return !e.holds; }));
}

std::vector<std::vector<Index>> proper_partitions(Index m) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> current;
  std::function<void(Index, Index)> rec = [&](Index remaining, Index max_part) {
    if (remaining == 0) {
      if (current.size() >= 2) out.push_back(current);
      return;
    }
    for (Index part = std::min(remaining, max_part); part >= 1; --part) {
      current.push_back(part);
      rec(remaining - part, part);
      current.pop_back();
    }
  };
  rec(m, m);
  return out;
}

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(double tol) { report_.tolerance = tol; }

  void add(std::string id, std::string inputs, double lhs, double rhs) {
    AuditEntry e;
    e.inequality_id = std::move(id);
    e.inputs = std::move(inputs);
    e.lhs = lhs;
    e.rhs = rhs;
    e.slack = rhs - lhs;
    e.holds = e.slack >= -report_.tolerance;
    report_.entries.push_back(std::move(e));
  }

  InequalityAuditReport take() { return std::move(report_); }

 private:
  InequalityAuditReport report_;
};

std::string params(std::initializer_list<std::pair<const char*, Index>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, value] : kv) {
    if (!first) os << ';';
    os << name << '=' << value;
    first = false;
  }
  return os.str();
}

std::string join_parts(const std::vector<Index>& parts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << '+';
    os << parts[i];
  }
  return os.str();
}

}  // namespace

InequalityAuditReport audit_inequalities(RipEngine& engine, Index kmax, double tol) {
  const Index top = std::min(kmax, engine.matrix().cols());
  ReportBuilder out(tol);
  auto d = [&engine](Index k) { return engine.delta(k).value; };
  auto t = [&engine](Index k, Index k2) { return engine.theta(k, k2).value; };

  for (Index k = 1; k <= top; ++k) {
    const DeltaEntry& e = engine.delta(k);
    if (e.lambda_min && e.lambda_max) {
      out.add("spectrum_lower", params({{"k", k}}), 1.0 - e.value, *e.lambda_min);
      out.add("spectrum_upper", params({{"k", k}}), *e.lambda_max, 1.0 + e.value);
    }
  }

  for (Index k = 1; k <= top; ++k) {
    for (Index k1 = k + 1; k1 <= top; ++k1) {
      out.add("delta_monotone", params({{"k", k}, {"k1", k1}}), d(k), d(k1));
    }
  }

  for (Index k = 1; k < top; ++k) {
    for (Index k2 = 1; k + k2 <= top; ++k2) {
      for (Index k1 = k; k1 < top; ++k1) {
        for (Index k12 = k2; k1 + k12 <= top; ++k12) {
          if (k1 == k && k12 == k2) continue;
          out.add("theta_monotone",
                  params({{"k", k}, {"k2", k2}, {"k1", k1}, {"k12", k12}}), t(k, k2),
                  t(k1, k12));
        }
      }
    }
  }

  for (Index k = 1; k < top; ++k) {
    for (Index k2 = 1; k + k2 <= top; ++k2) {
      const std::string in = params({{"k", k}, {"k2", k2}});
      const double th = t(k, k2);
      const double dsum = d(k + k2);
      const double dk = d(k);
      const double dk2 = d(k2);
      const double kk = static_cast<double>(k);
      const double kk2 = static_cast<double>(k2);
      out.add("theta_le_delta", in, th, dsum);
      out.add("delta_sum_upper", in, dsum, th + std::max(dk, dk2));
      out.add("delta_sum_weighted", in, dsum, th + (kk * dk + kk2 * dk2) / (kk + kk2));
      out.add("delta_sum_balanced", in, dsum,
              2.0 * std::sqrt(kk * kk2) / (kk + kk2) * th + std::max(dk, dk2));
    }
  }

  for (Index k = 1; k < top; ++k) {
    for (Index m = 2; k + m <= top; ++m) {
      for (const auto& parts : proper_partitions(m)) {
        double theta_sq = 0.0;
        double delta_sq = 0.0;
        for (Index part : parts) {
          theta_sq += t(k, part) * t(k, part);
          delta_sq += d(k + part) * d(k + part);
        }
        const std::string in = "k=" + std::to_string(k) + ";parts=" + join_parts(parts);
        out.add("theta_partition_sum", in, t(k, m), std::sqrt(theta_sq));
        out.add("theta_partition_delta", in, std::sqrt(theta_sq), std::sqrt(delta_sq));
      }
    }
  }

  // a = m / k2 >= 1 with a * k2 = m integral.
  for (Index k = 1; k < top; ++k) {
    for (Index k2 = 1; k + k2 <= top; ++k2) {
      for (Index m = k2 + 1; k + m <= top; ++m) {
        const double a = static_cast<double>(m) / static_cast<double>(k2);
        out.add("sqrt_lifting", params({{"k", k}, {"k2", k2}, {"m", m}}), t(k, m),
                std::sqrt(a) * t(k, k2));
      }
    }
  }

  for (Index k = 1; 4 * k <= top; ++k) {
    out.add("delta_4k", params({{"k", k}}), d(4 * k), 3.0 * d(2 * k));
  }
  for (Index k = 1; 3 * k <= top; ++k) {
    out.add("delta_3k", params({{"k", k}}), d(3 * k),
            d(k) / 3.0 + (std::sqrt(2.0) + 2.0 / 3.0) * d(2 * k));
  }
  return out.take();
}

void write_audit_csv(std::ostream& os, const InequalityAuditReport& report) {
  os << "inequality_id,lhs,rhs,slack,holds\n";
  for (const AuditEntry& e : report.entries) {
    os << e.inequality_id << '[' << e.inputs << "]," << format_double(e.lhs) << ','
       << format_double(e.rhs) << ',' << format_double(e.slack) << ','
       << (e.holds ? "true" : "false") << '\n';
  }
}

}  // namespace ripkit
