#include "ripkit/rip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "ripkit/combinatorics.hpp"
#include "ripkit/error.hpp"

namespace ripkit {

double RipProfile::delta_value(Index k) const {
  const auto it = delta.find(k);
  if (it == delta.end()) {
    throw Error(ErrorCode::kMissingProfileEntry,
                "profile lacks delta_" + std::to_string(k));
  }
  return it->second.value;
}

double RipProfile::theta_value(Index k, Index k2) const {
  const auto it = theta.find({k, k2});
  if (it == theta.end()) {
    throw Error(ErrorCode::kMissingProfileEntry,
                "profile lacks theta_{" + std::to_string(k) + "," +
                    std::to_string(k2) + "}");
  }
  return it->second.value;
}

std::uint64_t delta_enumeration_count(Index p, Index k) { return binomial(p, k); }

std::uint64_t theta_enumeration_count(Index p, Index k, Index k2) {
  return saturating_mul(binomial(p, k), binomial(p - k, k2));
}

namespace {

Matrix gram_block(const Matrix& gram, const std::vector<Index>& t) {
  const Index k = static_cast<Index>(t.size());
  Matrix g(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) g(i, j) = gram(t[i], t[j]);
  }
  return g;
}

Matrix cross_block(const Matrix& gram, const std::vector<Index>& a,
                   const std::vector<Index>& b) {
  Matrix m(static_cast<Index>(a.size()), static_cast<Index>(b.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = gram(a[i], b[j]);
  }
  return m;
}

// Max-reduction state. Ties keep the lower lexicographic rank, which makes
// the combine associative and commutative and the result schedule-independent.
struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t rank = std::numeric_limits<std::uint64_t>::max();
  std::vector<Index> a;
  std::vector<Index> b;
  double lambda_min = std::numeric_limits<double>::infinity();
  double lambda_max = -std::numeric_limits<double>::infinity();

  void offer(double v, std::uint64_t r, const std::vector<Index>& ta,
             const std::vector<Index>* tb) {
    if (v > value || (v == value && r < rank)) {
      value = v;
      rank = r;
      a = ta;
      if (tb != nullptr) b = *tb;
    }
  }

  void merge(const Best& o) {
    if (o.value > value || (o.value == value && o.rank < rank)) {
      value = o.value;
      rank = o.rank;
      a = o.a;
      b = o.b;
    }
    lambda_min = std::min(lambda_min, o.lambda_min);
    lambda_max = std::max(lambda_max, o.lambda_max);
  }
};

void check_budget(std::uint64_t required, std::uint64_t budget) {
  if (required > budget) throw BudgetExceeded(required, budget);
}

}  // namespace

double delta_on_support(const SensingMatrix& phi, const SupportSet& t, double eig_tol) {
  const Vector ev = sym_eigenvalues(gram_submatrix(phi, t), eig_tol);
  return std::max(ev(ev.size() - 1) - 1.0, 1.0 - ev(0));
}

DeltaEntry delta_exact(const SensingMatrix& phi, Index k, const RipOptions& opts) {
  const Index p = phi.cols();
  if (k < 1 || k > p) {
    throw Error(ErrorCode::kInvalidArity,
                "delta_k needs 1 <= k <= p, got k = " + std::to_string(k) +
                    ", p = " + std::to_string(p));
  }
  const std::uint64_t count = delta_enumeration_count(p, k);
  check_budget(count, opts.budget);

  const Matrix& gram = phi.gram();
  const unsigned workers = resolve_thread_count(opts.threads);
  std::vector<Best> partial(std::min<std::uint64_t>(workers, count));
  std::mutex slot_mutex;
  std::size_t next_slot = 0;

  parallel_ranges(count, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
    Best local;
    std::vector<Index> t = unrank_combination(begin, p, k);
    for (std::uint64_t r = begin; r < end; ++r) {
      const Vector ev = sym_eigenvalues(gram_block(gram, t), opts.eig_tol);
      const double lo = ev(0);
      const double hi = ev(ev.size() - 1);
      local.lambda_min = std::min(local.lambda_min, lo);
      local.lambda_max = std::max(local.lambda_max, hi);
      local.offer(std::max(hi - 1.0, 1.0 - lo), r, t, nullptr);
      next_combination(t, p);
    }
    std::lock_guard lock(slot_mutex);
    partial[next_slot++] = std::move(local);
  });

  Best best;
  for (const Best& b : partial) best.merge(b);
  DeltaEntry out;
  out.k = k;
  out.value = best.value;
  out.witness = SupportSet(best.a, p);
  out.lambda_min = best.lambda_min;
  out.lambda_max = best.lambda_max;
  return out;
}

ThetaEntry theta_exact(const SensingMatrix& phi, Index k, Index k2,
                       const RipOptions& opts) {
  const Index p = phi.cols();
  if (k < 1 || k2 < 1 || k + k2 > p) {
    throw Error(ErrorCode::kInvalidArity,
                "theta_{k,k'} needs k, k' >= 1 and k + k' <= p, got (" +
                    std::to_string(k) + ", " + std::to_string(k2) +
                    "), p = " + std::to_string(p));
  }
  const std::uint64_t outer = binomial(p, k);
  const std::uint64_t inner = binomial(p - k, k2);
  check_budget(theta_enumeration_count(p, k, k2), opts.budget);

  const Matrix& gram = phi.gram();
  const unsigned workers = resolve_thread_count(opts.threads);
  std::vector<Best> partial(std::min<std::uint64_t>(workers, outer));
  std::mutex slot_mutex;
  std::size_t next_slot = 0;

  parallel_ranges(outer, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
    Best local;
    std::vector<Index> t = unrank_combination(begin, p, k);
    std::vector<Index> rest;
    std::vector<Index> pick(static_cast<std::size_t>(k2));
    std::vector<Index> t2(static_cast<std::size_t>(k2));
    for (std::uint64_t r1 = begin; r1 < end; ++r1) {
      rest.clear();
      for (Index i = 0, j = 0; i < p; ++i) {
        if (j < k && t[static_cast<std::size_t>(j)] == i) {
          ++j;
        } else {
          rest.push_back(i);
        }
      }
      for (Index i = 0; i < k2; ++i) pick[static_cast<std::size_t>(i)] = i;
      std::uint64_t r2 = 0;
      do {
        for (Index i = 0; i < k2; ++i) {
          t2[static_cast<std::size_t>(i)] = rest[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
        }
        const double v = spectral_norm(cross_block(gram, t, t2), opts.eig_tol);
        local.offer(v, r1 * inner + r2, t, &t2);
        ++r2;
      } while (next_combination(pick, p - k));
      next_combination(t, p);
    }
    std::lock_guard lock(slot_mutex);
    partial[next_slot++] = std::move(local);
  });

  Best best;
  for (const Best& b : partial) best.merge(b);
  ThetaEntry out;
  out.k = k;
  out.k2 = k2;
  out.value = best.value;
  out.witness_a = SupportSet(best.a, p);
  out.witness_b = SupportSet(best.b, p);
  return out;
}

// ---------------------------------------------------------------------------
// ProfileCache

std::optional<DeltaEntry> ProfileCache::find_delta(const std::string& id, Index k) const {
  std::lock_guard lock(mutex_);
  const auto it = delta_.find({id, k});
  if (it == delta_.end()) return std::nullopt;
  return it->second;
}

std::optional<ThetaEntry> ProfileCache::find_theta(const std::string& id, Index k,
                                                   Index k2) const {
  std::lock_guard lock(mutex_);
  const auto it = theta_.find({id, k, k2});
  if (it == theta_.end()) return std::nullopt;
  return it->second;
}

void ProfileCache::insert_delta(const std::string& id, const DeltaEntry& e) {
  std::lock_guard lock(mutex_);
  delta_.try_emplace({id, e.k}, e);
}

void ProfileCache::insert_theta(const std::string& id, const ThetaEntry& e) {
  std::lock_guard lock(mutex_);
  theta_.try_emplace({id, e.k, e.k2}, e);
}

std::size_t ProfileCache::size() const {
  std::lock_guard lock(mutex_);
  return delta_.size() + theta_.size();
}

// ---------------------------------------------------------------------------
// RipEngine

RipEngine::RipEngine(SensingMatrix phi, RipOptions opts, ProfileCache* cache)
    : phi_(std::move(phi)), opts_(opts), cache_(cache) {
  profile_.matrix_id = phi_.id();
  profile_.n = phi_.rows();
  profile_.p = phi_.cols();
}

RipEngine::RipEngine(SensingMatrix phi, RipProfile seed, RipOptions opts)
    : phi_(std::move(phi)), opts_(opts), profile_(std::move(seed)) {
  if (profile_.matrix_id != phi_.id() || profile_.n != phi_.rows() ||
      profile_.p != phi_.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "profile " + profile_.matrix_id + " does not belong to matrix " +
                    phi_.id());
  }
}

const DeltaEntry& RipEngine::delta(Index k) {
  if (auto it = profile_.delta.find(k); it != profile_.delta.end()) return it->second;
  std::optional<DeltaEntry> e;
  if (cache_ != nullptr) e = cache_->find_delta(phi_.id(), k);
  if (!e) {
    e = delta_exact(phi_, k, opts_);
    if (cache_ != nullptr) cache_->insert_delta(phi_.id(), *e);
  }
  return profile_.delta.emplace(k, std::move(*e)).first->second;
}

const ThetaEntry& RipEngine::theta(Index k, Index k2) {
  if (auto it = profile_.theta.find({k, k2}); it != profile_.theta.end()) {
    return it->second;
  }
  std::optional<ThetaEntry> e;
  if (cache_ != nullptr) e = cache_->find_theta(phi_.id(), k, k2);
  if (!e) {
    e = theta_exact(phi_, k, k2, opts_);
    if (cache_ != nullptr) cache_->insert_theta(phi_.id(), *e);
  }
  return profile_.theta.emplace(std::pair{k, k2}, std::move(*e)).first->second;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json support_json(const SupportSet& s) {
  return nlohmann::json(s.indices());
}

SupportSet support_from_json(const nlohmann::json& j, Index p) {
  return SupportSet(j.get<std::vector<Index>>(), p);
}

}  // namespace

nlohmann::json profile_to_json(const RipProfile& profile) {
  nlohmann::json j;
  j["matrix_id"] = profile.matrix_id;
  j["n"] = profile.n;
  j["p"] = profile.p;
  j["delta"] = nlohmann::json::array();
  for (const auto& [k, e] : profile.delta) {
    nlohmann::json d{{"k", k}, {"value", e.value}, {"witness", support_json(e.witness)}};
    if (e.lambda_min) d["lambda_min"] = *e.lambda_min;
    if (e.lambda_max) d["lambda_max"] = *e.lambda_max;
    j["delta"].push_back(std::move(d));
  }
  j["theta"] = nlohmann::json::array();
  for (const auto& [key, e] : profile.theta) {
    j["theta"].push_back({{"k", e.k},
                          {"k2", e.k2},
                          {"value", e.value},
                          {"witnessA", support_json(e.witness_a)},
                          {"witnessB", support_json(e.witness_b)}});
  }
  return j;
}

RipProfile profile_from_json(const nlohmann::json& j) {
  try {
    RipProfile out;
    out.matrix_id = j.at("matrix_id").get<std::string>();
    out.n = j.at("n").get<Index>();
    out.p = j.at("p").get<Index>();
    for (const auto& d : j.at("delta")) {
      DeltaEntry e;
      e.k = d.at("k").get<Index>();
      e.value = d.at("value").get<double>();
      e.witness = support_from_json(d.at("witness"), out.p);
      if (d.contains("lambda_min")) e.lambda_min = d["lambda_min"].get<double>();
      if (d.contains("lambda_max")) e.lambda_max = d["lambda_max"].get<double>();
      out.delta.emplace(e.k, std::move(e));
    }
    for (const auto& t : j.at("theta")) {
      ThetaEntry e;
      e.k = t.at("k").get<Index>();
      e.k2 = t.at("k2").get<Index>();
      e.value = t.at("value").get<double>();
      e.witness_a = support_from_json(t.at("witnessA"), out.p);
      e.witness_b = support_from_json(t.at("witnessB"), out.p);
      out.theta.emplace(std::pair{e.k, e.k2}, std::move(e));
    }
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParseError, std::string("profile JSON: ") + ex.what());
  }
}

}  // namespace ripkit
