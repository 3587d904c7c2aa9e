#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pql/graph.hpp"

namespace pql {

struct PhaseCounters {
  std::uint64_t queries = 0;
  std::uint64_t rounds = 0;
};

struct LedgerSnapshot {
  std::uint64_t queries = 0;
  std::uint64_t raw_queries = 0;
  std::uint64_t rounds = 0;
  std::vector<std::pair<std::string, PhaseCounters>> phases;  // first-use order
};

/// Counts charged queries, raw queries and adaptive rounds.
///
/// Rounds model the critical path of the query schedule: a single query or a
/// batch costs one round, and fork_join scopes add only the maximum of their
/// branches' rounds while queries accumulate across all branches.  Branches
/// execute sequentially; only the accounting is parallel.
///
/// Phase counters attribute charged queries (and rounds, as a flat sum) to the
/// innermost active label; they do not participate in fork/join maxima.
class QueryLedger {
 public:
  std::uint64_t queries() const { return queries_; }
  std::uint64_t raw_queries() const { return raw_; }
  std::uint64_t rounds() const { return rounds_; }

  void charge_answer(bool charged) {
    ++raw_;
    if (charged) {
      ++queries_;
      if (!phase_stack_.empty()) phase_at(phase_stack_.back()).queries++;
    }
  }

  void charge_round() {
    ++rounds_;
    if (!phase_stack_.empty()) phase_at(phase_stack_.back()).rounds++;
  }

  template <class... Fs>
  void fork_join(Fs&&... branches) {
    const std::uint64_t base = rounds_;
    std::uint64_t longest = 0;
    auto run = [&](auto&& f) {
      rounds_ = 0;
      f();
      longest = std::max(longest, rounds_);
    };
    (run(std::forward<Fs>(branches)), ...);
    rounds_ = base + longest;
  }

  template <class F>
  void fork_join_indexed(std::size_t count, F&& body) {
    const std::uint64_t base = rounds_;
    std::uint64_t longest = 0;
    for (std::size_t i = 0; i < count; ++i) {
      rounds_ = 0;
      body(i);
      longest = std::max(longest, rounds_);
    }
    rounds_ = base + longest;
  }

  void begin_phase(const std::string& label) {
    phase_at(label);  // reserve slot in first-use order
    phase_stack_.push_back(label);
  }
  void end_phase() {
    if (!phase_stack_.empty()) phase_stack_.pop_back();
  }

  LedgerSnapshot snapshot() const {
    LedgerSnapshot s;
    s.queries = queries_;
    s.raw_queries = raw_;
    s.rounds = rounds_;
    s.phases = phases_;
    return s;
  }

 private:
  PhaseCounters& phase_at(const std::string& label) {
    for (auto& [name, c] : phases_)
      if (name == label) return c;
    phases_.emplace_back(label, PhaseCounters{});
    return phases_.back().second;
  }

  std::uint64_t queries_ = 0;
  std::uint64_t raw_ = 0;
  std::uint64_t rounds_ = 0;
  std::vector<std::pair<std::string, PhaseCounters>> phases_;
  std::vector<std::string> phase_stack_;
};

class QueryLedger;

/// RAII phase label.
class PhaseScope {
 public:
  PhaseScope(QueryLedger& led, const std::string& label) : led_(led) { led_.begin_phase(label); }
  ~PhaseScope() { led_.end_phase(); }
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;

 private:
  QueryLedger& led_;
};

struct OracleConfig {
  bool dedup_cache = false;  // when set, repeats of a pair charge only once
};

/// Answer source for path queries.  Learners see only this interface: one
/// boolean per ordered pair, plus batching that defines round accounting.
class PathOracle {
 public:
  virtual ~PathOracle() = default;

  virtual std::size_t universe_size() const = 0;
  virtual QueryLedger& ledger() = 0;

  /// Charged answer with no round accounting; adapters build on this.
  virtual bool answer_charged(VertexId u, VertexId v) = 0;

  /// One adaptive round containing a single query.
  bool query(VertexId u, VertexId v) {
    bool a = answer_charged(u, v);
    ledger().charge_round();
    return a;
  }

  /// One adaptive round containing |pairs| queries.
  std::vector<std::uint8_t> batch(std::span<const Edge> pairs) {
    if (pairs.empty()) fail(Errc::empty_batch, "batch of zero pairs");
    std::vector<std::uint8_t> out;
    out.reserve(pairs.size());
    for (const auto& [u, v] : pairs) out.push_back(answer_charged(u, v) ? 1 : 0);
    ledger().charge_round();
    return out;
  }

  /// Sum of path(s, x) over x in xs, one round; duplicates charge per
  /// occurrence.
  std::size_t count(VertexId s, std::span<const VertexId> xs) {
    if (xs.empty()) fail(Errc::empty_batch, "count over zero targets");
    std::size_t c = 0;
    for (VertexId x : xs)
      if (answer_charged(s, x)) ++c;
    ledger().charge_round();
    return c;
  }

  template <class... Fs>
  void fork_join(Fs&&... branches) {
    ledger().fork_join(std::forward<Fs>(branches)...);
  }
};

/// Ground-truth oracle over a prebuilt strict-reachability index.
class IndexOracle : public PathOracle {
 public:
  explicit IndexOracle(const ReachabilityIndex& idx, OracleConfig cfg = {})
      : idx_(idx), cfg_(cfg) {}

  std::size_t universe_size() const override { return idx_.n; }
  QueryLedger& ledger() override { return ledger_; }

  bool answer_charged(VertexId u, VertexId v) override {
    if (u >= idx_.n || v >= idx_.n)
      fail(Errc::vertex_out_of_range,
           "query (" + std::to_string(u) + "," + std::to_string(v) + ")");
    bool charged = true;
    if (cfg_.dedup_cache) {
      std::uint64_t key = static_cast<std::uint64_t>(u) * idx_.n + v;
      charged = seen_.insert(key).second;
    }
    ledger_.charge_answer(charged);
    return u != v && idx_.rows[u].test(v);
  }

 private:
  const ReachabilityIndex& idx_;
  OracleConfig cfg_;
  QueryLedger ledger_;
  std::unordered_set<std::uint64_t> seen_;
};

/// Answers path(u,v) as base path(v,u); shares the base ledger, so learners
/// running against the reversed graph charge the same books.
class InverseOracle : public PathOracle {
 public:
  explicit InverseOracle(PathOracle& base) : base_(base) {}

  std::size_t universe_size() const override { return base_.universe_size(); }
  QueryLedger& ledger() override { return base_.ledger(); }
  bool answer_charged(VertexId u, VertexId v) override { return base_.answer_charged(v, u); }

 private:
  PathOracle& base_;
};

/// Refuses queries that touch vertices outside an allowed subset.  Answers and
/// ids are unchanged; nesting intersects scopes.
class RestrictedOracle : public PathOracle {
 public:
  RestrictedOracle(PathOracle& base, std::span<const VertexId> allowed)
      : base_(base), allowed_(base.universe_size()) {
    for (VertexId v : allowed) {
      if (v >= allowed_.size()) fail(Errc::vertex_out_of_range, "scope vertex " + std::to_string(v));
      allowed_.set(v);
    }
  }

  std::size_t universe_size() const override { return base_.universe_size(); }
  QueryLedger& ledger() override { return base_.ledger(); }

  bool answer_charged(VertexId u, VertexId v) override {
    if (u >= allowed_.size() || v >= allowed_.size())
      fail(Errc::vertex_out_of_range,
           "query (" + std::to_string(u) + "," + std::to_string(v) + ")");
    if (!allowed_.test(u) || !allowed_.test(v))
      fail(Errc::vertex_not_in_scope,
           "query (" + std::to_string(u) + "," + std::to_string(v) + ") leaves the restricted scope");
    return base_.answer_charged(u, v);
  }

 private:
  PathOracle& base_;
  Bitset allowed_;
};

/// Oracle for undirected trees: sep(a,b,c) == 1 iff deleting b disconnects a
/// from c, i.e. b is an interior vertex of the unique a-c path.  b in {a,c}
/// answers 0.  Charged like path queries, with its own ledger.
class SeparatorOracle {
 public:
  SeparatorOracle(std::size_t n, const std::vector<Edge>& undirected_edges, OracleConfig cfg = {})
      : n_(n), cfg_(cfg) {
    if (n == 0) fail(Errc::empty_vertex_set, "separator oracle over empty tree");
    if (undirected_edges.size() != n - 1)
      fail(Errc::not_tree, "expected " + std::to_string(n - 1) + " edges, got " +
                               std::to_string(undirected_edges.size()));
    std::vector<std::vector<VertexId>> adj(n);
    for (const auto& [u, v] : undirected_edges) {
      if (u >= n || v >= n) fail(Errc::vertex_out_of_range, "tree edge endpoint");
      if (u == v) fail(Errc::not_tree, "self-loop at " + std::to_string(u));
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    parent_.assign(n, kNoVertex);
    depth_.assign(n, 0);
    std::vector<VertexId> order{0};
    order.reserve(n);
    parent_[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      VertexId u = order[i];
      for (VertexId w : adj[u])
        if (parent_[w] == kNoVertex) {
          parent_[w] = u;
          depth_[w] = depth_[u] + 1;
          order.push_back(w);
        }
    }
    if (order.size() != n) fail(Errc::not_tree, "edge set is not connected");
    log_ = 1;
    while ((std::size_t{1} << log_) < n) ++log_;
    up_.assign(log_, parent_);
    for (std::size_t k = 1; k < log_; ++k)
      for (std::size_t v = 0; v < n; ++v) up_[k][v] = up_[k - 1][up_[k - 1][v]];
  }

  std::size_t universe_size() const { return n_; }
  QueryLedger& ledger() { return ledger_; }

  /// One adaptive round containing a single separator query.
  bool query(VertexId a, VertexId b, VertexId c) {
    bool ans = answer_charged(a, b, c);
    ledger_.charge_round();
    return ans;
  }

  /// Charged answer without round accounting, for adapters that batch.
  bool answer_charged(VertexId a, VertexId b, VertexId c) {
    if (a >= n_ || b >= n_ || c >= n_) fail(Errc::vertex_out_of_range, "separator query endpoint");
    bool charged = true;
    if (cfg_.dedup_cache) {
      std::uint64_t key = (static_cast<std::uint64_t>(a) * n_ + b) * n_ + c;
      charged = seen_.insert(key).second;
    }
    ledger_.charge_answer(charged);
    if (b == a || b == c || a == c) return false;
    return dist(a, b) + dist(b, c) == dist(a, c);
  }

 private:
  VertexId lca(VertexId a, VertexId b) const {
    if (depth_[a] < depth_[b]) std::swap(a, b);
    std::uint32_t diff = depth_[a] - depth_[b];
    for (std::size_t k = 0; k < log_; ++k)
      if (diff & (1u << k)) a = up_[k][a];
    if (a == b) return a;
    for (std::size_t k = log_; k-- > 0;)
      if (up_[k][a] != up_[k][b]) {
        a = up_[k][a];
        b = up_[k][b];
      }
    return up_[0][a];
  }

  std::uint32_t dist(VertexId a, VertexId b) const {
    return depth_[a] + depth_[b] - 2 * depth_[lca(a, b)];
  }

  std::size_t n_;
  OracleConfig cfg_;
  QueryLedger ledger_;
  std::unordered_set<std::uint64_t> seen_;
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> depth_;
  std::size_t log_ = 1;
  std::vector<std::vector<VertexId>> up_;
};

/// Presents an undirected tree as a rooted digraph: path(u,v) := sep(r,u,v),
/// which holds exactly when u is a strict ancestor of v once the tree is
/// hung from r.  Queries with u == r are answered locally without charging
/// (the root is an ancestor of everything else by definition).
class SepPathAdapter : public PathOracle {
 public:
  SepPathAdapter(SeparatorOracle& sep, VertexId root) : sep_(sep), root_(root) {
    if (root >= sep.universe_size()) fail(Errc::vertex_out_of_range, "adapter root");
  }

  std::size_t universe_size() const override { return sep_.universe_size(); }
  QueryLedger& ledger() override { return sep_.ledger(); }

  bool answer_charged(VertexId u, VertexId v) override {
    if (u >= sep_.universe_size() || v >= sep_.universe_size())
      fail(Errc::vertex_out_of_range, "adapter query endpoint");
    if (u == root_) return v != root_;
    return sep_.answer_charged(root_, u, v);
  }

 private:
  SeparatorOracle& sep_;
  VertexId root_;
};

}  // namespace pql
