#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "pql/chain_cover.hpp"
#include "pql/graph.hpp"
#include "pql/oracle.hpp"
#include "pql/tree_learn.hpp"

namespace pql {

struct LearnerConfig {
  int d = 2;                     // degree bound of the hidden graph
  double c1 = 6.0;               // sample-size factor: samples of size c1*sqrt(|Y|)
  double c2 = 24.0;              // estimator factor: K = ceil(c2 * log2 n) draws
  std::size_t g_base = 0;        // brute-force below this scope size; 0 -> max(16, d+2)
  int eps_cap = 4;               // sample-narrowing restarts before giving up
  std::size_t sep_loop_cap = 0;  // split attempts before giving up; 0 -> 64*d
  double butterfly_c = 2.0;      // sample factor for butterfly source/sink sampling
  std::uint64_t seed = 1;

  std::size_t base_size() const {
    return g_base ? g_base : std::max<std::size_t>(16, static_cast<std::size_t>(d) + 2);
  }
  std::size_t sep_cap() const {
    return sep_loop_cap ? sep_loop_cap : 64 * static_cast<std::size_t>(d);
  }
  void validate() const {
    if (d < 2) fail(Errc::bad_config, "degree bound must be at least 2");
    // below 8*ln2 the geometric-shrink argument for sample narrowing breaks
    if (!(c1 > 8.0 * std::log(2.0))) fail(Errc::bad_config, "sample factor c1 too small");
    if (!(c2 > 0.0)) fail(Errc::bad_config, "estimator factor c2 must be positive");
    if (eps_cap < 1) fail(Errc::bad_config, "narrowing cap must be at least 1");
    if (!(butterfly_c > 0.0)) fail(Errc::bad_config, "butterfly sample factor must be positive");
  }
};

namespace detail {

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

/// Independent keep-with-probability min(1, m/|Y|) sample; preserves order.
inline std::vector<VertexId> bernoulli_sample(std::span<const VertexId> y, double m,
                                              std::mt19937_64& rng) {
  const double p = y.empty() ? 0.0 : std::min(1.0, m / static_cast<double>(y.size()));
  std::bernoulli_distribution keep(p);
  std::vector<VertexId> out;
  for (VertexId v : y)
    if (keep(rng)) out.push_back(v);
  return out;
}

/// Elements of S with no strict ancestor in S (tops) or no strict descendant
/// in S (bottoms), via one all-pairs round.  S must be sorted; the result is.
inline std::vector<VertexId> extreme_elements(std::span<const VertexId> s, PathOracle& o,
                                              bool bottoms) {
  const std::size_t k = s.size();
  if (k == 1) return {s[0]};
  std::vector<Edge> probes;
  probes.reserve(k * (k - 1));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) probes.emplace_back(s[i], s[j]);
  auto ans = o.batch(probes);
  std::vector<std::uint8_t> out(k, 1);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && ans[idx++]) out[bottoms ? i : j] = 0;
  std::vector<VertexId> kept;
  for (std::size_t i = 0; i < k; ++i)
    if (out[i]) kept.push_back(s[i]);
  return kept;
}

inline std::vector<VertexId> sorted_copy(std::span<const VertexId> v) {
  std::vector<VertexId> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Finds a source of the scope's induced sub-DAG: repeatedly samples, keeps
/// the lowest-id sample element nobody else in the sample reaches, and
/// narrows the candidate set to that element's ancestors (which always retain
/// every source above it).  Always exact when it returns; a stalled narrowing
/// loop surfaces as an iteration_cap error instead of a wrong answer.
inline VertexId learn_root(std::span<const VertexId> verts, PathOracle& o,
                           const LearnerConfig& cfg, std::mt19937_64& rng) {
  if (verts.empty()) fail(Errc::empty_vertex_set, "root search over no vertices");
  std::vector<VertexId> y = detail::sorted_copy(verts);
  const std::size_t m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(cfg.c1 * std::sqrt(static_cast<double>(y.size())))));
  int iters = 0;
  while (y.size() > m) {
    if (++iters > cfg.eps_cap)
      fail(Errc::iteration_cap, "root candidate set stopped shrinking");
    auto s = detail::bernoulli_sample(y, static_cast<double>(m), rng);
    if (s.size() < 2) continue;
    VertexId t = detail::extreme_elements(s, o, /*bottoms=*/false).front();
    std::vector<Edge> probes;
    probes.reserve(y.size() - 1);
    for (VertexId v : y)
      if (v != t) probes.emplace_back(v, t);
    auto ans = o.batch(probes);
    std::vector<VertexId> next;
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (ans[i]) next.push_back(probes[i].first);
    next.push_back(t);
    std::sort(next.begin(), next.end());
    y.swap(next);
  }
  if (y.size() == 1) return y[0];
  return detail::extreme_elements(y, o, /*bottoms=*/false).front();
}

/// Finds an in-neighbor of w inside the scope: one round collects w's
/// in-scope ancestors, then the same narrowing as learn_root runs toward the
/// descendant end of that set.  When the scope is closed under directed paths
/// between its members (every scope the spanning learner builds is), a
/// deepest surviving ancestor is necessarily a direct predecessor of w.
inline VertexId learn_parent(VertexId w, std::span<const VertexId> scope, PathOracle& o,
                             const LearnerConfig& cfg, std::mt19937_64& rng) {
  if (scope.empty()) fail(Errc::empty_vertex_set, "parent search over no vertices");
  std::vector<Edge> probes;
  probes.reserve(scope.size());
  for (VertexId z : scope)
    if (z != w) probes.emplace_back(z, w);
  if (probes.empty()) fail(Errc::no_parent, "scope holds only the vertex itself");
  auto ans = o.batch(probes);
  std::vector<VertexId> y;
  for (std::size_t i = 0; i < probes.size(); ++i)
    if (ans[i]) y.push_back(probes[i].first);
  if (y.empty())
    fail(Errc::no_parent, "vertex " + std::to_string(w) + " has no ancestor in scope");
  std::sort(y.begin(), y.end());
  const std::size_t m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(cfg.c1 * std::sqrt(static_cast<double>(y.size())))));
  int iters = 0;
  while (y.size() > m) {
    if (++iters > cfg.eps_cap)
      fail(Errc::iteration_cap, "parent candidate set stopped shrinking");
    auto s = detail::bernoulli_sample(y, static_cast<double>(m), rng);
    if (s.size() < 2) continue;
    VertexId b = detail::extreme_elements(s, o, /*bottoms=*/true).front();
    std::vector<Edge> nprobes;
    nprobes.reserve(y.size() - 1);
    for (VertexId v : y)
      if (v != b) nprobes.emplace_back(b, v);
    auto nans = o.batch(nprobes);
    std::vector<VertexId> next;
    for (std::size_t i = 0; i < nprobes.size(); ++i)
      if (nans[i]) next.push_back(nprobes[i].second);
    next.push_back(b);
    std::sort(next.begin(), next.end());
    y.swap(next);
  }
  if (y.size() == 1) return y[0];
  return detail::extreme_elements(y, o, /*bottoms=*/true).front();
}

/// Exact middle-band test used by the split accept gate: is cnt within
/// [n/(d+2), n(d+1)/(d+2)] inclusive, in integer arithmetic?
inline bool is_near_separator(std::size_t cnt, std::size_t n, int d) {
  const std::size_t den = static_cast<std::size_t>(d) + 2;
  return cnt * den >= n && cnt * den <= (den - 1) * n;
}

/// The tighter band [n/d, n(d-1)/d] with an additive slack on cnt.
inline bool is_even_separator(std::size_t cnt, std::size_t n, int d, std::size_t slack = 0) {
  const std::size_t dd = static_cast<std::size_t>(d);
  if ((cnt + slack) * dd < n) return false;
  const std::size_t reduced = cnt > slack ? cnt - slack : 0;
  return reduced * dd <= (dd - 1) * n;
}

/// Shrinks the candidate set between estimate rounds.  lows/highs are the
/// sample vertices whose estimated in-scope descendant counts fell below /
/// above the middle band.  One all-pairs round recovers the order among
/// them; a minimum chain cover splits them into at most a few chains; each
/// chain contributes its boundary pair: the shallowest low with no low
/// ancestor anywhere in the sample and the deepest high with no high
/// descendant anywhere in the sample.  One removal round then discards every
/// candidate lying below a chosen low or above a chosen high; the chosen
/// boundary vertices themselves survive.
inline std::vector<VertexId> filter_separator(std::span<const VertexId> lows_in,
                                              std::span<const VertexId> highs_in,
                                              std::span<const VertexId> candidates,
                                              PathOracle& o) {
  if (lows_in.empty() || highs_in.empty())
    fail(Errc::precondition, "boundary filter needs both a low and a high sample vertex");
  std::vector<VertexId> lows = detail::sorted_copy(lows_in);
  std::vector<VertexId> highs = detail::sorted_copy(highs_in);
  std::vector<VertexId> s(lows.begin(), lows.end());
  s.insert(s.end(), highs.begin(), highs.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  const std::size_t k = s.size();
  std::vector<std::uint8_t> is_low(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    is_low[i] = std::binary_search(lows.begin(), lows.end(), s[i]) ? 1 : 0;

  std::vector<Bitset> rel(k, Bitset(k));
  {
    std::vector<Edge> probes;
    probes.reserve(k * (k - 1));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j) probes.emplace_back(s[i], s[j]);
    auto ans = o.batch(probes);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j && ans[idx++]) rel[i].set(j);
  }

  std::vector<std::uint8_t> low_anc(k, 0), high_desc(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && rel[i].test(j)) {
        if (is_low[i]) low_anc[j] = 1;
        if (!is_low[j]) high_desc[i] = 1;
      }

  std::vector<VertexId> keepers;
  for (const auto& chain : minimum_chain_cover(rel)) {
    for (std::size_t pos : chain)
      if (is_low[pos] && !low_anc[pos]) {
        keepers.push_back(s[pos]);
        break;  // at most one per chain: deeper lows have this one above them
      }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      if (!is_low[*it] && !high_desc[*it]) {
        keepers.push_back(s[*it]);
        break;
      }
  }
  std::sort(keepers.begin(), keepers.end());
  keepers.erase(std::unique(keepers.begin(), keepers.end()), keepers.end());

  std::vector<VertexId> rest;
  for (VertexId z : candidates)
    if (!std::binary_search(keepers.begin(), keepers.end(), z)) rest.push_back(z);
  std::vector<VertexId> survivors = keepers;
  if (!rest.empty()) {
    std::vector<Edge> probes;
    probes.reserve(2 * keepers.size() * rest.size());
    for (VertexId z : rest)
      for (VertexId b : keepers) {
        bool blow = std::binary_search(lows.begin(), lows.end(), b);
        probes.emplace_back(blow ? b : z, blow ? z : b);
      }
    auto ans = o.batch(probes);
    std::size_t idx = 0;
    for (VertexId z : rest) {
      bool removed = false;
      for (std::size_t b = 0; b < keepers.size(); ++b)
        if (ans[idx++]) removed = true;
      if (!removed) survivors.push_back(z);
    }
  }
  std::sort(survivors.begin(), survivors.end());
  return survivors;
}

namespace detail {

struct BandTally {
  std::vector<VertexId> lows, mids, highs;
};

/// One round of K draws (with replacement) from the scope per sample vertex;
/// a draw equal to the vertex itself counts as reachable without a query, so
/// the estimate targets the inclusive in-scope descendant count.
inline BandTally estimate_bands(std::span<const VertexId> sample, std::span<const VertexId> scope,
                                std::size_t k_draws, int d, PathOracle& o, std::mt19937_64& rng) {
  std::vector<std::size_t> free_hits(sample.size(), 0);
  std::vector<Edge> probes;
  std::vector<std::size_t> owner;
  probes.reserve(sample.size() * k_draws);
  owner.reserve(sample.size() * k_draws);
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < k_draws; ++j) {
      VertexId z = scope[uniform_index(rng, scope.size())];
      if (z == sample[i])
        ++free_hits[i];
      else {
        probes.emplace_back(sample[i], z);
        owner.push_back(i);
      }
    }
  std::vector<std::size_t> est = free_hits;
  if (!probes.empty()) {
    auto ans = o.batch(probes);
    for (std::size_t p = 0; p < probes.size(); ++p)
      if (ans[p]) ++est[owner[p]];
  }
  BandTally tally;
  const std::size_t dd = static_cast<std::size_t>(d);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const std::size_t scaled = est[i] * (dd + 1);
    if (scaled < k_draws)
      tally.lows.push_back(sample[i]);
    else if (scaled > k_draws * dd)
      tally.highs.push_back(sample[i]);
    else
      tally.mids.push_back(sample[i]);
  }
  return tally;
}

}  // namespace detail

/// Proposes a split vertex from among v's in-scope ancestors whose in-scope
/// descendant count is estimated to land in the middle band.  Estimates only
/// propose; the caller re-counts exactly before accepting.  Returns nothing
/// when the estimates put every probed candidate on one side, which the
/// caller treats as "try another v".
inline std::optional<VertexId> learn_separator(std::span<const VertexId> ancestors, VertexId v,
                                               VertexId r, std::span<const VertexId> scope,
                                               PathOracle& o, const LearnerConfig& cfg,
                                               std::mt19937_64& rng) {
  if (ancestors.empty()) fail(Errc::empty_vertex_set, "separator search over no candidates");
  const std::size_t n = scope.size();
  const std::size_t k_draws = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(cfg.c2 * std::log2(static_cast<double>(std::max<std::size_t>(n, 2))))));

  std::vector<VertexId> sample;
  if (ancestors.size() * k_draws > n) {
    const double m = cfg.c1 * std::sqrt(static_cast<double>(ancestors.size()));
    sample = detail::bernoulli_sample(ancestors, m, rng);
    sample.push_back(v);
    sample.push_back(r);
    std::sort(sample.begin(), sample.end());
    sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
  } else {
    sample = detail::sorted_copy(ancestors);
  }

  auto tally = detail::estimate_bands(sample, scope, k_draws, cfg.d, o, rng);
  if (!tally.mids.empty()) return tally.mids.front();
  if (tally.lows.empty() || tally.highs.empty()) return std::nullopt;

  auto survivors = filter_separator(tally.lows, tally.highs, ancestors, o);
  if (survivors.empty()) return std::nullopt;
  auto second = detail::estimate_bands(survivors, scope, k_draws, cfg.d, o, rng);
  if (!second.mids.empty()) return second.mids.front();
  return std::nullopt;
}

namespace detail {

/// Arborescence over `verts` extracted from covering pairs by breadth-first
/// parent assignment from r.  Used below the brute-force threshold, where the
/// covering pairs are known exactly and may include one extra non-tree edge.
inline std::vector<Edge> bfs_arborescence(std::span<const VertexId> verts,
                                          std::span<const Edge> cover, VertexId r) {
  std::vector<VertexId> order(verts.begin(), verts.end());
  std::sort(order.begin(), order.end());
  auto pos = [&](VertexId v) {
    return static_cast<std::size_t>(
        std::lower_bound(order.begin(), order.end(), v) - order.begin());
  };
  std::vector<std::vector<VertexId>> adj(order.size());
  for (const auto& [u, w] : cover) adj[pos(u)].push_back(w);
  std::vector<std::uint8_t> seen(order.size(), 0);
  std::vector<VertexId> queue{r};
  seen[pos(r)] = 1;
  std::vector<Edge> out;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId u = queue[head];
    for (VertexId w : adj[pos(u)]) {
      std::size_t pw = pos(w);
      if (seen[pw]) continue;
      seen[pw] = 1;
      out.emplace_back(u, w);
      queue.push_back(w);
    }
  }
  if (queue.size() != order.size())
    fail(Errc::precondition, "scope is not spanned from its root");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

using AcceptHook = std::function<void(VertexId, std::span<const VertexId>)>;

/// Divide-and-conquer spanning arborescence over `scope` rooted at r.  Small
/// scopes fall back to the all-pairs baseline.  Larger ones repeat: pick a
/// random vertex, gather its ancestors, ask learn_separator for a split
/// vertex w, count |descendants of w in scope| exactly, and accept only when
/// that count sits in the middle band; then w's parent edge is learned, and
/// the two sides recurse as parallel branches.  Output edges are real edges
/// of the hidden graph; on an almost-tree input the one vertex with two
/// predecessors keeps whichever one its scope exposed.
inline std::vector<Edge> learn_spanning_tree(std::span<const VertexId> scope, VertexId r,
                                             PathOracle& o, const LearnerConfig& cfg,
                                             std::mt19937_64& rng,
                                             const AcceptHook& on_accept = {}) {
  std::vector<VertexId> v = detail::sorted_copy(scope);
  if (v.empty()) fail(Errc::empty_vertex_set, "spanning search over no vertices");
  if (!std::binary_search(v.begin(), v.end(), r))
    fail(Errc::precondition, "root not inside scope");
  if (v.size() <= cfg.base_size()) {
    auto cover = brute_force_edges(v, o);
    return detail::bfs_arborescence(v, cover, r);
  }

  const std::size_t n = v.size();
  for (std::size_t attempt = 0; attempt < cfg.sep_cap(); ++attempt) {
    std::size_t ri = static_cast<std::size_t>(
        std::lower_bound(v.begin(), v.end(), r) - v.begin());
    std::size_t idx = detail::uniform_index(rng, n - 1);
    if (idx >= ri) ++idx;
    const VertexId pivot = v[idx];

    std::vector<Edge> aprobes;
    aprobes.reserve(n - 1);
    for (VertexId z : v)
      if (z != pivot) aprobes.emplace_back(z, pivot);
    auto aans = o.batch(aprobes);
    std::vector<VertexId> ancestors;
    for (std::size_t i = 0; i < aprobes.size(); ++i)
      if (aans[i]) ancestors.push_back(aprobes[i].first);
    ancestors.push_back(pivot);
    std::sort(ancestors.begin(), ancestors.end());

    auto w = learn_separator(ancestors, pivot, r, v, o, cfg, rng);
    if (!w || *w == r) continue;

    std::vector<Edge> sprobes;
    sprobes.reserve(n - 1);
    for (VertexId z : v)
      if (z != *w) sprobes.emplace_back(*w, z);
    auto sans = o.batch(sprobes);
    std::vector<VertexId> inside{*w};
    std::vector<VertexId> outside;
    for (std::size_t i = 0; i < sprobes.size(); ++i)
      (sans[i] ? inside : outside).push_back(sprobes[i].second);
    std::sort(inside.begin(), inside.end());
    std::sort(outside.begin(), outside.end());

    const std::size_t den = static_cast<std::size_t>(cfg.d) + 2;
    const std::size_t cut = inside.size();
    if (cut * den < n || cut * den > (den - 1) * n) continue;
    if (on_accept) on_accept(*w, v);

    VertexId parent = learn_parent(*w, v, o, cfg, rng);
    std::vector<Edge> left, right;
    o.fork_join([&] { left = learn_spanning_tree(inside, *w, o, cfg, rng, on_accept); },
                [&] { right = learn_spanning_tree(outside, r, o, cfg, rng, on_accept); });
    std::vector<Edge> out;
    out.reserve(left.size() + right.size() + 1);
    out.emplace_back(parent, *w);
    out.insert(out.end(), left.begin(), left.end());
    out.insert(out.end(), right.begin(), right.end());
    std::sort(out.begin(), out.end());
    return out;
  }
  fail(Errc::loop_cap, "no acceptable split after " + std::to_string(cfg.sep_cap()) +
                           " attempts on a scope of " + std::to_string(n));
}

/// Recovers the one edge of the hidden graph missing from a known spanning
/// arborescence, in exactly two rounds.  Round one probes, for every vertex
/// and each of its children, the child against everything in the vertex's
/// subtree but not the child's: only the top of the chain leading to the
/// extra edge's source can answer yes, and its positive targets are exactly
/// the inclusive subtree of the extra edge's target, whose top is the target
/// itself.  Round two probes that target from the whole subtree of the
/// positive child; the deepest positive vertex is the source.
inline Edge learn_cross_edge(std::span<const Edge> tree, VertexId root, PathOracle& o) {
  const std::size_t n = o.universe_size();
  auto m = arborescence_metrics(n, tree, root);

  std::vector<Edge> probes;
  std::vector<VertexId> owner;
  for (std::size_t vtx = 0; vtx < n; ++vtx)
    for (VertexId c : m.children[vtx]) {
      const Bitset& wide = m.desc[vtx];
      const Bitset& narrow = m.desc[c];
      for (std::size_t t = wide.find_first(); t != Bitset::npos; t = wide.find_next(t))
        if (!narrow.test(t)) {
          probes.emplace_back(c, static_cast<VertexId>(t));
          owner.push_back(c);
        }
    }
  if (probes.empty()) fail(Errc::no_cross_edge, "tree has no room for an extra edge");
  auto ans = o.batch(probes);

  VertexId cand = kNoVertex;
  std::vector<VertexId> targets;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (!ans[i]) continue;
    if (cand == kNoVertex) cand = owner[i];
    if (owner[i] != cand)
      fail(Errc::ambiguous_candidate, "two children reach outside their subtrees");
    targets.push_back(probes[i].second);
  }
  if (cand == kNoVertex) fail(Errc::no_cross_edge, "no vertex reaches outside its subtree");
  VertexId tstar = targets.front();
  for (VertexId t : targets)
    if (m.desc_count(t) > m.desc_count(tstar)) tstar = t;

  std::vector<Edge> probes2;
  const Bitset& sub = m.desc[cand];
  for (std::size_t s = sub.find_first(); s != Bitset::npos; s = sub.find_next(s))
    if (static_cast<VertexId>(s) != tstar) probes2.emplace_back(static_cast<VertexId>(s), tstar);
  auto ans2 = o.batch(probes2);
  VertexId sstar = kNoVertex;
  for (std::size_t i = 0; i < probes2.size(); ++i)
    if (ans2[i] && (sstar == kNoVertex || m.depth[probes2[i].first] > m.depth[sstar]))
      sstar = probes2[i].first;
  if (sstar == kNoVertex) fail(Errc::no_cross_edge, "candidate chain lost its positive answers");
  return {sstar, tstar};
}

/// Full pipeline for an arborescence plus one extra non-shortcut edge: find
/// the root, learn a spanning arborescence, recover the remaining edge.  The
/// three phases are labeled in the ledger.
inline LearnResult learn_almost_tree(PathOracle& o, const LearnerConfig& cfg) {
  cfg.validate();
  const std::size_t n = o.universe_size();
  if (n == 0) fail(Errc::empty_vertex_set, "empty universe");
  std::vector<VertexId> verts(n);
  for (std::size_t i = 0; i < n; ++i) verts[i] = static_cast<VertexId>(i);
  std::mt19937_64 rng(cfg.seed);

  LearnResult res;
  {
    PhaseScope phase(o.ledger(), "root");
    res.root = learn_root(verts, o, cfg, rng);
  }
  std::vector<Edge> tree;
  {
    PhaseScope phase(o.ledger(), "spanning-tree");
    tree = learn_spanning_tree(verts, res.root, o, cfg, rng);
  }
  Edge extra;
  {
    PhaseScope phase(o.ledger(), "cross-edge");
    extra = learn_cross_edge(tree, res.root, o);
  }
  res.edges = std::move(tree);
  res.edges.push_back(extra);
  std::sort(res.edges.begin(), res.edges.end());
  res.ledger = o.ledger().snapshot();
  return res;
}

}  // namespace pql
