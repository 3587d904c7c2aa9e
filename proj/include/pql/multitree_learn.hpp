#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pql/dag_learn.hpp"
#include "pql/oracle.hpp"
#include "pql/tree_learn.hpp"

namespace pql {

struct MultitreeResult {
  std::vector<Edge> edges;
  std::vector<VertexId> roots;
  LedgerSnapshot ledger;
};

namespace detail {

/// One round collecting the inclusive descendant set of r (or ancestor set,
/// with flipped = true) over the full universe.
inline std::vector<VertexId> cone_of(VertexId r, PathOracle& o, bool flipped) {
  const std::size_t n = o.universe_size();
  std::vector<Edge> probes;
  probes.reserve(n - 1);
  for (std::size_t z = 0; z < n; ++z)
    if (static_cast<VertexId>(z) != r)
      probes.emplace_back(flipped ? static_cast<VertexId>(z) : r,
                          flipped ? r : static_cast<VertexId>(z));
  std::vector<VertexId> cone{r};
  if (!probes.empty()) {
    auto ans = o.batch(probes);
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (ans[i]) cone.push_back(flipped ? probes[i].first : probes[i].second);
  }
  std::sort(cone.begin(), cone.end());
  return cone;
}

}  // namespace detail

/// Learns a DAG with at most one directed path between any ordered pair by
/// peeling sources.  The uncovered set stays closed under ancestors, so a
/// root search restricted to it yields a true source r; r's inclusive
/// descendant cone induces an arborescence (a second in-cone predecessor
/// would mean a second r-to-vertex path), which the spanning learner
/// recovers.  Cones of different sources may overlap; the edge union with
/// duplicates removed is exactly the hidden edge set.
inline MultitreeResult learn_multitree(PathOracle& o, const LearnerConfig& cfg) {
  cfg.validate();
  const std::size_t n = o.universe_size();
  if (n == 0) fail(Errc::empty_vertex_set, "empty universe");
  std::mt19937_64 rng(cfg.seed);

  std::vector<VertexId> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = static_cast<VertexId>(i);

  MultitreeResult res;
  while (!remaining.empty()) {
    VertexId r;
    {
      RestrictedOracle ro(o, remaining);
      r = learn_root(remaining, ro, cfg, rng);
    }
    auto cone = detail::cone_of(r, o, /*flipped=*/false);
    {
      RestrictedOracle ro(o, cone);
      auto tree = learn_spanning_tree(cone, r, ro, cfg, rng);
      res.edges.insert(res.edges.end(), tree.begin(), tree.end());
    }
    res.roots.push_back(r);
    std::vector<VertexId> next;
    std::set_difference(remaining.begin(), remaining.end(), cone.begin(), cone.end(),
                        std::back_inserter(next));
    if (next.size() == remaining.size())
      fail(Errc::root_not_progressing, "source peeling removed nothing; root " +
                                           std::to_string(r) + " is outside the uncovered set");
    remaining.swap(next);
  }
  std::sort(res.edges.begin(), res.edges.end());
  res.edges.erase(std::unique(res.edges.begin(), res.edges.end()), res.edges.end());
  std::sort(res.roots.begin(), res.roots.end());
  res.ledger = o.ledger().snapshot();
  return res;
}

/// Root of a tree found without a long sequential scan: collect the lowest
/// vertex's ancestor chain in one round, learn that chain as a tree hanging
/// from the low vertex against the direction-flipped oracle, and read off
/// its leaf — the original root.
inline VertexId learn_root_via_inverse_tree(PathOracle& o, const LearnerConfig& cfg) {
  cfg.validate();
  const std::size_t n = o.universe_size();
  if (n == 0) fail(Errc::empty_vertex_set, "empty universe");
  const VertexId v = 0;
  auto chain = detail::cone_of(v, o, /*flipped=*/true);
  if (chain.size() == 1) return v;
  InverseOracle inv(o);
  auto tree = learn_short_tree(chain, v, cfg.d, inv);
  Bitset has_child(n);
  for (const auto& e : tree) has_child.set(e.first);
  for (VertexId c : chain)
    if (!has_child.test(c)) return c;
  fail(Errc::not_tree, "ancestor chain closed on itself");
}

/// Learns the level-structured network with unique source-to-sink paths:
/// 2^h sources and sinks, vertex count 2^h*(h+1).  One sequential root scan
/// bootstraps a source; its descendant cone is a tree whose leaves are all
/// sinks, and the lowest sink's ancestor cone is a tree (against the flipped
/// oracle) whose leaves are all sources.  Bernoulli samples of sources and
/// sinks then each contribute their cone's tree; every edge lies in some
/// source cone and some sink cone, so at full sample rate — which the default
/// sample factor forces up to h = 8 — the union is exact deterministically.
inline MultitreeResult learn_butterfly(PathOracle& o, const LearnerConfig& cfg) {
  cfg.validate();
  const std::size_t n = o.universe_size();
  int h = -1;
  for (int k = 0; k <= 26; ++k)
    if ((static_cast<std::size_t>(k) + 1) * (std::size_t{1} << k) == n) {
      h = k;
      break;
    }
  if (h < 0)
    fail(Errc::not_butterfly, std::to_string(n) + " vertices fit no 2^h*(h+1) level grid");
  std::mt19937_64 rng(cfg.seed);
  const std::size_t cone_size = (std::size_t{2} << h) - 1;  // 2^(h+1) - 1
  const std::size_t side = std::size_t{1} << h;

  MultitreeResult res;
  std::vector<VertexId> verts(n);
  for (std::size_t i = 0; i < n; ++i) verts[i] = static_cast<VertexId>(i);
  if (n == 1) {
    res.roots = {0};
    res.ledger = o.ledger().snapshot();
    return res;
  }

  const VertexId r = sequential_find_root(verts, o);
  auto down = detail::cone_of(r, o, false);
  if (down.size() != cone_size)
    fail(Errc::not_butterfly, "source cone has " + std::to_string(down.size()) +
                                  " vertices, expected " + std::to_string(cone_size));
  auto rtree = learn_short_tree(down, r, 4, o);
  Bitset internal(n);
  for (const auto& e : rtree) internal.set(e.first);
  std::vector<VertexId> sinks;
  for (VertexId x : down)
    if (!internal.test(x)) sinks.push_back(x);
  if (sinks.size() != side)
    fail(Errc::not_butterfly, "source cone has " + std::to_string(sinks.size()) + " leaves");

  InverseOracle inv(o);
  auto up = detail::cone_of(sinks.front(), o, true);
  if (up.size() != cone_size)
    fail(Errc::not_butterfly, "sink cone has " + std::to_string(up.size()) + " vertices");
  auto ltree = learn_short_tree(up, sinks.front(), 4, inv);
  internal.reset();
  for (const auto& e : ltree) internal.set(e.first);
  std::vector<VertexId> sources;
  for (VertexId x : up)
    if (!internal.test(x)) sources.push_back(x);
  if (sources.size() != side)
    fail(Errc::not_butterfly, "sink cone has " + std::to_string(sources.size()) + " leaves");

  res.edges = rtree;
  for (const auto& e : ltree) res.edges.emplace_back(e.second, e.first);

  const double m = cfg.butterfly_c * std::sqrt(static_cast<double>(side)) * std::max(h, 1);
  auto s_sample = detail::bernoulli_sample(sources, m, rng);
  auto t_sample = detail::bernoulli_sample(sinks, m, rng);

  // one round fetches every sampled cone
  std::vector<Edge> probes;
  for (VertexId s : s_sample)
    for (std::size_t z = 0; z < n; ++z)
      if (static_cast<VertexId>(z) != s) probes.emplace_back(s, static_cast<VertexId>(z));
  for (VertexId t : t_sample)
    for (std::size_t z = 0; z < n; ++z)
      if (static_cast<VertexId>(z) != t) probes.emplace_back(static_cast<VertexId>(z), t);
  std::vector<std::vector<VertexId>> cones(s_sample.size() + t_sample.size());
  if (!probes.empty()) {
    auto ans = o.batch(probes);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < s_sample.size(); ++i) {
      cones[i].push_back(s_sample[i]);
      for (std::size_t z = 0; z < n - 1; ++z, ++idx)
        if (ans[idx]) cones[i].push_back(probes[idx].second);
    }
    for (std::size_t j = 0; j < t_sample.size(); ++j) {
      auto& cone = cones[s_sample.size() + j];
      cone.push_back(t_sample[j]);
      for (std::size_t z = 0; z < n - 1; ++z, ++idx)
        if (ans[idx]) cone.push_back(probes[idx].first);
    }
    for (auto& cone : cones) std::sort(cone.begin(), cone.end());
  }

  // parallel branches: each sampled cone learned as its own tree
  std::vector<std::vector<Edge>> found(cones.size());
  o.ledger().fork_join_indexed(cones.size(), [&](std::size_t i) {
    if (i < s_sample.size()) {
      found[i] = learn_short_tree(cones[i], s_sample[i], 4, o);
    } else {
      auto t = learn_short_tree(cones[i], t_sample[i - s_sample.size()], 4, inv);
      found[i].reserve(t.size());
      for (const auto& e : t) found[i].emplace_back(e.second, e.first);
    }
  });
  for (auto& part : found) res.edges.insert(res.edges.end(), part.begin(), part.end());

  std::sort(res.edges.begin(), res.edges.end());
  res.edges.erase(std::unique(res.edges.begin(), res.edges.end()), res.edges.end());
  res.roots = sources;
  std::sort(res.roots.begin(), res.roots.end());
  res.ledger = o.ledger().snapshot();
  return res;
}

}  // namespace pql
