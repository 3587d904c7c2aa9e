#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "pql/oracle.hpp"

namespace pql {

struct LearnResult {
  std::vector<Edge> edges;
  VertexId root = kNoVertex;
  LedgerSnapshot ledger;
};

/// Walks the candidate pivot toward ancestors: one query per remaining vertex,
/// exactly |verts|-1 in total, each its own round.  The final pivot has no
/// ancestor inside verts, so on any DAG it is a root of the induced sub-DAG.
inline VertexId sequential_find_root(std::span<const VertexId> verts, PathOracle& o) {
  if (verts.empty()) fail(Errc::empty_vertex_set, "root search over no vertices");
  VertexId pivot = verts[0];
  for (std::size_t i = 1; i < verts.size(); ++i) {
    VertexId y = verts[i];
    if (o.query(y, pivot)) pivot = y;
  }
  return pivot;
}

namespace detail {

/// One level of the degree-bounded tree learner.  `rest` holds the vertices
/// strictly below `r`, ascending; at most d children are peeled off, each by
/// a sequential minimum-ancestor scan followed by one descendant batch.
inline void short_tree_level(std::vector<VertexId> rest, VertexId r, int d, PathOracle& o,
                             std::vector<Edge>& out) {
  for (int child = 0; child < d && !rest.empty(); ++child) {
    // the scan converges to a vertex with no ancestor among rest, i.e. a
    // child of r when the induced subgraph really is r's subtree
    VertexId ri = rest[0];
    for (std::size_t i = 1; i < rest.size(); ++i)
      if (o.query(rest[i], ri)) ri = rest[i];

    std::vector<VertexId> vi, keep;
    if (rest.size() > 1) {
      std::vector<Edge> probes;
      probes.reserve(rest.size() - 1);
      for (VertexId v : rest)
        if (v != ri) probes.emplace_back(ri, v);
      auto ans = o.batch(probes);
      for (std::size_t i = 0; i < probes.size(); ++i)
        (ans[i] ? vi : keep).push_back(probes[i].second);
    }
    out.emplace_back(r, ri);
    rest.swap(keep);
    short_tree_level(std::move(vi), ri, d, o, out);
  }
  if (!rest.empty())
    fail(Errc::precondition, "more than " + std::to_string(d) + " children under vertex " +
                                 std::to_string(r) + "; not a degree-bounded tree on this set");
}

}  // namespace detail

/// Reconstructs the tree spanning `verts` from root r, assuming every vertex
/// of verts is reachable from r along tree edges and no vertex has more than
/// d children.  Deterministic; query cost proportional to n times the height.
inline std::vector<Edge> learn_short_tree(std::span<const VertexId> verts, VertexId r, int d,
                                          PathOracle& o) {
  if (verts.empty()) fail(Errc::empty_vertex_set, "tree learning over no vertices");
  if (d < 1) fail(Errc::precondition, "child bound must be positive");
  std::vector<VertexId> rest;
  rest.reserve(verts.size() - 1);
  bool saw_root = false;
  for (VertexId v : verts) {
    if (v == r)
      saw_root = true;
    else
      rest.push_back(v);
  }
  if (!saw_root) fail(Errc::precondition, "root " + std::to_string(r) + " not in vertex set");
  std::sort(rest.begin(), rest.end());
  std::vector<Edge> out;
  out.reserve(rest.size());
  detail::short_tree_level(std::move(rest), r, d, o, out);
  std::sort(out.begin(), out.end());
  return out;
}

/// Oracle-equivalence baseline: queries every ordered pair once, then keeps
/// exactly the relation's covering pairs (those not implied through a third
/// vertex).  On a DAG oracle this recovers the transitive reduction.
inline std::vector<Edge> brute_force_edges(std::span<const VertexId> verts, PathOracle& o) {
  const std::size_t s = verts.size();
  if (s == 0) fail(Errc::empty_vertex_set, "brute force over no vertices");
  std::vector<Bitset> fwd(s, Bitset(s)), bwd(s, Bitset(s));
  if (s > 1) {
    std::vector<Edge> pairs;
    pairs.reserve(s * (s - 1));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        if (i != j) pairs.emplace_back(verts[i], verts[j]);
    auto ans = o.batch(pairs);
    std::size_t k = 0;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        if (i != j && ans[k++]) {
          fwd[i].set(j);
          bwd[j].set(i);
        }
  }
  std::vector<Edge> out;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = fwd[i].find_first(); j != Bitset::npos; j = fwd[i].find_next(j))
      if (!fwd[i].intersects(bwd[j])) out.emplace_back(verts[i], verts[j]);
  std::sort(out.begin(), out.end());
  return out;
}

/// Learns an undirected tree through separator queries alone: hang the tree
/// from the lowest-id vertex r, answer path(u,v) as sep(r,u,v) (u is then an
/// ancestor of v exactly when it separates v from r), reuse the rooted
/// learner, and forget directions.
inline std::vector<Edge> learn_undirected_tree(std::span<const VertexId> verts, int d,
                                               SeparatorOracle& so) {
  if (verts.empty()) fail(Errc::empty_vertex_set, "tree learning over no vertices");
  std::vector<VertexId> sorted(verts.begin(), verts.end());
  std::sort(sorted.begin(), sorted.end());
  SepPathAdapter adapter(so, sorted[0]);
  auto directed = learn_short_tree(sorted, sorted[0], d, adapter);
  std::vector<Edge> out;
  out.reserve(directed.size());
  for (const auto& [u, v] : directed) out.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pql
