#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pql/errors.hpp"

namespace pql {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;
using Bitset = boost::dynamic_bitset<std::uint64_t>;

constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Immutable directed graph over dense vertex ids 0..n-1.
/// Edge list is kept sorted and duplicate-free; adjacency lists ascending.
struct Digraph {
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<VertexId>> out_adj;
  std::vector<std::vector<VertexId>> in_adj;

  static Digraph from_edges(std::size_t n, std::vector<Edge> edge_list) {
    Digraph g;
    g.n = n;
    std::sort(edge_list.begin(), edge_list.end());
    edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
    for (const auto& [u, v] : edge_list) {
      if (u >= n || v >= n)
        fail(Errc::vertex_out_of_range, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                            ") outside universe of size " + std::to_string(n));
      if (u == v) fail(Errc::precondition, "self-loop at vertex " + std::to_string(u));
    }
    g.edges = std::move(edge_list);
    g.out_adj.assign(n, {});
    g.in_adj.assign(n, {});
    for (const auto& [u, v] : g.edges) {
      g.out_adj[u].push_back(v);
      g.in_adj[v].push_back(u);
    }
    return g;
  }

  bool has_edge(VertexId u, VertexId v) const {
    return std::binary_search(edges.begin(), edges.end(), Edge{u, v});
  }

  std::size_t out_degree(VertexId v) const { return out_adj[v].size(); }
  std::size_t in_degree(VertexId v) const { return in_adj[v].size(); }
  std::size_t degree(VertexId v) const { return out_adj[v].size() + in_adj[v].size(); }

  std::vector<VertexId> vertices() const {
    std::vector<VertexId> vs(n);
    for (std::size_t i = 0; i < n; ++i) vs[i] = static_cast<VertexId>(i);
    return vs;
  }
};

/// Kahn's algorithm; nullopt when the graph has a directed cycle.
inline std::optional<std::vector<VertexId>> topological_order(const Digraph& g) {
  std::vector<std::size_t> indeg(g.n);
  for (std::size_t v = 0; v < g.n; ++v) indeg[v] = g.in_adj[v].size();
  std::deque<VertexId> ready;
  for (std::size_t v = 0; v < g.n; ++v)
    if (indeg[v] == 0) ready.push_back(static_cast<VertexId>(v));
  std::vector<VertexId> order;
  order.reserve(g.n);
  while (!ready.empty()) {
    VertexId u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (VertexId w : g.out_adj[u])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  if (order.size() != g.n) return std::nullopt;
  return order;
}

/// Dense strict-reachability matrix: rows[u][v] == 1 iff u != v and there is a
/// directed path from u to v.  One bitset row per vertex.
struct ReachabilityIndex {
  std::size_t n = 0;
  std::vector<Bitset> rows;

  bool reachable(VertexId u, VertexId v) const {
    if (u >= n || v >= n)
      fail(Errc::vertex_out_of_range, "reachable(" + std::to_string(u) + "," + std::to_string(v) +
                                          ") on universe of size " + std::to_string(n));
    return rows[u].test(v);
  }

  const Bitset& row(VertexId u) const {
    if (u >= n) fail(Errc::vertex_out_of_range, "row " + std::to_string(u));
    return rows[u];
  }

  /// |D(u) ∩ mask| under the strict convention.
  std::size_t count_in(VertexId u, const Bitset& mask) const {
    Bitset tmp = rows[u];
    tmp &= mask;
    return tmp.count();
  }
};

/// Builds the strict closure.  DAGs use one sweep in reverse topological
/// order; cyclic inputs either error (require_dag) or fall back to per-vertex
/// BFS, still reporting u->u as false unless u lies on a cycle through itself.
inline ReachabilityIndex build_reachability(const Digraph& g, bool require_dag = true) {
  ReachabilityIndex idx;
  idx.n = g.n;
  idx.rows.assign(g.n, Bitset(g.n));
  auto topo = topological_order(g);
  if (topo) {
    for (auto it = topo->rbegin(); it != topo->rend(); ++it) {
      VertexId u = *it;
      for (VertexId w : g.out_adj[u]) {
        idx.rows[u].set(w);
        idx.rows[u] |= idx.rows[w];
      }
    }
    return idx;
  }
  if (require_dag) fail(Errc::cyclic_graph, "directed cycle found while building reachability");
  for (std::size_t s = 0; s < g.n; ++s) {
    std::deque<VertexId> frontier{static_cast<VertexId>(s)};
    Bitset seen(g.n);
    while (!frontier.empty()) {
      VertexId u = frontier.front();
      frontier.pop_front();
      for (VertexId w : g.out_adj[u])
        if (!seen.test(w)) {
          seen.set(w);
          frontier.push_back(w);
        }
    }
    idx.rows[s] = std::move(seen);
  }
  return idx;
}

/// Removes every edge (u,v) for which some other out-neighbour of u already
/// reaches v.  For DAGs this is the unique minimal graph with the same closure.
inline Digraph transitive_reduction(const Digraph& g) {
  ReachabilityIndex idx = build_reachability(g, /*require_dag=*/true);
  std::vector<Edge> kept;
  kept.reserve(g.edges.size());
  for (const auto& [u, v] : g.edges) {
    bool redundant = false;
    for (VertexId w : g.out_adj[u]) {
      if (w != v && idx.rows[w].test(v)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.emplace_back(u, v);
  }
  return Digraph::from_edges(g.n, std::move(kept));
}

constexpr std::size_t kPathCountCap = std::size_t{1} << 16;

struct GraphClassReport {
  bool is_dag = false;
  std::vector<VertexId> roots;        // in-degree-0 vertices, ascending
  std::size_t max_degree = 0;         // max over v of in+out degree
  long long height = -1;              // longest directed path (edges); -1 if cyclic
  bool is_multitree = false;          // at most one path between any ordered pair
  bool is_almost_tree = false;        // arborescence plus exactly one cross edge
  bool has_transitive_edge = false;
  std::size_t max_root_paths = 0;     // max over v of #root->v paths, saturated
};

namespace detail {

/// Path counts from sources `from` to every vertex, saturating at cap.
inline std::vector<std::size_t> count_paths_from(const Digraph& g,
                                                 const std::vector<VertexId>& topo,
                                                 const std::vector<VertexId>& from,
                                                 std::size_t cap) {
  std::vector<std::size_t> cnt(g.n, 0);
  for (VertexId s : from) cnt[s] = 1;
  for (VertexId u : topo) {
    if (cnt[u] == 0) continue;
    for (VertexId w : g.out_adj[u]) {
      cnt[w] = std::min(cap, cnt[w] + cnt[u]);
    }
  }
  return cnt;
}

inline bool all_reachable_from(const Digraph& g, VertexId r) {
  Bitset seen(g.n);
  seen.set(r);
  std::deque<VertexId> frontier{r};
  std::size_t visited = 1;
  while (!frontier.empty()) {
    VertexId u = frontier.front();
    frontier.pop_front();
    for (VertexId w : g.out_adj[u])
      if (!seen.test(w)) {
        seen.set(w);
        ++visited;
        frontier.push_back(w);
      }
  }
  return visited == g.n;
}

/// Arborescence test: n-1 edges, a single in-degree-0 vertex reaching all,
/// every other vertex with in-degree exactly 1.
inline bool is_arborescence(const Digraph& g, VertexId* root_out = nullptr) {
  if (g.n == 0) return false;
  if (g.edges.size() != g.n - 1) return false;
  VertexId root = kNoVertex;
  for (std::size_t v = 0; v < g.n; ++v) {
    if (g.in_degree(v) == 0) {
      if (root != kNoVertex) return false;
      root = static_cast<VertexId>(v);
    } else if (g.in_degree(v) != 1) {
      return false;
    }
  }
  if (root == kNoVertex) return false;
  if (!all_reachable_from(g, root)) return false;
  if (root_out) *root_out = root;
  return true;
}

}  // namespace detail

/// Structural census used to validate generator output and learned graphs.
inline GraphClassReport classify(const Digraph& g, std::size_t path_cap = kPathCountCap) {
  GraphClassReport rep;
  for (std::size_t v = 0; v < g.n; ++v) {
    if (g.in_degree(v) == 0) rep.roots.push_back(static_cast<VertexId>(v));
    rep.max_degree = std::max(rep.max_degree, g.degree(static_cast<VertexId>(v)));
  }
  auto topo = topological_order(g);
  rep.is_dag = topo.has_value();
  if (!rep.is_dag) return rep;

  {  // longest path
    std::vector<long long> dist(g.n, 0);
    long long best = 0;
    for (VertexId u : *topo)
      for (VertexId w : g.out_adj[u]) {
        dist[w] = std::max(dist[w], dist[u] + 1);
        best = std::max(best, dist[w]);
      }
    rep.height = best;
  }

  {  // pairwise path multiplicity, one DP per source
    rep.is_multitree = true;
    for (std::size_t s = 0; s < g.n && rep.is_multitree; ++s) {
      auto cnt = detail::count_paths_from(g, *topo, {static_cast<VertexId>(s)}, path_cap);
      for (std::size_t v = 0; v < g.n; ++v)
        if (v != s && cnt[v] > 1) {
          rep.is_multitree = false;
          break;
        }
    }
  }

  {  // root->v multiplicity from all roots at once
    auto cnt = detail::count_paths_from(g, *topo, rep.roots, path_cap);
    for (std::size_t v = 0; v < g.n; ++v) rep.max_root_paths = std::max(rep.max_root_paths, cnt[v]);
  }

  {  // transitive edges
    ReachabilityIndex idx = build_reachability(g);
    for (const auto& [u, v] : g.edges) {
      for (VertexId w : g.out_adj[u])
        if (w != v && idx.rows[w].test(v)) {
          rep.has_transitive_edge = true;
          break;
        }
      if (rep.has_transitive_edge) break;
    }
  }

  {  // arborescence plus one reachability-creating cross edge
    rep.is_almost_tree = false;
    if (g.n >= 2 && g.edges.size() == g.n && rep.roots.size() == 1) {
      VertexId doubled = kNoVertex;
      bool profile_ok = true;
      for (std::size_t v = 0; v < g.n; ++v) {
        std::size_t din = g.in_degree(v);
        if (static_cast<VertexId>(v) == rep.roots[0]) {
          profile_ok &= (din == 0);
        } else if (din == 2) {
          if (doubled != kNoVertex) profile_ok = false;
          doubled = static_cast<VertexId>(v);
        } else if (din != 1) {
          profile_ok = false;
        }
      }
      if (profile_ok && doubled != kNoVertex) {
        // Removing one of the two in-edges of the doubled vertex must leave
        // an arborescence; the other in-edge is then the cross edge.
        for (VertexId u : g.in_adj[doubled]) {
          std::vector<Edge> rest;
          rest.reserve(g.edges.size() - 1);
          for (const auto& e : g.edges)
            if (!(e.first == u && e.second == doubled)) rest.push_back(e);
          Digraph t = Digraph::from_edges(g.n, std::move(rest));
          if (detail::is_arborescence(t)) {
            rep.is_almost_tree = true;
            break;
          }
        }
      }
    }
  }
  return rep;
}

/// Parent/depth/children plus inclusive descendant bitsets for a rooted tree
/// given by its edge set.  The inclusive convention (desc[v] contains v) is
/// what the cross-edge probe construction consumes.
struct ArborescenceMetrics {
  VertexId root = kNoVertex;
  std::vector<VertexId> parent;           // parent[root] == root
  std::vector<std::uint32_t> depth;       // depth[root] == 0
  std::vector<std::vector<VertexId>> children;  // ascending
  std::vector<Bitset> desc;               // inclusive descendant sets
  std::uint32_t height = 0;

  std::size_t desc_count(VertexId v) const { return desc[v].count(); }
};

inline ArborescenceMetrics arborescence_metrics(std::size_t n, std::span<const Edge> edges,
                                                VertexId root) {
  Digraph g = Digraph::from_edges(n, {edges.begin(), edges.end()});
  if (root >= n) fail(Errc::vertex_out_of_range, "root " + std::to_string(root));
  VertexId found = kNoVertex;
  if (!detail::is_arborescence(g, &found) || found != root)
    fail(Errc::not_arborescence, "edge set is not an arborescence rooted at " + std::to_string(root));

  ArborescenceMetrics m;
  m.root = root;
  m.parent.assign(n, kNoVertex);
  m.depth.assign(n, 0);
  m.children = g.out_adj;
  m.desc.assign(n, Bitset(n));
  m.parent[root] = root;

  std::vector<VertexId> order;  // BFS order, for leaf-to-root accumulation
  order.reserve(n);
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    VertexId u = order[i];
    for (VertexId w : g.out_adj[u]) {
      m.parent[w] = u;
      m.depth[w] = m.depth[u] + 1;
      m.height = std::max(m.height, m.depth[w]);
      order.push_back(w);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId u = *it;
    m.desc[u].set(u);
    for (VertexId w : g.out_adj[u]) m.desc[u] |= m.desc[w];
  }
  return m;
}

}  // namespace pql
