#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pql/graph.hpp"

namespace pql {

/// Shape parameters for instance generators.  Not every generator reads every
/// field; see the individual functions.
struct GenSpec {
  std::size_t n = 1;     // vertex count
  int d = 2;             // max degree (trees/multitrees), or d-ary arity below
  int h = 1;             // exact tree height / per-tree height cap
  std::size_t a = 1;     // number of roots (multitrees)
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 1) fail(Errc::infeasible_spec, "n must be >= 1");
    if (d < 2) fail(Errc::infeasible_spec, "d must be >= 2");
    if (h < 1) fail(Errc::infeasible_spec, "h must be >= 1");
    if (a < 1 || a > n) fail(Errc::infeasible_spec, "need 1 <= a <= n");
  }
};

namespace detail {

inline std::size_t sat_mul(std::size_t a, std::size_t b, std::size_t clamp) {
  if (b != 0 && a > clamp / b) return clamp;
  return std::min(clamp, a * b);
}
inline std::size_t sat_add(std::size_t a, std::size_t b, std::size_t clamp) {
  if (a >= clamp || b >= clamp - a) return clamp;
  return a + b;
}

/// Capacity of a rooted tree of height <= h when the root may have d children
/// and every internal vertex d-1 (total degree <= d).  Saturates at `clamp`,
/// so a return value of `clamp` means "at least clamp".
inline std::size_t tree_capacity(int d, int h, std::size_t clamp) {
  std::size_t f = 1;  // capacity of one subtree rooted at depth h, h-1, ..., 1
  for (int k = h - 1; k >= 1; --k)
    f = sat_add(1, sat_mul(static_cast<std::size_t>(d - 1), f, clamp), clamp);
  return sat_add(1, sat_mul(static_cast<std::size_t>(d), f, clamp), clamp);
}

inline std::size_t draw_index(std::mt19937_64& rng, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

/// Random rooted tree on ids 0..n-1 (0 = root) with total degree <= d.
/// When exact_height, a root-to-leaf spine of length h is laid down first and
/// all other vertices attach at depth < h; otherwise h only caps the depth.
/// Returns parent[] with parent[0] == 0.
inline std::vector<VertexId> random_parent_vector(std::size_t n, int d, int h, bool exact_height,
                                                  std::mt19937_64& rng) {
  std::vector<VertexId> parent(n, 0);
  std::vector<int> depth(n, 0), open(n, 0);
  std::vector<VertexId> eligible;  // open child capacity and depth < h
  std::size_t built = 1;
  parent[0] = 0;
  open[0] = d;
  if (exact_height) {
    for (int i = 1; i <= h; ++i) {
      parent[i] = static_cast<VertexId>(i - 1);
      depth[i] = i;
    }
    built = static_cast<std::size_t>(h) + 1;
    open[0] = d - 1;
    for (int i = 1; i < h; ++i) open[i] = d - 2;
    // vertex h sits at the depth limit and accepts no children
  }
  for (std::size_t v = 0; v < built; ++v)
    if (open[v] > 0 && depth[v] < h) eligible.push_back(static_cast<VertexId>(v));

  for (std::size_t v = built; v < n; ++v) {
    if (eligible.empty())
      fail(Errc::infeasible_spec, "ran out of attachment slots; capacity check was wrong");
    std::size_t idx = draw_index(rng, eligible.size());
    VertexId p = eligible[idx];
    parent[v] = p;
    depth[v] = depth[p] + 1;
    if (--open[p] == 0) {
      eligible[idx] = eligible.back();
      eligible.pop_back();
    }
    open[v] = depth[v] < h ? d - 1 : 0;
    if (open[v] > 0) eligible.push_back(static_cast<VertexId>(v));
  }
  return parent;
}

inline std::vector<VertexId> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[draw_index(rng, i)]);
  return perm;
}

inline Digraph relabel(std::size_t n, const std::vector<Edge>& edges,
                       const std::vector<VertexId>& perm) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [u, v] : edges) out.emplace_back(perm[u], perm[v]);
  return Digraph::from_edges(n, std::move(out));
}

}  // namespace detail

/// New graph with the same structure under a seeded label permutation.
inline Digraph relabel_vertices(const Digraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return detail::relabel(g.n, g.edges, detail::random_permutation(g.n, rng));
}

/// Random arborescence with n vertices, exact height h, total degree <= d,
/// labels shuffled by the seed.  Errors with infeasible_spec when no such
/// tree exists (n < h+1 or n above the degree-capped capacity).
inline Digraph gen_rooted_tree(const GenSpec& spec) {
  spec.validate();
  if (spec.n < static_cast<std::size_t>(spec.h) + 1)
    fail(Errc::infeasible_spec, "height " + std::to_string(spec.h) + " needs at least " +
                                    std::to_string(spec.h + 1) + " vertices");
  if (detail::tree_capacity(spec.d, spec.h, spec.n) < spec.n)
    fail(Errc::infeasible_spec, "n=" + std::to_string(spec.n) + " exceeds degree-" +
                                    std::to_string(spec.d) + " height-" + std::to_string(spec.h) +
                                    " capacity");
  std::mt19937_64 rng(spec.seed);
  auto parent = detail::random_parent_vector(spec.n, spec.d, spec.h, /*exact_height=*/true, rng);
  std::vector<Edge> edges;
  edges.reserve(spec.n - 1);
  for (std::size_t v = 1; v < spec.n; ++v) edges.emplace_back(parent[v], static_cast<VertexId>(v));
  return detail::relabel(spec.n, edges, detail::random_permutation(spec.n, rng));
}

/// DAG with exactly `a` roots, at most one directed path between any ordered
/// pair, no transitive edges, total degree <= d.  Built as a forest of `a`
/// arborescences plus merge edges accepted only when the closures of the two
/// endpoints' cones are disjoint, which preserves all three properties.
inline Digraph gen_multitree(const GenSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::size_t n = spec.n, a = spec.a;

  // tree sizes: everyone 1, spread the rest under the capacity cap
  const std::size_t cap = detail::tree_capacity(spec.d, spec.h, n);
  if (a * cap < n) fail(Errc::infeasible_spec, "n too large for a trees of this degree/height");
  std::vector<std::size_t> size(a, 1);
  std::vector<std::size_t> growable(a);
  std::iota(growable.begin(), growable.end(), std::size_t{0});
  for (std::size_t extra = n - a; extra > 0; --extra) {
    std::size_t idx = detail::draw_index(rng, growable.size());
    std::size_t t = growable[idx];
    if (++size[t] == cap) {
      growable[idx] = growable.back();
      growable.pop_back();
    }
  }

  std::vector<Edge> edges;
  std::vector<int> degree(n, 0);
  std::vector<std::uint8_t> is_root(n, 0);
  std::size_t base = 0;
  for (std::size_t t = 0; t < a; ++t) {
    auto parent = detail::random_parent_vector(size[t], spec.d, spec.h, /*exact_height=*/false, rng);
    is_root[base] = 1;
    for (std::size_t v = 1; v < size[t]; ++v) {
      VertexId pu = static_cast<VertexId>(base + parent[v]);
      VertexId pv = static_cast<VertexId>(base + v);
      edges.emplace_back(pu, pv);
      ++degree[pu];
      ++degree[pv];
    }
    base += size[t];
  }

  // merge edges; desc/anc are strict closures kept current incrementally
  std::vector<Bitset> desc(n, Bitset(n)), anc(n, Bitset(n));
  {
    Digraph forest = Digraph::from_edges(n, edges);
    ReachabilityIndex idx = build_reachability(forest);
    for (std::size_t v = 0; v < n; ++v) desc[v] = idx.rows[v];
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t u = desc[v].find_first(); u != Bitset::npos; u = desc[v].find_next(u))
        anc[u].set(v);
  }
  const std::size_t want = n / 4;
  std::size_t accepted = 0;
  for (std::size_t attempt = 0; attempt < 6 * n && accepted < want && a >= 2; ++attempt) {
    VertexId u = static_cast<VertexId>(detail::draw_index(rng, n));
    VertexId w = static_cast<VertexId>(detail::draw_index(rng, n));
    if (u == w || is_root[w]) continue;
    if (degree[u] >= spec.d || degree[w] >= spec.d) continue;
    // candidate edge u->w: the inclusive ancestor cone of u and the inclusive
    // descendant cone of w must share no vertex and no existing reachability,
    // otherwise we would create a cycle, a duplicate path, or a shortcut.
    Bitset dw = desc[w];
    dw.set(w);
    if (dw.test(u) || anc[u].test(w) || desc[u].test(w)) continue;
    bool clash = anc[u].intersects(dw);
    if (!clash)
      for (std::size_t x = anc[u].find_first(); x != Bitset::npos && !clash;
           x = anc[u].find_next(x))
        clash = desc[x].intersects(dw);
    if (!clash) clash = desc[u].intersects(dw);
    if (clash) continue;

    edges.emplace_back(u, w);
    ++degree[u];
    ++degree[w];
    ++accepted;
    Bitset au = anc[u];
    au.set(u);
    for (std::size_t x = au.find_first(); x != Bitset::npos; x = au.find_next(x)) desc[x] |= dw;
    for (std::size_t y = dw.find_first(); y != Bitset::npos; y = dw.find_next(y)) anc[y] |= au;
  }

  return detail::relabel(n, edges, detail::random_permutation(n, rng));
}

/// Canonical butterfly of order h: 2^h * (h+1) vertices in h+1 levels of 2^h
/// columns, vertex id = level * 2^h + column, edges (l,c) -> (l+1,c) and
/// (l,c) -> (l+1, c xor 2^l).  Level 0 holds the 2^h sources.
inline Digraph gen_butterfly(int h) {
  if (h < 0 || h > 24) fail(Errc::infeasible_spec, "butterfly order out of range");
  const std::size_t cols = std::size_t{1} << h;
  const std::size_t n = cols * (static_cast<std::size_t>(h) + 1);
  std::vector<Edge> edges;
  edges.reserve(2 * cols * static_cast<std::size_t>(h));
  for (int l = 0; l < h; ++l)
    for (std::size_t c = 0; c < cols; ++c) {
      VertexId u = static_cast<VertexId>(l * cols + c);
      edges.emplace_back(u, static_cast<VertexId>((l + 1) * cols + c));
      edges.emplace_back(u, static_cast<VertexId>((l + 1) * cols + (c ^ (std::size_t{1} << l))));
    }
  return Digraph::from_edges(n, std::move(edges));
}

/// Arborescence of exact height h plus one cross edge (s,t) chosen uniformly
/// among pairs that keep the graph an almost-tree: s and t incomparable, the
/// tree parent of t no ancestor of s (no edge turns transitive), both
/// endpoints with spare degree.  Retries a fresh tree when a draw has no
/// valid pair; errors with no_valid_cross_edge when none of them does.
inline Digraph gen_almost_tree(const GenSpec& spec) {
  spec.validate();
  if (spec.n < static_cast<std::size_t>(spec.h) + 2)
    fail(Errc::infeasible_spec, "almost-tree needs n >= h+2");
  if (detail::tree_capacity(spec.d, spec.h, spec.n) < spec.n)
    fail(Errc::infeasible_spec, "n=" + std::to_string(spec.n) + " exceeds degree-" +
                                    std::to_string(spec.d) + " height-" + std::to_string(spec.h) +
                                    " capacity");
  std::mt19937_64 rng(spec.seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto parent = detail::random_parent_vector(spec.n, spec.d, spec.h, /*exact_height=*/true, rng);
    std::vector<Edge> edges;
    edges.reserve(spec.n);
    std::vector<int> degree(spec.n, 0);
    for (std::size_t v = 1; v < spec.n; ++v) {
      edges.emplace_back(parent[v], static_cast<VertexId>(v));
      ++degree[parent[v]];
      ++degree[v];
    }
    ReachabilityIndex idx = build_reachability(Digraph::from_edges(spec.n, edges));
    std::vector<Edge> candidates;
    for (std::size_t s = 0; s < spec.n; ++s) {
      if (degree[s] >= spec.d) continue;
      for (std::size_t t = 1; t < spec.n; ++t) {
        if (t == s || degree[t] >= spec.d) continue;
        if (idx.rows[s].test(t) || idx.rows[t].test(s)) continue;
        VertexId p = parent[t];
        if (p == s || idx.rows[p].test(s)) continue;
        candidates.emplace_back(static_cast<VertexId>(s), static_cast<VertexId>(t));
      }
    }
    if (candidates.empty()) continue;
    edges.push_back(candidates[detail::draw_index(rng, candidates.size())]);
    return detail::relabel(spec.n, edges, detail::random_permutation(spec.n, rng));
  }
  fail(Errc::no_valid_cross_edge,
       "no almost-tree cross edge fits n=" + std::to_string(spec.n) + " d=" +
           std::to_string(spec.d) + " h=" + std::to_string(spec.h));
}

/// Deterministic worst-case-style almost-tree: a spine 0..h with extra legs on
/// spine vertices, a complete d-ary tree hanging below the spine end, and one
/// cross edge from the lowest leg into the lowest d-ary leaf.  The d-ary
/// block absorbs roughly `split` of the non-spine vertices (exactly where leg
/// capacity allows).
inline Digraph gen_lower_bound_instance(std::size_t n, int d, int h, double split = 0.5) {
  if (d < 2 || h < 1) fail(Errc::infeasible_spec, "need d >= 2 and h >= 1");
  const std::size_t spine = static_cast<std::size_t>(h) + 1;
  if (n < spine + 2) fail(Errc::infeasible_spec, "n too small for spine plus tree plus leg");
  const std::size_t leg_cap = static_cast<std::size_t>(d) +
                              static_cast<std::size_t>(h - 1) * static_cast<std::size_t>(d - 1);
  const std::size_t budget = n - spine;

  // complete d-ary sizes: sizes[L] = 1 + d + ... + d^L, monotone in depth L
  std::vector<std::size_t> sizes{1};
  {
    std::size_t level = 1, total = 1;
    while (level <= (budget - total) / static_cast<std::size_t>(d)) {
      level *= static_cast<std::size_t>(d);
      total += level;
      sizes.push_back(total);
    }
  }
  std::size_t best_level = sizes.size();  // invalid until proven otherwise
  double target = split * static_cast<double>(budget);
  for (std::size_t L = 0; L < sizes.size(); ++L) {
    std::size_t legs_here = budget - sizes[L];
    if (legs_here < 1 || legs_here > leg_cap) continue;
    if (best_level == sizes.size() ||
        std::abs(static_cast<double>(sizes[L]) - target) <
            std::abs(static_cast<double>(sizes[best_level]) - target))
      best_level = L;
  }
  if (best_level == sizes.size())
    fail(Errc::infeasible_spec, "no d-ary depth leaves a feasible leg count");
  const std::size_t tree_size = sizes[best_level];
  const std::size_t legs = budget - tree_size;

  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < static_cast<std::size_t>(h); ++i)
    edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
  // complete d-ary tree in BFS order, rooted at a child of the spine end
  const VertexId tree_root = static_cast<VertexId>(spine);
  edges.emplace_back(static_cast<VertexId>(h), tree_root);
  for (std::size_t i = 1; i < tree_size; ++i) {
    VertexId child = static_cast<VertexId>(spine + i);
    VertexId par = static_cast<VertexId>(spine + (i - 1) / d);
    edges.emplace_back(par, child);
  }
  // legs round-robin over spine vertices 0..h-1 within their degree budget
  {
    std::vector<std::size_t> used(h, 0);
    std::size_t next_id = spine + tree_size;
    std::size_t placed = 0;
    while (placed < legs) {
      bool any = false;
      for (int sv = 0; sv < h && placed < legs; ++sv) {
        std::size_t cap_here = sv == 0 ? static_cast<std::size_t>(d)
                                       : static_cast<std::size_t>(d - 1);
        if (used[sv] >= cap_here) continue;
        ++used[sv];
        edges.emplace_back(static_cast<VertexId>(sv), static_cast<VertexId>(next_id++));
        ++placed;
        any = true;
      }
      if (!any) fail(Errc::infeasible_spec, "leg capacity accounting is wrong");
    }
  }
  // cross edge: lowest-id leg into the lowest-id leaf of the d-ary block
  std::size_t leaves = 1;  // size of the deepest level
  {
    std::size_t acc = 1;
    while (acc < tree_size) {
      leaves *= static_cast<std::size_t>(d);
      acc += leaves;
    }
  }
  const VertexId first_leg = static_cast<VertexId>(spine + tree_size);
  const VertexId first_leaf = static_cast<VertexId>(spine + tree_size - leaves);
  edges.emplace_back(first_leg, first_leaf);
  return Digraph::from_edges(n, std::move(edges));
}

/// Random undirected tree on n vertices with max degree cap, as sorted
/// (min,max) pairs; labels shuffled by the seed.
inline std::pair<std::size_t, std::vector<Edge>> gen_undirected_tree(std::size_t n, int max_degree,
                                                                     std::uint64_t seed) {
  if (n < 1 || max_degree < 2) fail(Errc::infeasible_spec, "need n >= 1 and max degree >= 2");
  std::mt19937_64 rng(seed);
  std::vector<int> degree(n, 0);
  std::vector<VertexId> eligible{0};
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t v = 1; v < n; ++v) {
    if (eligible.empty()) fail(Errc::infeasible_spec, "degree cap leaves no attachment point");
    std::size_t idx = detail::draw_index(rng, eligible.size());
    VertexId p = eligible[idx];
    edges.emplace_back(p, static_cast<VertexId>(v));
    if (++degree[p] == max_degree) {
      eligible[idx] = eligible.back();
      eligible.pop_back();
    }
    degree[v] = 1;
    if (max_degree > 1) eligible.push_back(static_cast<VertexId>(v));
  }
  auto perm = detail::random_permutation(n, rng);
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    VertexId a = perm[u], b = perm[v];
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(out.begin(), out.end());
  return {n, std::move(out)};
}

}  // namespace pql
