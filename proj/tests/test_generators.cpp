#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "pql/generators.hpp"
#include "pql/oracle.hpp"

using namespace pql;

TEST_CASE("rooted trees: arborescence, exact height, degree bound, seeded") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    GenSpec spec{.n = 120, .d = 3, .h = 9, .a = 1, .seed = seed};
    Digraph g = gen_rooted_tree(spec);
    CHECK(g.n == 120);
    CHECK(g.edges.size() == 119);
    auto rep = classify(g);
    REQUIRE(rep.is_dag);
    CHECK(rep.roots.size() == 1);
    CHECK(rep.height == 9);
    CHECK(rep.max_degree <= 3);
    CHECK(rep.is_multitree);
    CHECK(rep.max_root_paths == 1);
  }
  // Same seed, same graph; different seed, different labels.
  GenSpec spec{.n = 64, .d = 3, .h = 8, .a = 1, .seed = 7};
  CHECK(gen_rooted_tree(spec).edges == gen_rooted_tree(spec).edges);
  GenSpec other = spec;
  other.seed = 8;
  CHECK(gen_rooted_tree(spec).edges != gen_rooted_tree(other).edges);
}

TEST_CASE("rooted trees: infeasible specs are rejected up front") {
  // Height needs h+1 vertices.
  CHECK_THROWS_AS(gen_rooted_tree({.n = 5, .d = 3, .h = 6, .a = 1, .seed = 0}), Error);
  // Degree-2 trees are path-like: capacity 2h+1.
  CHECK_THROWS_AS(gen_rooted_tree({.n = 12, .d = 2, .h = 5, .a = 1, .seed = 0}), Error);
  Digraph ok = gen_rooted_tree({.n = 11, .d = 2, .h = 5, .a = 1, .seed = 0});
  CHECK(classify(ok).height == 5);
  // Degree-3 height-2 capacity is 1 + 3 + 6 = 10.
  CHECK_THROWS_AS(gen_rooted_tree({.n = 11, .d = 3, .h = 2, .a = 1, .seed = 0}), Error);
  try {
    gen_rooted_tree({.n = 12, .d = 2, .h = 5, .a = 1, .seed = 0});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible_spec);
  }
}

TEST_CASE("multitrees: requested root count, unique paths, no shortcuts") {
  for (std::size_t a : {2, 3, 4}) {
    GenSpec spec{.n = 90, .d = 3, .h = 7, .a = a, .seed = 11 + a};
    Digraph g = gen_multitree(spec);
    auto rep = classify(g);
    REQUIRE(rep.is_dag);
    CHECK(rep.roots.size() == a);
    CHECK(rep.is_multitree);
    CHECK(!rep.has_transitive_edge);
    CHECK(rep.max_degree <= 3);
    // Unique per source; merges let several roots reach the same vertex.
    CHECK(rep.max_root_paths <= a);
  }
  // a == 1 degenerates to a single tree, height capped rather than exact.
  Digraph one = gen_multitree({.n = 40, .d = 3, .h = 6, .a = 1, .seed = 5});
  auto rep = classify(one);
  CHECK(rep.roots.size() == 1);
  CHECK(rep.height <= 6);
  CHECK(rep.is_multitree);
  // Merge edges actually happen for a >= 2 on this size.
  Digraph merged = gen_multitree({.n = 90, .d = 3, .h = 7, .a = 3, .seed = 14});
  CHECK(merged.edges.size() > merged.n - 3);  // strictly more than the forest alone
}

TEST_CASE("butterfly: frozen order-1 instance and n/edge formulas") {
  Digraph f1 = gen_butterfly(1);
  CHECK(f1.n == 4);
  CHECK(f1.edges == std::vector<Edge>{{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  for (int h : {2, 3, 4}) {
    Digraph f = gen_butterfly(h);
    CHECK(f.n == (std::size_t{1} << h) * (h + 1));
    CHECK(f.edges.size() == static_cast<std::size_t>(h) * (std::size_t{1} << (h + 1)));
  }
  CHECK(gen_butterfly(0).n == 1);
  CHECK_THROWS_AS(gen_butterfly(-1), Error);
  CHECK_THROWS_AS(gen_butterfly(25), Error);
}

TEST_CASE("butterfly: every source reaches every sink exactly once") {
  Digraph f = gen_butterfly(3);  // 4 levels of 8 columns
  // Straight edge keeps the column, cross edge flips bit l.
  CHECK(f.has_edge(0, 8));
  CHECK(f.has_edge(0, 9));    // bit 0 flip at level 0
  CHECK(f.has_edge(10, 16));  // (1,2) -> (2,2)
  CHECK(f.has_edge(10, 16 + (2 ^ 2)));
  auto idx = build_reachability(f);
  for (VertexId src = 0; src < 8; ++src)
    for (VertexId snk = 24; snk < 32; ++snk) CHECK(idx.reachable(src, snk));
  auto rep = classify(f);
  CHECK(rep.is_multitree);  // unique routing: one path per (source, sink)
  CHECK(rep.roots.size() == 8);
}

TEST_CASE("almost-trees: one extra edge, two root paths, nothing transitive") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GenSpec spec{.n = 80, .d = 3, .h = 8, .a = 1, .seed = seed};
    Digraph g = gen_almost_tree(spec);
    CHECK(g.edges.size() == g.n);
    auto rep = classify(g);
    REQUIRE(rep.is_dag);
    CHECK(rep.roots.size() == 1);
    CHECK(rep.is_almost_tree);
    CHECK(!rep.has_transitive_edge);
    CHECK(rep.max_root_paths == 2);
    CHECK(rep.max_degree <= 3);
    CHECK(rep.height >= 8);  // the base tree has exact height 8
  }
  CHECK_THROWS_AS(gen_almost_tree({.n = 5, .d = 3, .h = 4, .a = 1, .seed = 0}), Error);
}

TEST_CASE("lower-bound instance: frozen n=20 layout") {
  Digraph g = gen_lower_bound_instance(20, 2, 3);
  CHECK(g.n == 20);
  CHECK(g.edges.size() == 20);
  // Spine 0-1-2-3, a 15-vertex binary block under 4, one leg 19 under 0,
  // and the cross edge from the leg into the block's lowest leaf.
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(2, 3));
  CHECK(g.has_edge(3, 4));
  CHECK(g.has_edge(4, 5));
  CHECK(g.has_edge(0, 19));
  CHECK(g.has_edge(19, 11));
  auto rep = classify(g);
  CHECK(rep.is_almost_tree);
  CHECK(rep.roots == std::vector<VertexId>{0});
  CHECK(rep.max_root_paths == 2);
  CHECK(rep.height == 7);
  CHECK_THROWS_AS(gen_lower_bound_instance(5, 2, 3), Error);  // below spine + block + leg
  // The smallest feasible layout still classifies correctly.
  CHECK(classify(gen_lower_bound_instance(6, 2, 3)).is_almost_tree);
}

TEST_CASE("undirected trees: connected, degree-capped, canonical pairs") {
  for (std::uint64_t seed : {3ull, 4ull}) {
    auto [n, edges] = gen_undirected_tree(60, 3, seed);
    CHECK(n == 60);
    CHECK(edges.size() == 59);
    std::vector<int> deg(n, 0);
    for (const auto& [u, v] : edges) {
      CHECK(u < v);
      ++deg[u];
      ++deg[v];
    }
    CHECK(*std::max_element(deg.begin(), deg.end()) <= 3);
    CHECK(std::is_sorted(edges.begin(), edges.end()));
    // The separator oracle constructor validates connectivity.
    SeparatorOracle so(n, edges);
    CHECK(so.universe_size() == 60);
  }
  auto [n1, e1] = gen_undirected_tree(60, 3, 9);
  auto [n2, e2] = gen_undirected_tree(60, 3, 9);
  CHECK(e1 == e2);
}

TEST_CASE("relabeling preserves structure") {
  Digraph g = gen_rooted_tree({.n = 50, .d = 3, .h = 6, .a = 1, .seed = 2});
  Digraph r = relabel_vertices(g, 99);
  CHECK(r.n == g.n);
  CHECK(r.edges.size() == g.edges.size());
  auto ra = classify(g), rb = classify(r);
  CHECK(ra.height == rb.height);
  CHECK(ra.max_degree == rb.max_degree);
  CHECK(rb.roots.size() == 1);
}
