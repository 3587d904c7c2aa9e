#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "pql/generators.hpp"
#include "pql/oracle.hpp"
#include "pql/tree_learn.hpp"

using namespace pql;

namespace {

std::vector<VertexId> iota_verts(std::size_t n) {
  std::vector<VertexId> vs(n);
  std::iota(vs.begin(), vs.end(), 0u);
  return vs;
}

struct Rig {
  Digraph g;
  ReachabilityIndex idx;
  IndexOracle oracle;
  explicit Rig(Digraph graph) : g(std::move(graph)), idx(build_reachability(g)), oracle(idx) {}
};

}  // namespace

TEST_CASE("sequential root search: exact cost, correct answer") {
  Rig rig(gen_rooted_tree({.n = 40, .d = 3, .h = 6, .a = 1, .seed = 3}));
  auto verts = iota_verts(40);
  VertexId r = sequential_find_root(verts, rig.oracle);
  CHECK(r == classify(rig.g).roots[0]);
  CHECK(rig.oracle.ledger().queries() == 39);
  CHECK(rig.oracle.ledger().rounds() == 39);
  CHECK_THROWS_AS(sequential_find_root({}, rig.oracle), Error);
}

TEST_CASE("sequential root search returns a source on multi-root graphs") {
  Rig rig(gen_butterfly(2));
  auto verts = iota_verts(rig.g.n);
  VertexId r = sequential_find_root(verts, rig.oracle);
  CHECK(rig.g.in_degree(r) == 0);
}

TEST_CASE("short-tree learner: frozen binary tree") {
  Rig rig(Digraph::from_edges(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}}));
  auto verts = iota_verts(7);
  auto edges = learn_short_tree(verts, 0, 2, rig.oracle);
  CHECK(edges == rig.g.edges);
}

TEST_CASE("short-tree learner: directed path query count is quadratic-free per level") {
  // On a path each level holds one scan plus one branch batch over the
  // remaining suffix: 2*(s-1) charged queries for s pending vertices.
  const std::size_t n = 8;
  Rig rig([&] {
    std::vector<Edge> e;
    for (std::size_t i = 0; i + 1 < n; ++i)
      e.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
    return Digraph::from_edges(n, std::move(e));
  }());
  auto verts = iota_verts(n);
  auto edges = learn_short_tree(verts, 0, 2, rig.oracle);
  CHECK(edges == rig.g.edges);
  std::uint64_t expect = 0;
  for (std::size_t s = n - 1; s >= 1; --s) expect += 2 * (s - 1);
  CHECK(rig.oracle.ledger().queries() == expect);
}

TEST_CASE("short-tree learner: random trees, exact at every shape") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GenSpec spec{.n = 100, .d = 4, .h = 8, .a = 1, .seed = seed};
    Rig rig(gen_rooted_tree(spec));
    auto verts = iota_verts(spec.n);
    VertexId r = classify(rig.g).roots[0];
    auto edges = learn_short_tree(verts, r, 4, rig.oracle);
    CHECK(edges == rig.g.edges);
  }
}

TEST_CASE("short-tree learner works on a subtree scope through restriction") {
  Rig rig(gen_rooted_tree({.n = 60, .d = 3, .h = 7, .a = 1, .seed = 5}));
  VertexId r = classify(rig.g).roots[0];
  // Scope = r's first child and its descendants.
  VertexId c = rig.g.out_adj[r][0];
  std::vector<VertexId> scope{c};
  for (VertexId v = 0; v < rig.g.n; ++v)
    if (rig.idx.reachable(c, v)) scope.push_back(v);
  std::sort(scope.begin(), scope.end());
  RestrictedOracle sub(rig.oracle, scope);
  auto edges = learn_short_tree(scope, c, 3, sub);
  std::vector<Edge> expect;
  for (const auto& e : rig.g.edges)
    if (std::binary_search(scope.begin(), scope.end(), e.first)) expect.push_back(e);
  CHECK(edges == expect);
}

TEST_CASE("short-tree learner rejects bad inputs") {
  Rig rig(Digraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}));
  auto verts = iota_verts(4);
  // Three children under the root but a bound of two.
  CHECK_THROWS_AS(learn_short_tree(verts, 0, 2, rig.oracle), Error);
  try {
    learn_short_tree(verts, 0, 2, rig.oracle);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
  }
  // Root missing from the vertex set.
  std::vector<VertexId> missing{1, 2, 3};
  CHECK_THROWS_AS(learn_short_tree(missing, 0, 2, rig.oracle), Error);
  CHECK_THROWS_AS(learn_short_tree({}, 0, 2, rig.oracle), Error);
  // A degree-3 bound succeeds on the same star.
  CHECK(learn_short_tree(verts, 0, 3, rig.oracle) == rig.g.edges);
}

TEST_CASE("brute force recovers the covering pairs in one batch") {
  Rig rig(Digraph::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
  auto verts = iota_verts(4);
  auto edges = brute_force_edges(verts, rig.oracle);
  CHECK(edges == rig.g.edges);
  CHECK(rig.oracle.ledger().queries() == 12);  // all ordered pairs
  CHECK(rig.oracle.ledger().rounds() == 1);
}

TEST_CASE("brute force returns the transitive reduction, not the raw edges") {
  Rig rig(Digraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}));
  auto verts = iota_verts(3);
  auto edges = brute_force_edges(verts, rig.oracle);
  CHECK(edges == std::vector<Edge>{{0, 1}, {1, 2}});
}

TEST_CASE("brute force on every generated class agrees with the hidden graph") {
  std::vector<Digraph> instances;
  instances.push_back(gen_rooted_tree({.n = 40, .d = 3, .h = 6, .a = 1, .seed = 1}));
  instances.push_back(gen_multitree({.n = 40, .d = 3, .h = 6, .a = 3, .seed = 2}));
  instances.push_back(gen_almost_tree({.n = 40, .d = 3, .h = 6, .a = 1, .seed = 3}));
  instances.push_back(gen_butterfly(2));
  instances.push_back(gen_lower_bound_instance(24, 2, 4));
  for (const auto& g : instances) {
    Rig rig(g);
    auto verts = iota_verts(g.n);
    CHECK(brute_force_edges(verts, rig.oracle) == g.edges);
  }
}

TEST_CASE("undirected tree learner: frozen caterpillar") {
  // 0 - 1 - 2 - 3 with leaves 4 on 1 and 5 on 2.
  std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {1, 4}, {2, 5}};
  std::vector<Edge> want = edges;
  std::sort(want.begin(), want.end());
  SeparatorOracle so(6, edges);
  auto verts = iota_verts(6);
  auto got = learn_undirected_tree(verts, 3, so);
  CHECK(got == want);
}

TEST_CASE("undirected tree learner: random degree-capped trees") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto [n, edges] = gen_undirected_tree(70, 3, seed);
    SeparatorOracle so(n, edges);
    auto verts = iota_verts(n);
    auto got = learn_undirected_tree(verts, 3, so);
    CHECK(got == edges);
  }
}
