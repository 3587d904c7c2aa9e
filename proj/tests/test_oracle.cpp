#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "pql/graph.hpp"
#include "pql/oracle.hpp"

using namespace pql;

namespace {

Digraph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i)
    e.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
  return Digraph::from_edges(n, std::move(e));
}

struct Fixture {
  Digraph g = path_graph(8);
  ReachabilityIndex idx = build_reachability(g);
};

}  // namespace

TEST_CASE("single queries: strict answers, one round each") {
  Fixture f;
  IndexOracle o(f.idx);
  CHECK(o.universe_size() == 8);
  CHECK(o.query(0, 7));
  CHECK(!o.query(7, 0));
  CHECK(!o.query(3, 3));  // no vertex reaches itself
  CHECK(o.ledger().queries() == 3);
  CHECK(o.ledger().raw_queries() == 3);
  CHECK(o.ledger().rounds() == 3);
  CHECK_THROWS_AS(o.query(0, 99), Error);
}

TEST_CASE("batch: many pairs, one round; empty batches are rejected") {
  Fixture f;
  IndexOracle o(f.idx);
  std::vector<Edge> pairs{{0, 1}, {1, 0}, {2, 5}, {5, 5}};
  auto ans = o.batch(pairs);
  CHECK(ans == std::vector<std::uint8_t>{1, 0, 1, 0});
  CHECK(o.ledger().queries() == 4);
  CHECK(o.ledger().rounds() == 1);
  CHECK_THROWS_AS(o.batch({}), Error);
}

TEST_CASE("count: one round, duplicates charged per occurrence") {
  Fixture f;
  IndexOracle o(f.idx);
  std::vector<VertexId> xs{1, 2, 2, 7, 0};
  CHECK(o.count(0, xs) == 4);  // 1, 2, 2, 7 — not 0 itself
  CHECK(o.ledger().queries() == 5);
  CHECK(o.ledger().rounds() == 1);
  CHECK_THROWS_AS(o.count(0, {}), Error);
}

TEST_CASE("dedup cache charges a repeated pair once but answers every time") {
  Fixture f;
  IndexOracle o(f.idx, OracleConfig{.dedup_cache = true});
  CHECK(o.query(0, 5));
  CHECK(o.query(0, 5));
  CHECK(o.query(5, 0) == false);
  CHECK(o.ledger().raw_queries() == 3);
  CHECK(o.ledger().queries() == 2);  // (0,5) charged once, (5,0) is distinct
}

TEST_CASE("fork_join adds the longest branch; queries sum") {
  Fixture f;
  IndexOracle o(f.idx);
  o.query(0, 1);  // 1 round before the fork
  o.fork_join(
      [&] {
        o.query(0, 2);
        o.query(0, 3);  // 2 rounds
      },
      [&] {
        std::vector<Edge> pairs{{0, 4}, {0, 5}, {0, 6}};
        o.batch(pairs);  // 1 round, 3 queries
      });
  CHECK(o.ledger().rounds() == 1 + 2);
  CHECK(o.ledger().queries() == 1 + 2 + 3);
}

TEST_CASE("nested fork_join composes as critical-path depth") {
  QueryLedger led;
  led.fork_join(
      [&] {
        led.charge_round();
        led.fork_join([&] { led.charge_round(); led.charge_round(); },
                      [&] { led.charge_round(); });
      },
      [&] { led.charge_round(); });
  CHECK(led.rounds() == 3);  // branch one: 1 + max(2, 1)
}

TEST_CASE("fork_join_indexed takes the maximum over bodies") {
  QueryLedger led;
  led.charge_round();
  led.fork_join_indexed(4, [&](std::size_t i) {
    for (std::size_t k = 0; k <= i; ++k) led.charge_round();
  });
  CHECK(led.rounds() == 1 + 4);
}

TEST_CASE("phase counters attribute queries and flat rounds to labels") {
  Fixture f;
  IndexOracle o(f.idx);
  {
    PhaseScope ph(o.ledger(), "first");
    o.query(0, 1);
    o.query(0, 2);
  }
  {
    PhaseScope ph(o.ledger(), "second");
    std::vector<Edge> pairs{{0, 3}, {0, 4}};
    o.batch(pairs);
  }
  auto snap = o.ledger().snapshot();
  REQUIRE(snap.phases.size() == 2);
  CHECK(snap.phases[0].first == "first");
  CHECK(snap.phases[0].second.queries == 2);
  CHECK(snap.phases[0].second.rounds == 2);
  CHECK(snap.phases[1].first == "second");
  CHECK(snap.phases[1].second.queries == 2);
  CHECK(snap.phases[1].second.rounds == 1);
  CHECK(snap.queries == 4);
  CHECK(snap.rounds == 3);
}

TEST_CASE("inverse oracle flips pairs and shares the ledger") {
  Fixture f;
  IndexOracle o(f.idx);
  InverseOracle inv(o);
  CHECK(inv.query(7, 0));   // path(0,7) in the base graph
  CHECK(!inv.query(0, 7));
  CHECK(o.ledger().queries() == 2);
  CHECK(&inv.ledger() == &o.ledger());
}

TEST_CASE("restricted oracle refuses out-of-scope endpoints") {
  Fixture f;
  IndexOracle o(f.idx);
  std::vector<VertexId> scope{2, 3, 4};
  RestrictedOracle r(o, scope);
  CHECK(r.query(2, 4));
  CHECK(!r.query(4, 2));
  CHECK_THROWS_AS(r.query(0, 3), Error);
  CHECK_THROWS_AS(r.query(3, 7), Error);
  try {
    r.query(0, 3);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::vertex_not_in_scope);
  }
  // Nesting intersects scopes.
  std::vector<VertexId> inner{3, 4};
  RestrictedOracle r2(r, inner);
  CHECK(r2.query(3, 4));
  CHECK_THROWS_AS(r2.query(2, 3), Error);
  // The scope is copied, so the caller's vector may go away.
  RestrictedOracle r3 = [&] {
    std::vector<VertexId> tmp{1, 2, 3};
    return RestrictedOracle(o, tmp);
  }();
  CHECK(r3.query(1, 3));
}

TEST_CASE("separator oracle answers interior-vertex questions on a path") {
  // Undirected path 0 - 1 - 2 - 3 - 4.
  std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  SeparatorOracle so(5, e);
  CHECK(so.query(0, 2, 4));   // 2 lies between 0 and 4
  CHECK(so.query(4, 2, 0));   // symmetric
  CHECK(!so.query(0, 4, 2));  // 4 is past 2
  CHECK(!so.query(0, 0, 4));  // endpoint is never interior
  CHECK(!so.query(0, 4, 4));
  CHECK(so.ledger().queries() == 5);
  CHECK(so.ledger().rounds() == 5);
}

TEST_CASE("separator oracle on a star: only the hub separates") {
  std::vector<Edge> e{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  SeparatorOracle so(5, e);
  CHECK(so.query(1, 0, 2));
  CHECK(!so.query(1, 3, 2));
  CHECK(!so.query(1, 2, 0));  // 0 is an endpoint here
}

TEST_CASE("separator oracle validates its tree") {
  CHECK_THROWS_AS(SeparatorOracle(3, {{0, 1}}), Error);              // too few edges
  CHECK_THROWS_AS(SeparatorOracle(4, {{0, 1}, {2, 3}, {0, 1}}), Error);  // disconnected
  CHECK_THROWS_AS(SeparatorOracle(2, {{0, 0}}), Error);              // self-loop
}

TEST_CASE("separator-backed path adapter behaves like a rooted tree oracle") {
  // Tree: 0 - 1, 1 - 2, 1 - 3, rooted at 0 gives 0 -> 1 -> {2, 3}.
  std::vector<Edge> e{{0, 1}, {1, 2}, {1, 3}};
  SeparatorOracle so(4, e);
  SepPathAdapter ad(so, 0);
  CHECK(ad.query(1, 2));
  CHECK(!ad.query(2, 1));
  CHECK(!ad.query(2, 3));  // siblings
  const auto before = so.ledger().queries();
  CHECK(ad.query(0, 2));   // root queries answered locally, free of charge
  CHECK(!ad.query(0, 0));
  CHECK(so.ledger().queries() == before);
}
