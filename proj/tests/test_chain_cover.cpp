#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <bit>
#include <random>
#include <vector>

#include "pql/chain_cover.hpp"
#include "pql/generators.hpp"

using namespace pql;

namespace {

std::vector<Bitset> relation(std::size_t s, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Bitset> rel(s, Bitset(s));
  for (auto [i, j] : pairs) rel[i].set(j);
  return rel;
}

// Every element in exactly one chain, and consecutive chain elements related.
void check_cover(const std::vector<Bitset>& rel, const std::vector<std::vector<std::size_t>>& chains) {
  std::vector<int> seen(rel.size(), 0);
  for (const auto& chain : chains) {
    REQUIRE(!chain.empty());
    for (std::size_t k = 0; k < chain.size(); ++k) {
      ++seen[chain[k]];
      if (k + 1 < chain.size()) CHECK(rel[chain[k]].test(chain[k + 1]));
    }
  }
  for (int c : seen) CHECK(c == 1);
}

}  // namespace

TEST_CASE("a total order collapses to one chain") {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) pairs.emplace_back(i, j);
  auto rel = relation(6, pairs);
  auto chains = minimum_chain_cover(rel);
  REQUIRE(chains.size() == 1);
  CHECK(chains[0] == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  check_cover(rel, chains);
}

TEST_CASE("an antichain needs one chain per element") {
  auto rel = relation(4, {});
  auto chains = minimum_chain_cover(rel);
  CHECK(chains.size() == 4);
  check_cover(rel, chains);
}

TEST_CASE("two parallel chains stay separate") {
  auto rel = relation(5, {{0, 1}, {0, 2}, {1, 2}, {3, 4}});
  auto chains = minimum_chain_cover(rel);
  CHECK(chains.size() == 2);
  check_cover(rel, chains);
}

TEST_CASE("diamond: width two") {
  auto rel = relation(4, {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}});
  auto chains = minimum_chain_cover(rel);
  CHECK(chains.size() == 2);
  check_cover(rel, chains);
}

TEST_CASE("crown: three lows all below three highs except their partner") {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) pairs.emplace_back(i, 3 + j);
  auto rel = relation(6, pairs);
  auto chains = minimum_chain_cover(rel);
  CHECK(chains.size() == 3);  // maximum antichain has size 3
  check_cover(rel, chains);
}

TEST_CASE("empty input yields no chains") {
  CHECK(minimum_chain_cover({}).empty());
}

TEST_CASE("singleton") {
  auto chains = minimum_chain_cover(relation(1, {}));
  REQUIRE(chains.size() == 1);
  CHECK(chains[0] == std::vector<std::size_t>{0});
}

TEST_CASE("random tree ancestor orders match the antichain bound") {
  // In a rooted tree the strict ancestor relation restricted to a random
  // subset is a forest-shaped order whose minimum chain cover equals the
  // maximum number of pairwise-incomparable picks; verify by brute force on
  // small samples.
  std::mt19937_64 rng(17);
  Digraph g = gen_rooted_tree({.n = 60, .d = 3, .h = 7, .a = 1, .seed = 17});
  auto idx = build_reachability(g);
  std::uniform_int_distribution<std::size_t> pick(0, g.n - 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::size_t> sample;
    for (int k = 0; k < 10; ++k) sample.push_back(pick(rng));
    std::sort(sample.begin(), sample.end());
    sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
    const std::size_t s = sample.size();
    std::vector<Bitset> rel(s, Bitset(s));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        if (i != j && idx.reachable(static_cast<VertexId>(sample[i]), static_cast<VertexId>(sample[j])))
          rel[i].set(j);
    auto chains = minimum_chain_cover(rel);
    check_cover(rel, chains);
    // Brute-force maximum antichain over subsets (s <= 10).
    std::size_t best = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << s); ++mask) {
      bool anti = true;
      for (std::size_t i = 0; i < s && anti; ++i)
        for (std::size_t j = 0; j < s && anti; ++j)
          if (i != j && (mask >> i & 1) && (mask >> j & 1) && rel[i].test(j)) anti = false;
      if (anti) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
    }
    CHECK(chains.size() == best);
  }
}
