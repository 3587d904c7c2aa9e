#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <vector>

#include "pql/graph.hpp"

namespace pql {

/// Minimum chain cover of a strict partial order on elements 0..s-1, where
/// rel[i].test(j) means i precedes j and rel is transitively closed.
///
/// A partition into k chains exists with k = s - M, M the size of a maximum
/// matching in the bipartite graph that pairs each element-as-predecessor
/// with each element-as-successor.  Matched pairs are consecutive in a chain;
/// transitivity of rel makes every assembled walk a genuine chain.
///
/// Returned chains are ordered from most ancestral to most descendant.
inline std::vector<std::vector<std::size_t>> minimum_chain_cover(const std::vector<Bitset>& rel) {
  const std::size_t s = rel.size();
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> next(s, npos), prev(s, npos);

  // Hopcroft-Karp: BFS builds distance layers over free left vertices, DFS
  // extracts a maximal set of disjoint shortest augmenting paths.
  std::vector<std::size_t> dist(s);
  auto bfs = [&]() -> bool {
    std::deque<std::size_t> q;
    bool reachable_free = false;
    for (std::size_t i = 0; i < s; ++i) {
      if (next[i] == npos) {
        dist[i] = 0;
        q.push_back(i);
      } else {
        dist[i] = npos;
      }
    }
    while (!q.empty()) {
      std::size_t i = q.front();
      q.pop_front();
      for (std::size_t j = rel[i].find_first(); j != Bitset::npos; j = rel[i].find_next(j)) {
        std::size_t owner = prev[j];
        if (owner == npos) {
          reachable_free = true;
        } else if (dist[owner] == npos) {
          dist[owner] = dist[i] + 1;
          q.push_back(owner);
        }
      }
    }
    return reachable_free;
  };
  std::function<bool(std::size_t)> augment = [&](std::size_t i) -> bool {
    for (std::size_t j = rel[i].find_first(); j != Bitset::npos; j = rel[i].find_next(j)) {
      std::size_t owner = prev[j];
      if (owner == npos || (dist[owner] == dist[i] + 1 && augment(owner))) {
        next[i] = j;
        prev[j] = i;
        return true;
      }
    }
    dist[i] = npos;
    return false;
  };
  while (bfs()) {
    for (std::size_t i = 0; i < s; ++i)
      if (next[i] == npos) augment(i);
  }

  std::vector<std::vector<std::size_t>> chains;
  for (std::size_t head = 0; head < s; ++head) {
    if (prev[head] != npos) continue;
    std::vector<std::size_t> chain;
    for (std::size_t cur = head; cur != npos; cur = next[cur]) chain.push_back(cur);
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace pql
