#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pql/graph.hpp"

namespace pql {

// Edge-list JSON: {"n": <int>, "edges": [[u,v], ...]}.
// Writers sort edges, so a fixed graph always serializes to the same bytes.

inline void write_graph_json(std::ostream& os, const Digraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  os << j.dump() << "\n";
}

inline Digraph read_graph_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::io_error, std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    fail(Errc::io_error, "graph JSON needs fields \"n\" and \"edges\"");
  if (!j["n"].is_number_unsigned()) fail(Errc::io_error, "\"n\" must be a non-negative integer");
  std::size_t n = j["n"].get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      fail(Errc::io_error, "each edge must be a [u,v] pair of non-negative integers");
    edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
  }
  return Digraph::from_edges(n, std::move(edges));
}

// Edge-list CSV: one "u,v" line per edge.  The vertex count is inferred as
// max endpoint + 1, so graphs whose top-id vertex is isolated need JSON.

inline void write_graph_csv(std::ostream& os, const Digraph& g) {
  for (const auto& [u, v] : g.edges) os << u << "," << v << "\n";
}

inline Digraph read_graph_csv(std::istream& is) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      fail(Errc::io_error, "line " + std::to_string(lineno) + ": expected \"u,v\"");
    try {
      unsigned long u = std::stoul(line.substr(0, comma));
      unsigned long v = std::stoul(line.substr(comma + 1));
      edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
      n = std::max(n, std::max<std::size_t>(u, v) + 1);
    } catch (const std::exception&) {
      fail(Errc::io_error, "line " + std::to_string(lineno) + ": expected \"u,v\"");
    }
  }
  return Digraph::from_edges(n, std::move(edges));
}

inline Digraph read_graph_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::io_error, "cannot open " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return read_graph_csv(f);
  return read_graph_json(f);
}

inline void write_graph_file(const std::string& path, const Digraph& g) {
  std::ofstream f(path);
  if (!f) fail(Errc::io_error, "cannot open " + path + " for writing");
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    write_graph_csv(f, g);
  else
    write_graph_json(f, g);
}

}  // namespace pql
