#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pql/dag_learn.hpp"
#include "pql/generators.hpp"
#include "pql/graph.hpp"
#include "pql/multitree_learn.hpp"
#include "pql/oracle.hpp"
#include "pql/tree_learn.hpp"

namespace pql {

enum class TrialStatus { exact, wrong, capped };

struct TrialOutcome {
  TrialStatus status = TrialStatus::wrong;
  std::uint64_t queries = 0;
  std::uint64_t rounds = 0;

  bool ok() const { return status == TrialStatus::exact; }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9E3779B97F4A7C15ull * (b + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

inline std::vector<VertexId> all_vertices(std::size_t n) {
  std::vector<VertexId> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<VertexId>(i);
  return v;
}

inline bool same_edges(const std::vector<Edge>& got, const std::vector<Edge>& want) {
  return got == want;  // both sorted unique
}

}  // namespace detail

/// Names accepted by run_trial / the sweep runner / the command line.
inline const std::vector<std::string>& trial_algorithms() {
  static const std::vector<std::string> names = {"short-tree", "spanning",  "almost-tree",
                                                 "cross-edge", "multitree", "butterfly",
                                                 "undirected"};
  return names;
}

/// One generated instance, one learner run, ground-truth comparison.
/// instance_seed fixes the hidden graph; learner_seed drives the learner's
/// own randomness.  Cap errors (narrowing or split attempts exhausted) are
/// reported as `capped` with the queries spent; any other error propagates.
inline TrialOutcome run_trial(const std::string& alg, GenSpec spec, std::uint64_t instance_seed,
                              std::uint64_t learner_seed, LearnerConfig cfg) {
  spec.seed = instance_seed;
  cfg.seed = learner_seed;
  cfg.d = spec.d;
  TrialOutcome out;

  if (alg == "undirected") {
    auto [n, truth] = gen_undirected_tree(spec.n, spec.d, spec.seed);
    SeparatorOracle so(n, truth);
    auto verts = detail::all_vertices(n);
    try {
      auto got = learn_undirected_tree(verts, spec.d, so);
      out.status = detail::same_edges(got, truth) ? TrialStatus::exact : TrialStatus::wrong;
    } catch (const Error& e) {
      if (!e.is_learner_failure()) throw;
      out.status = TrialStatus::capped;
    }
    out.queries = so.ledger().queries();
    out.rounds = so.ledger().rounds();
    return out;
  }

  Digraph g;
  if (alg == "butterfly")
    g = gen_butterfly(spec.h);
  else if (alg == "multitree")
    g = gen_multitree(spec);
  else if (alg == "almost-tree" || alg == "cross-edge")
    g = gen_almost_tree(spec);
  else if (alg == "short-tree" || alg == "spanning")
    g = gen_rooted_tree(spec);
  else
    fail(Errc::bad_config, "unknown algorithm '" + alg + "'");

  auto idx = build_reachability(g);
  IndexOracle o(idx);
  auto verts = detail::all_vertices(g.n);

  try {
    if (alg == "short-tree") {
      VertexId r = sequential_find_root(verts, o);
      auto got = learn_short_tree(verts, r, spec.d, o);
      out.status = detail::same_edges(got, g.edges) ? TrialStatus::exact : TrialStatus::wrong;
    } else if (alg == "spanning") {
      std::mt19937_64 rng(cfg.seed);
      VertexId r = learn_root(verts, o, cfg, rng);
      auto got = learn_spanning_tree(verts, r, o, cfg, rng);
      out.status = detail::same_edges(got, g.edges) ? TrialStatus::exact : TrialStatus::wrong;
    } else if (alg == "almost-tree" || alg == "cross-edge") {
      auto res = learn_almost_tree(o, cfg);
      out.status = detail::same_edges(res.edges, g.edges) ? TrialStatus::exact : TrialStatus::wrong;
      if (alg == "cross-edge") {
        for (const auto& [name, counters] : res.ledger.phases)
          if (name == "cross-edge") {
            out.queries = counters.queries;
            out.rounds = counters.rounds;
            return out;
          }
        fail(Errc::precondition, "pipeline ledger lost its cross-edge phase");
      }
    } else if (alg == "multitree") {
      auto res = learn_multitree(o, cfg);
      out.status = detail::same_edges(res.edges, g.edges) ? TrialStatus::exact : TrialStatus::wrong;
    } else {  // butterfly
      auto res = learn_butterfly(o, cfg);
      out.status = detail::same_edges(res.edges, g.edges) ? TrialStatus::exact : TrialStatus::wrong;
    }
  } catch (const Error& e) {
    if (!e.is_learner_failure()) throw;
    out.status = TrialStatus::capped;
  }
  out.queries = o.ledger().queries();
  out.rounds = o.ledger().rounds();
  return out;
}

struct SweepRow {
  std::size_t n = 0;
  int h = 0;
  std::size_t a = 0;
  double median_q = 0;
  double p95_q = 0;
  double median_rounds = 0;
  double success_rate = 0;
  double ratio = 0;  // median_q over the previous row's median_q; 0 on the first row
};

struct SweepReport {
  std::string alg;
  int d = 0;
  std::size_t trials = 0;
  std::vector<SweepRow> rows;
};

namespace detail {

inline double percentile(std::vector<std::uint64_t> xs, double p) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size();
  std::size_t idx = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(k)));
  if (idx == 0) idx = 1;
  if (idx > k) idx = k;
  return static_cast<double>(xs[idx - 1]);
}

inline double median(const std::vector<std::uint64_t>& xs) { return percentile(xs, 50.0); }

}  // namespace detail

/// Runs `trials` seeded trials per point, in parallel worker threads with
/// results written to per-trial slots, so the outcome is independent of the
/// thread count.  Rows are handed to `sink` as they complete.
inline SweepReport run_sweep(const std::string& alg, const std::vector<GenSpec>& points,
                             std::size_t trials, std::uint64_t base_seed, LearnerConfig cfg,
                             unsigned threads = 0,
                             const std::function<void(const SweepRow&)>& sink = {}) {
  if (points.empty()) fail(Errc::bad_config, "sweep with no points");
  if (trials == 0) fail(Errc::bad_config, "sweep with no trials");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  SweepReport rep;
  rep.alg = alg;
  rep.d = points.front().d;
  rep.trials = trials;
  double prev_median = 0;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const GenSpec& point = points[pi];
    std::vector<TrialOutcome> results(trials);
    std::vector<std::exception_ptr> errors(trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t ti = next.fetch_add(1);
        if (ti >= trials) return;
        try {
          std::uint64_t inst = detail::mix_seed(base_seed, pi * 1000003 + ti);
          std::uint64_t lrn = detail::mix_seed(inst, 0x5eedULL);
          results[ti] = run_trial(alg, point, inst, lrn, cfg);
        } catch (...) {
          errors[ti] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, trials); ++t)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    std::vector<std::uint64_t> qs, rs;
    std::size_t good = 0;
    for (const auto& r : results) {
      qs.push_back(r.queries);
      rs.push_back(r.rounds);
      if (r.ok()) ++good;
    }
    SweepRow row;
    row.n = point.n;
    row.h = point.h;
    row.a = point.a;
    row.median_q = detail::median(qs);
    row.p95_q = detail::percentile(qs, 95.0);
    row.median_rounds = detail::median(rs);
    row.success_rate = static_cast<double>(good) / static_cast<double>(trials);
    row.ratio = prev_median > 0 ? row.median_q / prev_median : 0;
    prev_median = row.median_q;
    rep.rows.push_back(row);
    if (sink) sink(row);
  }
  return rep;
}

inline void write_sweep_csv(const SweepReport& rep, std::ostream& os) {
  os << "# alg=" << rep.alg << " d=" << rep.d << " trials=" << rep.trials << "\n";
  os << "n,h,a,median_q,p95_q,median_rounds,success_rate,ratio\n";
  for (const auto& r : rep.rows)
    os << r.n << "," << r.h << "," << r.a << "," << r.median_q << "," << r.p95_q << ","
       << r.median_rounds << "," << r.success_rate << "," << r.ratio << "\n";
}

inline void write_sweep_csv(const SweepReport& rep, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(Errc::io_error, "cannot open " + path);
  write_sweep_csv(rep, os);
}

/// Companion plot script: median charged queries against n, log-log.
inline void write_gnuplot_script(const std::string& csv_path, const std::string& script_path,
                                 const std::string& title) {
  std::ofstream os(script_path);
  if (!os) fail(Errc::io_error, "cannot open " + script_path);
  os << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'n'\n"
     << "set ylabel 'charged queries'\n"
     << "set title '" << title << "'\n"
     << "set key left top\n"
     << "plot '" << csv_path << "' using 1:4 with linespoints title 'median', \\\n"
     << "     '" << csv_path << "' using 1:5 with linespoints title 'p95'\n";
}

// ---------------------------------------------------------------------------
// Minimal key/value config reader: [section] headers, `key = value` lines,
// where value is a number, a "quoted string", or [a, b, c] of numbers.
// Keys are returned as "section.key".
// ---------------------------------------------------------------------------

struct ConfigValue {
  enum class Kind { number, text, list } kind = Kind::number;
  double number = 0;
  std::string text;
  std::vector<double> list;
};

using ConfigMap = std::map<std::string, ConfigValue>;

namespace detail {

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline ConfigValue parse_config_value(const std::string& raw, const std::string& where) {
  ConfigValue v;
  if (raw.empty()) fail(Errc::bad_config, "empty value at " + where);
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      fail(Errc::bad_config, "unterminated string at " + where);
    v.kind = ConfigValue::Kind::text;
    v.text = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') fail(Errc::bad_config, "unterminated list at " + where);
    v.kind = ConfigValue::Kind::list;
    std::stringstream ss(raw.substr(1, raw.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      if (item.empty()) continue;
      try {
        v.list.push_back(std::stod(item));
      } catch (const std::exception&) {
        fail(Errc::bad_config, "bad list item '" + item + "' at " + where);
      }
    }
    return v;
  }
  try {
    std::size_t used = 0;
    v.number = std::stod(raw, &used);
    if (used != raw.size()) fail(Errc::bad_config, "trailing junk at " + where);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::bad_config, "bad number '" + raw + "' at " + where);
  }
  return v;
}

}  // namespace detail

inline ConfigMap read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::io_error, "cannot open " + path);
  ConfigMap out;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') fail(Errc::bad_config, "unterminated section at " + where);
      section = detail::strip(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(Errc::bad_config, "expected key = value at " + where);
    std::string key = detail::strip(line.substr(0, eq));
    if (key.empty()) fail(Errc::bad_config, "empty key at " + where);
    if (!section.empty()) key = section + "." + key;
    out[key] = detail::parse_config_value(detail::strip(line.substr(eq + 1)), where);
  }
  return out;
}

}  // namespace pql
