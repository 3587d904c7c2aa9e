// Command-line front end: generate hidden-graph instances, learn them back
// through the query oracle, verify results, and run scaling sweeps.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pql/bench.hpp"
#include "pql/graph_io.hpp"

using nlohmann::json;

namespace {

std::uint64_t default_seed() {
  if (const char* s = std::getenv("PQL_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      pql::fail(pql::Errc::bad_config, "PQL_SEED must be an unsigned integer");
    }
  }
  return 1;
}

json ledger_json(const pql::LedgerSnapshot& led) {
  json phases = json::array();
  for (const auto& [name, c] : led.phases)
    phases.push_back({{"name", name}, {"queries", c.queries}, {"rounds", c.rounds}});
  return {{"queries", led.queries},
          {"raw_queries", led.raw_queries},
          {"rounds", led.rounds},
          {"phases", phases}};
}

json edges_json(const std::vector<pql::Edge>& edges) {
  json out = json::array();
  for (const auto& [u, v] : edges) out.push_back({u, v});
  return out;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream os(path);
  if (!os) pql::fail(pql::Errc::io_error, "cannot open " + path);
  os << body;
}

struct GenerateArgs {
  std::string cls;
  std::size_t n = 64;
  int d = 3;
  int h = 8;
  std::size_t a = 2;
  std::uint64_t seed = 1;
  double split = 0.5;
  std::string out;
  bool meta = true;
};

int run_generate(const GenerateArgs& args) {
  pql::GenSpec spec{args.n, args.d, args.h, args.a, args.seed};
  json meta;
  meta["class"] = args.cls;
  meta["seed"] = args.seed;
  bool directed = true;

  pql::Digraph g;
  if (args.cls == "rooted-tree") {
    g = pql::gen_rooted_tree(spec);
  } else if (args.cls == "almost-tree") {
    g = pql::gen_almost_tree(spec);
  } else if (args.cls == "multitree") {
    g = pql::gen_multitree(spec);
  } else if (args.cls == "butterfly") {
    g = pql::gen_butterfly(args.h);
  } else if (args.cls == "lower-bound") {
    g = pql::gen_lower_bound_instance(args.n, args.d, args.h, args.split);
  } else if (args.cls == "undirected-tree") {
    auto [n, edges] = pql::gen_undirected_tree(args.n, args.d, args.seed);
    g = pql::Digraph::from_edges(n, edges);
    directed = false;
  } else {
    pql::fail(pql::Errc::bad_config, "unknown class '" + args.cls + "'");
  }

  pql::write_graph_file(args.out, g);
  std::cout << "wrote " << args.out << " (n=" << g.n << ", edges=" << g.edges.size() << ")\n";

  if (args.meta) {
    meta["n"] = g.n;
    meta["edge_count"] = g.edges.size();
    meta["directed"] = directed;
    if (directed) {
      auto rep = pql::classify(g);
      meta["report"] = {{"is_dag", rep.is_dag},
                        {"roots", rep.roots},
                        {"max_degree", rep.max_degree},
                        {"height", rep.height},
                        {"is_multitree", rep.is_multitree},
                        {"is_almost_tree", rep.is_almost_tree},
                        {"has_transitive_edge", rep.has_transitive_edge},
                        {"max_root_paths", rep.max_root_paths}};
    } else {
      std::vector<std::size_t> deg(g.n, 0);
      for (const auto& [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
      }
      meta["report"] = {{"max_degree", *std::max_element(deg.begin(), deg.end())}};
    }
    const std::string mpath = args.out + ".meta.json";
    write_text(mpath, meta.dump(2) + "\n");
    std::cout << "wrote " << mpath << "\n";
  }
  return 0;
}

struct LearnArgs {
  std::string alg;
  std::string in;
  std::string out;
  int d = 2;
  pql::LearnerConfig cfg;
  bool verify = false;
};

int run_learn(const LearnArgs& args) {
  pql::Digraph truth = pql::read_graph_file(args.in);
  pql::LearnerConfig cfg = args.cfg;
  cfg.d = args.d;

  json result;
  result["alg"] = args.alg;
  result["n"] = truth.n;
  std::vector<pql::Edge> got;

  if (args.alg == "undirected") {
    pql::SeparatorOracle so(truth.n, truth.edges);
    auto verts = pql::detail::all_vertices(truth.n);
    got = pql::learn_undirected_tree(verts, args.d, so);
    result["ledger"] = ledger_json(so.ledger().snapshot());
  } else {
    auto idx = pql::build_reachability(truth);
    pql::IndexOracle oracle(idx);
    auto verts = pql::detail::all_vertices(truth.n);
    if (args.alg == "short-tree") {
      pql::VertexId r = pql::sequential_find_root(verts, oracle);
      got = pql::learn_short_tree(verts, r, args.d, oracle);
      result["root"] = r;
    } else if (args.alg == "spanning") {
      std::mt19937_64 rng(cfg.seed);
      pql::VertexId r = pql::learn_root(verts, oracle, cfg, rng);
      got = pql::learn_spanning_tree(verts, r, oracle, cfg, rng);
      result["root"] = r;
    } else if (args.alg == "almost-tree") {
      auto res = pql::learn_almost_tree(oracle, cfg);
      got = res.edges;
      result["root"] = res.root;
    } else if (args.alg == "multitree") {
      auto res = pql::learn_multitree(oracle, cfg);
      got = res.edges;
      result["roots"] = res.roots;
    } else if (args.alg == "butterfly") {
      auto res = pql::learn_butterfly(oracle, cfg);
      got = res.edges;
      result["roots"] = res.roots;
    } else {
      pql::fail(pql::Errc::bad_config, "unknown algorithm '" + args.alg + "'");
    }
    result["ledger"] = ledger_json(oracle.ledger().snapshot());
  }

  std::sort(got.begin(), got.end());
  result["edges"] = edges_json(got);
  bool verified = true;
  if (args.verify) {
    verified = got == truth.edges;
    result["verified"] = verified;
  }
  const std::string body = result.dump(2) + "\n";
  if (args.out.empty())
    std::cout << body;
  else {
    write_text(args.out, body);
    std::cout << "wrote " << args.out << " (queries=" << result["ledger"]["queries"]
              << ", rounds=" << result["ledger"]["rounds"] << ")\n";
  }
  if (args.verify && !verified) {
    std::cerr << "verification failed: learned edge set differs from the input graph\n";
    return 1;
  }
  return 0;
}

int run_verify(const std::string& graph_path, const std::string& result_path) {
  pql::Digraph truth = pql::read_graph_file(graph_path);
  std::ifstream is(result_path);
  if (!is) pql::fail(pql::Errc::io_error, "cannot open " + result_path);
  json result = json::parse(is, nullptr, /*allow_exceptions=*/false);
  if (result.is_discarded() || !result.contains("edges") || !result["edges"].is_array())
    pql::fail(pql::Errc::io_error, result_path + " is not a learner result file");
  std::vector<pql::Edge> got;
  for (const auto& e : result["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      pql::fail(pql::Errc::io_error, "malformed edge entry in " + result_path);
    got.emplace_back(e[0].get<pql::VertexId>(), e[1].get<pql::VertexId>());
  }
  std::sort(got.begin(), got.end());
  if (got == truth.edges) {
    std::cout << "match: " << got.size() << " edges\n";
    return 0;
  }
  std::cerr << "mismatch: learned " << got.size() << " edges, hidden graph has "
            << truth.edges.size() << "\n";
  return 1;
}

struct SweepArgs {
  std::string alg;
  std::vector<std::size_t> ns;
  std::vector<int> hs;
  int d = 3;
  std::size_t a = 1;
  std::size_t trials = 9;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double butterfly_c = 0;
  std::string csv, gnuplot;
  std::string config, section;
};

int auto_height(std::size_t n) {
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(n, 2))))) +
         2;
}

int run_sweep_cmd(SweepArgs args) {
  if (!args.config.empty()) {
    auto conf = pql::read_config_file(args.config);
    auto key = [&](const std::string& k) {
      return args.section.empty() ? k : args.section + "." + k;
    };
    auto want = [&](const std::string& k) -> const pql::ConfigValue* {
      auto it = conf.find(key(k));
      return it == conf.end() ? nullptr : &it->second;
    };
    if (auto* v = want("alg")) args.alg = v->text;
    if (auto* v = want("n")) {
      args.ns.clear();
      for (double x : v->list) args.ns.push_back(static_cast<std::size_t>(x));
    }
    if (auto* v = want("h")) {
      args.hs.clear();
      for (double x : v->list) args.hs.push_back(static_cast<int>(x));
    }
    if (auto* v = want("d")) args.d = static_cast<int>(v->number);
    if (auto* v = want("a")) args.a = static_cast<std::size_t>(v->number);
    if (auto* v = want("trials")) args.trials = static_cast<std::size_t>(v->number);
    if (auto* v = want("seed")) args.seed = static_cast<std::uint64_t>(v->number);
    if (auto* v = want("butterfly_c")) args.butterfly_c = v->number;
  }
  if (args.alg.empty()) pql::fail(pql::Errc::bad_config, "sweep needs an algorithm");

  std::vector<pql::GenSpec> points;
  if (args.alg == "butterfly") {
    if (args.hs.empty()) pql::fail(pql::Errc::bad_config, "butterfly sweep needs --h values");
    for (int h : args.hs) {
      pql::GenSpec s;
      s.h = h;
      s.n = (std::size_t{1} << h) * (static_cast<std::size_t>(h) + 1);
      s.d = 4;
      points.push_back(s);
    }
  } else {
    if (args.ns.empty()) pql::fail(pql::Errc::bad_config, "sweep needs --n values");
    if (args.hs.empty()) args.hs.assign(args.ns.size(), 0);
    if (args.hs.size() == 1 && args.ns.size() > 1) args.hs.assign(args.ns.size(), args.hs[0]);
    if (args.hs.size() != args.ns.size())
      pql::fail(pql::Errc::bad_config, "--h list must be one value or match --n");
    for (std::size_t i = 0; i < args.ns.size(); ++i) {
      pql::GenSpec s;
      s.n = args.ns[i];
      s.d = args.d;
      s.h = args.hs[i] > 0 ? args.hs[i] : auto_height(args.ns[i]);
      s.a = args.a;
      points.push_back(s);
    }
  }

  pql::LearnerConfig cfg;
  cfg.d = args.d;
  if (args.butterfly_c > 0) cfg.butterfly_c = args.butterfly_c;

  std::cout << "n,h,a,median_q,p95_q,median_rounds,success_rate,ratio\n";
  auto sink = [](const pql::SweepRow& r) {
    std::cout << r.n << "," << r.h << "," << r.a << "," << r.median_q << "," << r.p95_q << ","
              << r.median_rounds << "," << r.success_rate << "," << r.ratio << "\n";
  };
  auto rep = pql::run_sweep(args.alg, points, args.trials, args.seed, cfg, args.threads, sink);
  if (!args.csv.empty()) {
    pql::write_sweep_csv(rep, args.csv);
    std::cout << "wrote " << args.csv << "\n";
  }
  if (!args.gnuplot.empty()) {
    pql::write_gnuplot_script(args.csv.empty() ? "sweep.csv" : args.csv, args.gnuplot,
                              rep.alg + " query scaling");
    std::cout << "wrote " << args.gnuplot << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hidden-graph reconstruction via path queries"};
  app.set_help_flag("--help", "print usage and exit");
  app.require_subcommand(1);

  GenerateArgs ga;
  ga.seed = 0;  // resolved after parse so PQL_SEED applies only without --seed
  auto* gen = app.add_subcommand("generate", "write a hidden-graph instance to a file");
  gen->add_option("--class", ga.cls, "rooted-tree|almost-tree|multitree|butterfly|lower-bound|undirected-tree")
      ->required();
  gen->add_option("--n", ga.n, "vertex count");
  gen->add_option("--d", ga.d, "degree bound");
  gen->add_option("--h", ga.h, "height (exact for almost-tree spine, cap otherwise; level count for butterfly)");
  gen->add_option("--a", ga.a, "root count for multitrees");
  auto* gseed = gen->add_option("--seed", ga.seed, "instance seed (default: $PQL_SEED or 1)");
  gen->add_option("--split", ga.split, "lower-bound instance balance in (0,1)");
  gen->add_option("--out", ga.out, "output path (.json or .csv)")->required();
  gen->add_flag("!--no-meta", ga.meta, "skip the .meta.json sidecar");

  LearnArgs la;
  auto* learn = app.add_subcommand("learn", "reconstruct a hidden graph through the oracle");
  learn->add_option("--alg", la.alg, "short-tree|spanning|almost-tree|multitree|butterfly|undirected")
      ->required();
  learn->add_option("--in", la.in, "hidden graph file")->required();
  learn->add_option("--out", la.out, "result JSON path (default: stdout)");
  learn->add_option("--d", la.d, "degree bound the learner assumes");
  auto* lseed = learn->add_option("--seed", la.cfg.seed, "learner seed (default: $PQL_SEED or 1)");
  learn->add_option("--c1", la.cfg.c1, "sample-size factor");
  learn->add_option("--c2", la.cfg.c2, "estimator draw factor");
  learn->add_option("--eps-cap", la.cfg.eps_cap, "narrowing restarts allowed");
  learn->add_option("--sep-cap", la.cfg.sep_loop_cap, "split attempts allowed (0 = 64*d)");
  learn->add_option("--g-base", la.cfg.g_base, "brute-force threshold (0 = max(16, d+2))");
  learn->add_option("--butterfly-c", la.cfg.butterfly_c, "butterfly sample factor");
  learn->add_flag("--verify", la.verify, "compare the learned edges to the input graph");

  std::string vgraph, vresult;
  auto* verify = app.add_subcommand("verify", "compare a result file to a hidden graph");
  verify->add_option("--in", vgraph, "hidden graph file")->required();
  verify->add_option("--result", vresult, "learner result JSON")->required();

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "seeded scaling sweep, CSV rows to stdout");
  sweep->add_option("--alg", sa.alg,
                    "short-tree|spanning|almost-tree|cross-edge|multitree|butterfly|undirected");
  sweep->add_option("--n", sa.ns, "vertex counts (one point each)");
  sweep->add_option("--h", sa.hs, "heights; single value broadcasts; 0 = ceil(log2 n)+2");
  sweep->add_option("--d", sa.d, "degree bound");
  sweep->add_option("--a", sa.a, "multitree root count");
  sweep->add_option("--trials", sa.trials, "trials per point");
  auto* sseed = sweep->add_option("--seed", sa.seed, "sweep base seed (default: $PQL_SEED or 1)");
  sweep->add_option("--threads", sa.threads, "worker threads (0 = hardware)");
  sweep->add_option("--butterfly-c", sa.butterfly_c, "butterfly sample factor override");
  sweep->add_option("--csv", sa.csv, "also write rows to this CSV file");
  sweep->add_option("--gnuplot", sa.gnuplot, "write a companion gnuplot script");
  sweep->add_option("--config", sa.config, "read sweep settings from a config file");
  sweep->add_option("--section", sa.section, "config section to use");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) {
      if (gseed->count() == 0) ga.seed = default_seed();
      return run_generate(ga);
    }
    if (learn->parsed()) {
      if (lseed->count() == 0) la.cfg.seed = default_seed();
      return run_learn(la);
    }
    if (verify->parsed()) return run_verify(vgraph, vresult);
    if (sweep->parsed()) {
      if (sseed->count() == 0) sa.seed = default_seed();
      return run_sweep_cmd(sa);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const pql::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_learner_failure() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
