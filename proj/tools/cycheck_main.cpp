#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cycheck/bench.hpp"
#include "cycheck/explore.hpp"
#include "cycheck/graph.hpp"
#include "cycheck/map_engine.hpp"
#include "cycheck/model.hpp"
#include "cycheck/oracle.hpp"
#include "cycheck/owcty.hpp"
#include "cycheck/progress.hpp"

namespace {

using namespace cycheck;

constexpr int kExitNoCycle = 0;
constexpr int kExitCycle = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceLimit = 3;
constexpr int kExitModelRuntime = 4;

void print_final(const Verdict& verdict, const RunStats& stats) {
  // The stats and verdict lines contain only run-invariant values; timing
  // goes on its own line so output comparison across runs stays byte-exact.
  std::printf("stats: states=%llu trans=%llu iters=%llu kernel-calls=%llu\n",
              static_cast<unsigned long long>(stats.verdict_states),
              static_cast<unsigned long long>(stats.verdict_transitions),
              static_cast<unsigned long long>(stats.verdict_iterations),
              static_cast<unsigned long long>(stats.verdict_kernel_calls));
  std::printf("times: csr=%.3fms kernel=%.3fms total=%.3fms\n", stats.csr_ms, stats.kernel_ms,
              stats.total_ms);
  if (verdict.cycle_found())
    std::printf("verdict=cycle-found witness=%u\n", *verdict.witness);
  else
    std::printf("verdict=no-accepting-cycle\n");
}

std::map<std::string, std::int32_t> parse_consts(const std::vector<std::string>& defs) {
  std::map<std::string, std::int32_t> consts;
  for (const std::string& def : defs) {
    auto eq = def.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError(DiagCode::syntax_error, 0, 0, "--const expects NAME=VALUE, got '" + def + "'");
    std::string name = def.substr(0, eq);
    try {
      consts[name] = std::stoi(def.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError(DiagCode::syntax_error, 0, 0, "bad --const value in '" + def + "'");
    }
  }
  return consts;
}

int run_check(const std::string& path, ExploreConfig cfg,
              const std::vector<std::string>& const_defs) {
  Model model = parse_model(read_text_file(path), parse_consts(const_defs));
  cfg.progress_sink = [](const ProgressRecord& r) {
    std::printf("%s\n", render_progress(r).c_str());
    std::fflush(stdout);
  };
  ExploreResult result = explore(model, cfg);
  print_final(result.verdict, result.stats);
  return result.verdict.cycle_found() ? kExitCycle : kExitNoCycle;
}

int run_graph(const std::string& path, const std::string& algorithm) {
  auto t0 = std::chrono::steady_clock::now();
  ExplicitGraph g = load_explicit_graph(path);
  EdgeLog log({std::max<VertexId>(g.n, 1), std::max<std::uint64_t>(g.edges.size(), 1)});
  fill_log(g, log);

  RunStats stats;
  stats.verdict_states = g.n;
  stats.verdict_transitions = g.edges.size();
  Verdict verdict;

  auto ms = [&](std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
        .count();
  };
  if (algorithm == "map") {
    auto tb = std::chrono::steady_clock::now();
    CsrSnapshot snap = build_snapshot(log, Orientation::transposed);
    stats.csr_ms = ms(tb);
    auto tk = std::chrono::steady_clock::now();
    auto [v, st] = run_map(snap, snap.accepting);
    stats.kernel_ms = ms(tk);
    verdict = v;
    stats.verdict_iterations = st.iterations;
    stats.verdict_kernel_calls = st.kernel_calls;
  } else if (algorithm == "owcty") {
    auto tb = std::chrono::steady_clock::now();
    CsrSnapshot snap = build_snapshot(log, Orientation::forward);
    stats.csr_ms = ms(tb);
    auto tk = std::chrono::steady_clock::now();
    auto [v, st] = run_owcty(snap, snap.accepting);
    stats.kernel_ms = ms(tk);
    verdict = v;
    stats.verdict_iterations = st.outer_iterations;
  } else {  // scc
    Bitset acc(g.n);
    for (VertexId a : g.accepting) acc.set(a);
    auto tk = std::chrono::steady_clock::now();
    verdict = scc_verdict(g.edges, g.n, acc).verdict;
    stats.kernel_ms = ms(tk);
  }
  stats.total_ms = ms(t0);
  print_final(verdict, stats);
  return verdict.cycle_found() ? kExitCycle : kExitNoCycle;
}

int run_bench_cmd(const std::string& dir, const std::string& csv_path) {
  const Algorithm algorithms[] = {Algorithm::map, Algorithm::owcty, Algorithm::ndfs};
  BenchReport report = run_bench(dir, algorithms);
  std::printf("%s", render_bench_table(report).c_str());
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    out << render_bench_csv(report);
  }
  if (!report.mismatches.empty()) {
    for (const std::string& m : report.mismatches)
      std::fprintf(stderr, "manifest mismatch: %s\n", m.c_str());
    return kExitUsage;
  }
  return kExitNoCycle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit-state LTL model checker (accepting-cycle detection)"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "check a .cdve model");
  std::string model_path;
  std::string check_alg = "map";
  ExploreConfig cfg;
  std::vector<std::string> const_defs;
  bool no_pruning = false, no_scc = false, no_early = false;
  check->add_option("model", model_path, "model file (.cdve)")->required();
  check->add_option("--algorithm", check_alg, "map|owcty|ndfs")
      ->check(CLI::IsMember({"map", "owcty", "ndfs"}));
  check->add_option("--workers", cfg.generation_workers, "worker count")->check(CLI::Range(1, 256));
  check->add_option("--detect-every", cfg.detection_interval_edges,
                    "edges per detection round (0 = final round only)");
  check->add_flag("--no-pruning", no_pruning, "disable property relevance pruning");
  check->add_flag("--no-scc-restriction", no_scc, "disable final SCC restriction");
  check->add_flag("--no-early-exit", no_early, "always generate the full state space");
  check->add_option("--report-every", cfg.report_every_states, "progress cadence in states");
  check->add_option("--max-states", cfg.max_states, "state count cap");
  check->add_option("--const", const_defs, "NAME=VALUE substitution")->take_all();

  // graph
  auto* graph = app.add_subcommand("graph", "check an explicit graph file");
  std::string graph_path;
  std::string graph_alg = "map";
  graph->add_option("file", graph_path, "graph file")->required();
  graph->add_option("--algorithm", graph_alg, "map|owcty|scc")
      ->check(CLI::IsMember({"map", "owcty", "scc"}));

  // bench
  auto* bench = app.add_subcommand("bench", "run the benchmark corpus");
  std::string bench_dir;
  std::string csv_path;
  bench->add_option("dir", bench_dir, "directory of .cdve models")->required();
  bench->add_option("--csv", csv_path, "write per-run CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) {
      cfg.algorithm = *algorithm_from_name(check_alg);
      cfg.enable_relevance_pruning = !no_pruning;
      cfg.enable_final_scc_restriction = !no_scc;
      cfg.early_exit = !no_early;
      return run_check(model_path, cfg, const_defs);
    }
    if (graph->parsed()) return run_graph(graph_path, graph_alg);
    return run_bench_cmd(bench_dir, csv_path);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ModelRuntimeError& e) {
    std::fprintf(stderr, "model runtime error: %s\n", e.what());
    return kExitModelRuntime;
  } catch (const ResourceLimitError& e) {
    std::fprintf(stderr, "resource limit: %s\n", e.what());
    return kExitResourceLimit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
