#include "cycheck/bench.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cycheck/model.hpp"

namespace cycheck {

namespace {

std::optional<std::uint64_t> parse_u64(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::string fmt_ms(double ms) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

const char* verdict_text(const Verdict& v) {
  return v.cycle_found() ? "cycle-found" : "no-accepting-cycle";
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(DiagCode::syntax_error, 0, 0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ManifestInfo parse_manifest(std::string_view model_text) {
  ManifestInfo info;
  std::istringstream lines{std::string(model_text)};
  std::string line;
  while (std::getline(lines, line)) {
    auto pos = line.find("// manifest:");
    if (pos == std::string::npos) continue;
    std::istringstream fields(line.substr(pos + 12));
    std::string field;
    while (fields >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) continue;
      std::string key = field.substr(0, eq), value = field.substr(eq + 1);
      if (key == "expect") {
        if (value == "cycle") info.expect = Outcome::cycle_found;
        if (value == "no-cycle") info.expect = Outcome::no_accepting_cycle;
      } else if (key == "states") {
        info.states = parse_u64(value);
      } else if (key == "processes") {
        info.processes = parse_u64(value);
      } else if (key == "transitions") {
        info.transitions = parse_u64(value);
      } else if (key == "init-successors") {
        info.init_successors = parse_u64(value);
      }
    }
  }
  return info;
}

BenchReport run_bench(const std::string& dir, std::span<const Algorithm> algorithms,
                      const ExploreConfig& base) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".cdve")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  BenchReport report;
  for (const fs::path& path : files) {
    std::string text = read_text_file(path.string());
    ManifestInfo manifest = parse_manifest(text);
    Model model = parse_model(text);
    for (Algorithm alg : algorithms) {
      ExploreConfig cfg = base;
      cfg.algorithm = alg;
      cfg.progress_sink = nullptr;
      ExploreResult result = explore(model, cfg);

      BenchEntry entry;
      entry.model = path.stem().string();
      entry.has_accepting_cycle = manifest.expect == Outcome::cycle_found;
      entry.algorithm = alg;
      entry.verdict = result.verdict;
      entry.stats = result.stats;
      if (manifest.expect && *manifest.expect != result.verdict.outcome)
        report.mismatches.push_back(entry.model + " (" + algorithm_name(alg) + "): expected " +
                                    (*manifest.expect == Outcome::cycle_found
                                         ? "cycle-found"
                                         : "no-accepting-cycle") +
                                    ", got " + verdict_text(result.verdict));
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

namespace {

struct Agg {
  double map_total = 0, owcty_total = 0, ndfs_total = 0;
  bool any = false;
};

void accumulate(Agg& agg, const BenchEntry& e) {
  agg.any = true;
  switch (e.algorithm) {
    case Algorithm::map: agg.map_total += e.stats.total_ms; break;
    case Algorithm::owcty: agg.owcty_total += e.stats.total_ms; break;
    case Algorithm::ndfs: agg.ndfs_total += e.stats.total_ms; break;
  }
}

std::string speedup(double base, double subject) {
  if (subject <= 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fx", base / subject);
  return buf;
}

}  // namespace

std::string render_bench_table(const BenchReport& report) {
  std::ostringstream out;
  auto line = [&](std::initializer_list<std::pair<int, std::string>> cells) {
    for (auto& [width, text] : cells) {
      int pad = width - static_cast<int>(text.size());
      if (width < 0) {  // left aligned
        out << text;
        for (int i = 0; i < -width - static_cast<int>(text.size()); ++i) out << ' ';
      } else {
        for (int i = 0; i < pad; ++i) out << ' ';
        out << text;
      }
      out << "  ";
    }
    out << '\n';
  };

  line({{-20, "model"}, {3, "cyc"}, {10, "map:csr"}, {10, "map:krn"}, {10, "map:tot"},
        {8, "map:it"}, {10, "owcty:tot"}, {8, "owcty:it"}, {10, "ndfs:tot"}});

  // model-major: collect per model
  std::vector<std::string> order;
  for (const BenchEntry& e : report.entries)
    if (order.empty() || order.back() != e.model) order.push_back(e.model);

  Agg acc, nacc, both;
  for (const std::string& name : order) {
    const BenchEntry* map_e = nullptr;
    const BenchEntry* owcty_e = nullptr;
    const BenchEntry* ndfs_e = nullptr;
    bool cyc = false;
    for (const BenchEntry& e : report.entries) {
      if (e.model != name) continue;
      cyc = e.has_accepting_cycle;
      if (e.algorithm == Algorithm::map) map_e = &e;
      if (e.algorithm == Algorithm::owcty) owcty_e = &e;
      if (e.algorithm == Algorithm::ndfs) ndfs_e = &e;
      accumulate(both, e);
      accumulate(cyc ? acc : nacc, e);
    }
    line({{-20, name},
          {3, cyc ? "Y" : "N"},
          {10, map_e ? fmt_ms(map_e->stats.csr_ms) : "-"},
          {10, map_e ? fmt_ms(map_e->stats.kernel_ms) : "-"},
          {10, map_e ? fmt_ms(map_e->stats.total_ms) : "-"},
          {8, map_e ? std::to_string(map_e->stats.verdict_iterations) : "-"},
          {10, owcty_e ? fmt_ms(owcty_e->stats.total_ms) : "-"},
          {8, owcty_e ? std::to_string(owcty_e->stats.verdict_iterations) : "-"},
          {10, ndfs_e ? fmt_ms(ndfs_e->stats.total_ms) : "-"}});
  }

  if (!report.entries.empty()) {
    out << '\n';
    line({{-20, "aggregate"}, {3, "cyc"}, {12, "map:tot"}, {12, "owcty:tot"},
          {10, "owcty/map"}, {12, "ndfs:tot"}, {10, "ndfs/map"}});
    auto agg_row = [&](const char* label, const char* cyc, const Agg& a) {
      if (!a.any) return;
      line({{-20, label},
            {3, cyc},
            {12, fmt_ms(a.map_total)},
            {12, fmt_ms(a.owcty_total)},
            {10, speedup(a.owcty_total, a.map_total)},
            {12, fmt_ms(a.ndfs_total)},
            {10, speedup(a.ndfs_total, a.map_total)}});
    };
    agg_row("non-accepting", "N", nacc);
    agg_row("accepting", "Y", acc);
    agg_row("both", "-", both);
  }
  return out.str();
}

std::string render_bench_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "model,algorithm,verdict,witness,states,transitions,rounds,iterations,"
         "kernel_calls,csr_ms,kernel_ms,total_ms\n";
  for (const BenchEntry& e : report.entries) {
    out << e.model << ',' << algorithm_name(e.algorithm) << ',' << verdict_text(e.verdict) << ',';
    if (e.verdict.witness) out << *e.verdict.witness;
    out << ',' << e.stats.verdict_states << ',' << e.stats.verdict_transitions << ','
        << e.stats.detection_rounds << ',' << e.stats.verdict_iterations << ','
        << e.stats.verdict_kernel_calls << ',' << fmt_ms(e.stats.csr_ms) << ','
        << fmt_ms(e.stats.kernel_ms) << ',' << fmt_ms(e.stats.total_ms) << '\n';
  }
  return out.str();
}

}  // namespace cycheck
