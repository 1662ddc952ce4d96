#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cycheck/explore.hpp"
#include "cycheck/types.hpp"

namespace cycheck {

/// Corpus models carry a machine-readable header of `// manifest:` lines
/// holding space-separated key=value pairs, e.g.
///   // manifest: expect=cycle states=2134
///   // manifest: processes=3 transitions=17 init-successors=2
/// `expect` is cycle|no-cycle; `states` is the reachable product state count
/// under the default configuration with early exit disabled.
struct ManifestInfo {
  std::optional<Outcome> expect;
  std::optional<std::uint64_t> states;
  std::optional<std::uint64_t> processes;
  std::optional<std::uint64_t> transitions;
  std::optional<std::uint64_t> init_successors;
};

ManifestInfo parse_manifest(std::string_view model_text);

struct BenchEntry {
  std::string model;
  bool has_accepting_cycle = false;  // from the manifest
  Algorithm algorithm = Algorithm::map;
  Verdict verdict;
  RunStats stats;
};

struct BenchReport {
  std::vector<BenchEntry> entries;       // model-major, algorithm-minor
  std::vector<std::string> mismatches;   // "model (algorithm): expected X, got Y"
};

/// Runs every `.cdve` file in dir (sorted by name) under each algorithm and
/// checks verdicts against the manifests.
BenchReport run_bench(const std::string& dir, std::span<const Algorithm> algorithms,
                      const ExploreConfig& base = ExploreConfig{});

/// Aligned text table with per-model rows and aggregate rows (non-accepting,
/// accepting, both) including speedups of map over the other algorithms.
std::string render_bench_table(const BenchReport& report);

/// One row per (model, algorithm); times share the table's formatting.
std::string render_bench_csv(const BenchReport& report);

std::string read_text_file(const std::string& path);

}  // namespace cycheck
