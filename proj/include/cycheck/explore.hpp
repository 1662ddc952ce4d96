#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "cycheck/errors.hpp"
#include "cycheck/model.hpp"
#include "cycheck/types.hpp"

namespace cycheck {

enum class Algorithm { map, owcty, ndfs };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

struct ProgressRecord {
  std::uint64_t states = 0;
  std::uint64_t transitions = 0;
  std::uint64_t rounds = 0;
  std::uint64_t iterations = 0;
  std::uint64_t kernel_calls = 0;

  bool operator==(const ProgressRecord&) const = default;
};

struct ExploreConfig {
  Algorithm algorithm = Algorithm::map;
  /// Run a detection round each time this many edges have been logged.
  /// 0 disables intermediate rounds (final detection only).
  std::uint64_t detection_interval_edges = 50000;
  int generation_workers = 1;  // also the detection kernel worker count
  bool enable_relevance_pruning = true;
  bool enable_final_scc_restriction = true;
  std::uint64_t max_states = 10'000'000;
  std::uint64_t report_every_states = 100000;
  bool early_exit = true;
  Orientation map_orientation = Orientation::transposed;
  std::function<void(const ProgressRecord&)> progress_sink;  // optional
};

struct RunStats {
  std::uint64_t states_generated = 0;
  std::uint64_t transitions_generated = 0;
  std::uint64_t detection_rounds = 0;
  std::uint64_t map_iterations = 0;  // cumulative across rounds
  std::uint64_t kernel_calls = 0;    // cumulative across rounds

  // Deciding round only; run-invariant for fixed flags, unlike the totals
  // above which depend on where generation happened to stop.
  std::uint64_t verdict_iterations = 0;
  std::uint64_t verdict_kernel_calls = 0;
  std::uint64_t verdict_states = 0;
  std::uint64_t verdict_transitions = 0;
  std::optional<std::uint64_t> states_at_detection;  // set when a prefix round decided

  /// FNV-1a over interned state serializations in id order; two runs built
  /// the same reachable set in the same order iff these agree.
  std::uint64_t state_fingerprint = 0;

  double csr_ms = 0.0;
  double kernel_ms = 0.0;
  double total_ms = 0.0;
};

/// Immutable copy of the live counters for rendering.
ProgressRecord progress_snapshot(const RunStats& stats);

struct ExploreResult {
  Verdict verdict;
  RunStats stats;
};

/// Resource cap hit mid-run; carries whatever counters were reached.
class ExploreLimitError : public ResourceLimitError {
 public:
  ExploreLimitError(const std::string& message, RunStats partial)
      : ResourceLimitError(message), partial_(partial) {}
  const RunStats& partial_stats() const { return partial_; }

 private:
  RunStats partial_;
};

/// On-the-fly pipeline: level-synchronized BFS generation of the product
/// graph (deterministic for every worker count) with a concurrent detection
/// role that snapshots the edge log at fixed thresholds and runs the
/// configured algorithm. A cycle verdict from any round halts generation at
/// the next level boundary; otherwise a final authoritative round runs on
/// the full graph. The verdict is invariant across detection cadence,
/// worker count, pruning, and SCC restriction.
ExploreResult explore(const Model& model, const ExploreConfig& config = ExploreConfig{});

}  // namespace cycheck
