#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cycheck/bitset.hpp"
#include "cycheck/errors.hpp"
#include "cycheck/types.hpp"

namespace cycheck {

/// Immutable compressed-sparse-row view of a logged edge prefix. Row v lists
/// the vertices v points to under the snapshot's own relation: in forward
/// orientation row v holds the targets of logged edges v->t, in transposed
/// orientation row v holds the sources of logged edges s->v (i.e. the
/// snapshot relation is the reversed log). Columns are sorted ascending and
/// deduplicated.
struct CsrSnapshot {
  Orientation orientation = Orientation::forward;
  VertexId n = 0;
  std::uint64_t m = 0;
  std::vector<std::uint64_t> row_offsets;  // n + 1 entries, row_offsets[n] == m
  std::vector<VertexId> col_indices;       // m entries
  Bitset accepting;                        // frozen at snapshot time, n bits

  std::span<const VertexId> row(VertexId v) const {
    return {col_indices.data() + row_offsets[v],
            col_indices.data() + row_offsets[v + 1]};
  }

  /// Edge set of the snapshot relation, (row, col) pairs in row-major order.
  std::vector<std::pair<VertexId, VertexId>> edge_list() const;
};

/// Append-only product-graph store: dense vertex ids with accepting flags
/// plus an edge log. One writer thread appends; any number of readers may
/// build snapshots concurrently and observe a consistent prefix (the counts
/// are published with release/acquire ordering and chunk storage is never
/// reallocated).
class EdgeLog {
 public:
  struct Limits {
    VertexId max_vertices = 1u << 24;
    std::uint64_t max_edges = 1ull << 28;
  };

  explicit EdgeLog(Limits limits = Limits{});

  /// Writer side. Returns the next dense id, starting at 0.
  VertexId add_vertex(bool accepting);
  void append_edge(VertexId src, VertexId dst);

  VertexId vertex_count() const { return vertex_count_.load(std::memory_order_acquire); }
  std::uint64_t edge_count() const { return edge_count_.load(std::memory_order_acquire); }
  bool is_accepting(VertexId v) const {
    return (accepting_[v >> 6].load(std::memory_order_relaxed) >> (v & 63)) & 1u;
  }

  /// Valid for i below a previously observed edge_count().
  std::pair<VertexId, VertexId> edge(std::uint64_t i) const {
    const Edge& e = chunks_[i >> kChunkBits][i & (kChunkSize - 1)];
    return {e.src, e.dst};
  }

  /// Accepting flags of vertices [0, n) as a Bitset.
  Bitset accepting_prefix(VertexId n) const;

  const Limits& limits() const { return limits_; }

 private:
  struct Edge {
    VertexId src, dst;
  };
  static constexpr std::uint64_t kChunkBits = 16;
  static constexpr std::uint64_t kChunkSize = std::uint64_t{1} << kChunkBits;

  Limits limits_;
  std::vector<std::unique_ptr<Edge[]>> chunks_;           // fixed-size directory
  std::vector<std::atomic<std::uint64_t>> accepting_;     // fixed-size word array
  std::atomic<VertexId> vertex_count_{0};
  std::atomic<std::uint64_t> edge_count_{0};
};

/// Builds a snapshot of the first m logged edges over the first n vertices.
/// Pure function of that prefix; parallel duplicate edges are removed and
/// rows are sorted. Requires m <= edge_count() and n covering all endpoints
/// of the prefix.
CsrSnapshot build_snapshot(const EdgeLog& log, Orientation orientation,
                           std::uint64_t m, VertexId n);

/// Snapshot of everything currently published (edge count captured first).
CsrSnapshot build_snapshot(const EdgeLog& log, Orientation orientation);

/// Result of restricting a snapshot to its cyclic accepting SCCs:
/// kept[new_id] = original id, ascending (renumbering preserves order).
struct SccRestriction {
  CsrSnapshot snapshot;
  std::vector<VertexId> kept;
};

/// Keeps exactly the vertices of SCCs that are cyclic (size >= 2, or a
/// single vertex with a self-loop) and contain at least one accepting
/// vertex; drops every other vertex and all edges touching them. Any
/// accepting cycle of the input survives intact.
SccRestriction restrict_to_accepting_sccs(const CsrSnapshot& snap);

/// State-key interner backing on-the-fly product construction. Not thread
/// safe; only the generation coordinator interns.
class VertexInterner {
 public:
  explicit VertexInterner(EdgeLog& log) : log_(&log) {}

  /// Returns (id, was_new). Re-interning an existing key returns the old id
  /// and leaves its accepting flag untouched.
  std::pair<VertexId, bool> intern(std::string_view key, bool accepting);

  const std::string& key_of(VertexId id) const { return keys_[id]; }
  VertexId size() const { return static_cast<VertexId>(keys_.size()); }

 private:
  EdgeLog* log_;
  std::deque<std::string> keys_;  // stable storage; index_ views point here
  std::unordered_map<std::string_view, VertexId> index_;
};

/// Explicit-graph text format:
///   graph <n>
///   accepting <id> <id> ...
///   edge <src> <dst>
/// '#' starts a comment; ids are 0-based decimal and must be < n.
struct ExplicitGraph {
  VertexId n = 0;
  std::vector<VertexId> accepting;
  std::vector<std::pair<VertexId, VertexId>> edges;
};

ExplicitGraph parse_explicit_graph(std::istream& in);
ExplicitGraph load_explicit_graph(const std::string& path);

/// Replays an explicit graph into a log (vertex i gets id i).
void fill_log(const ExplicitGraph& g, EdgeLog& log);

}  // namespace cycheck
