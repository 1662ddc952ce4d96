#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cycheck/bitset.hpp"
#include "cycheck/graph.hpp"
#include "cycheck/parallel.hpp"
#include "cycheck/types.hpp"

namespace cycheck {

/// Value carried by the propagation vector: NIL or a vertex id, totally
/// ordered with NIL below every id. Encoded as id+1 so the natural integer
/// order on the code is the value order.
struct MapValue {
  std::uint32_t code = 0;

  static constexpr MapValue nil() { return MapValue{0}; }
  static constexpr MapValue of(VertexId v) { return MapValue{v + 1}; }

  bool is_nil() const { return code == 0; }
  VertexId vertex() const { return code - 1; }  // pre: !is_nil()

  auto operator<=>(const MapValue&) const = default;
};

using MapVector = std::vector<MapValue>;

struct MapOptions {
  int workers = 1;
  bool early_exit = true;  // allow stopping mid-fixpoint on a self-witness
};

struct StepResult {
  bool changed = false;
  /// Smallest accepting v with out[v] == v after this step, if any. A
  /// self-valued accepting vertex has propagated its own id around a real
  /// cycle, so it witnesses an accepting cycle even before the fixpoint.
  std::optional<VertexId> self_witness;
};

/// One propagation step as a data-parallel kernel. Construction builds the
/// gather index (the reverse of the snapshot relation) once so that each
/// step writes disjoint output ranges per worker; results are bitwise
/// identical for every worker count.
class MaxPropagation {
 public:
  explicit MaxPropagation(const CsrSnapshot& snap);

  VertexId vertex_count() const { return n_; }

  /// out[v] = max(x[v], max over snapshot edges u->v of max(x[u], u if
  /// accepting.test(u))). Reads only x, writes only out.
  StepResult step(const MapVector& x, const Bitset& accepting, MapVector& out,
                  WorkerPool& pool) const;

 private:
  VertexId n_ = 0;
  std::vector<std::uint64_t> gather_offsets_;  // n + 1
  std::vector<VertexId> gather_sources_;       // flow sources per target
};

/// All-NIL vector of snapshot size. Accepting vertices do not self-seed;
/// their ids enter the stream only by flowing across an edge.
MapVector init_vector(const CsrSnapshot& snap);

/// Single Jacobi step; convenience wrapper that builds the kernel per call.
std::pair<MapVector, bool> propagate_step(const CsrSnapshot& snap, const MapVector& x,
                                          const Bitset& accepting);

struct FixpointResult {
  MapVector values;
  std::uint64_t steps = 0;
  std::optional<VertexId> witness;
};

/// Repeats steps from the all-NIL vector until nothing changes (at most
/// max(n,1) steps). With early_exit a self-witness ends the run immediately;
/// without it the run converges and still reports a witness present at the
/// fixpoint. At the fixpoint, values[v] is the maximal accepting vertex with
/// a path of length >= 1 to v in the snapshot relation.
FixpointResult fixpoint(const CsrSnapshot& snap, const Bitset& accepting,
                        const MapOptions& options = MapOptions{});
FixpointResult fixpoint(const MaxPropagation& kernel, const Bitset& accepting,
                        const MapOptions& options, WorkerPool& pool);

struct DemoteResult {
  Bitset remaining;                // F'
  std::vector<VertexId> demoted;   // D, ascending
};

/// Removes from the accepting set every vertex that appears as somebody's
/// value: such a vertex has a proper accepting predecessor chain but is not
/// its own, so it cannot lie on an accepting cycle this iteration.
DemoteResult demote(const MapVector& values, const Bitset& accepting);

struct MapStats {
  std::uint64_t iterations = 0;
  std::uint64_t kernel_calls = 0;
  std::uint64_t demoted_total = 0;
  std::optional<VertexId> cycle_witness;
};

/// Full maximal-accepting-predecessor loop: fixpoint, then either a witness
/// or a demotion round, until the accepting set empties. Deterministic for
/// fixed inputs and options (including across worker counts).
std::pair<Verdict, MapStats> run_map(const CsrSnapshot& snap, const Bitset& accepting,
                                     const MapOptions& options = MapOptions{});

}  // namespace cycheck
