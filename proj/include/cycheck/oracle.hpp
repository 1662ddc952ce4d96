#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cycheck/bitset.hpp"
#include "cycheck/types.hpp"

namespace cycheck {

/// Desk-scale ground-truth deciders. Deliberately simple and sequential;
/// used by property tests and as the CLI's `scc`/`ndfs` algorithms.

inline constexpr std::uint64_t kDefaultOracleLimit = 100000;

struct OracleVerdict {
  Verdict verdict;
  std::vector<VertexId> cyclic_accepting;  // accepting vertices in cyclic SCCs, ascending
};

/// SCC characterization: an accepting cycle exists iff some accepting vertex
/// lies in a cyclic SCC (size >= 2, or a single vertex with a self-loop).
OracleVerdict scc_verdict(std::span<const std::pair<VertexId, VertexId>> edges, VertexId n,
                          const Bitset& accepting, std::uint64_t limit = kDefaultOracleLimit);

/// Nested depth-first search from init: cycle_found iff an accepting cycle
/// is reachable from init. Deterministic for a fixed edge order.
Verdict ndfs_verdict(std::span<const std::pair<VertexId, VertexId>> edges, VertexId n,
                     const Bitset& accepting, VertexId init,
                     std::uint64_t limit = kDefaultOracleLimit);

}  // namespace cycheck
