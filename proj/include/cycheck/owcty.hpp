#pragma once

#include <cstdint>
#include <utility>

#include "cycheck/bitset.hpp"
#include "cycheck/graph.hpp"
#include "cycheck/types.hpp"

namespace cycheck {

struct OwctyStats {
  std::uint64_t outer_iterations = 0;
  double reach_ms = 0.0;
  double elim_ms = 0.0;
  std::uint64_t final_size = 0;
};

/// Vertices of S properly reachable (path length >= 1, intermediate vertices
/// in S) from an accepting vertex of S. Forward orientation expected.
Bitset owcty_reach(const CsrSnapshot& snap, const Bitset& set, const Bitset& accepting);

/// Repeatedly removes vertices whose in-degree counted within the set is
/// zero. Removal order cannot affect the result.
Bitset owcty_elim(const CsrSnapshot& snap, const Bitset& set);

/// One-Way-Catch-Them-Young: alternates reach and elim from the full vertex
/// set until stable. The survivor set is nonempty iff an accepting cycle
/// exists; the witness is the minimum accepting id in it.
std::pair<Verdict, OwctyStats> run_owcty(const CsrSnapshot& snap, const Bitset& accepting);

}  // namespace cycheck
