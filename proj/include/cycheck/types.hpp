#pragma once

#include <cstdint>
#include <optional>

namespace cycheck {

/// Dense vertex identity, assigned in discovery order starting at 0.
using VertexId = std::uint32_t;

/// Orientation of a CSR snapshot relative to the logged edges.
enum class Orientation { forward, transposed };

enum class Outcome { cycle_found, no_accepting_cycle };

/// Final answer of a detection engine. A witness is present exactly for
/// cycle_found.
struct Verdict {
  Outcome outcome = Outcome::no_accepting_cycle;
  std::optional<VertexId> witness;

  static Verdict cycle(VertexId w) { return Verdict{Outcome::cycle_found, w}; }
  static Verdict no_cycle() { return Verdict{Outcome::no_accepting_cycle, std::nullopt}; }

  bool cycle_found() const { return outcome == Outcome::cycle_found; }
  bool operator==(const Verdict&) const = default;
};

}  // namespace cycheck
