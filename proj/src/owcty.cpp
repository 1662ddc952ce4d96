#include "cycheck/owcty.hpp"

#include <chrono>
#include <vector>

namespace cycheck {

namespace {
double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

Bitset owcty_reach(const CsrSnapshot& snap, const Bitset& set, const Bitset& accepting) {
  Bitset reached(snap.n);
  std::vector<VertexId> frontier, next;
  set.for_each_set([&](std::size_t v) {
    if (accepting.test(v)) frontier.push_back(static_cast<VertexId>(v));
  });
  while (!frontier.empty()) {
    next.clear();
    for (VertexId u : frontier) {
      for (VertexId c : snap.row(u)) {
        if (set.test(c) && !reached.test(c)) {
          reached.set(c);
          next.push_back(c);
        }
      }
    }
    frontier.swap(next);
  }
  return reached;
}

Bitset owcty_elim(const CsrSnapshot& snap, const Bitset& set) {
  std::vector<std::uint32_t> indeg(snap.n, 0);
  set.for_each_set([&](std::size_t u) {
    for (VertexId c : snap.row(static_cast<VertexId>(u)))
      if (set.test(c)) ++indeg[c];
  });

  Bitset result = set;
  std::vector<VertexId> queue;
  set.for_each_set([&](std::size_t v) {
    if (indeg[v] == 0) queue.push_back(static_cast<VertexId>(v));
  });
  for (std::size_t q = 0; q < queue.size(); ++q) {
    VertexId v = queue[q];
    result.reset(v);
    for (VertexId c : snap.row(v))
      if (result.test(c) && --indeg[c] == 0) queue.push_back(c);
  }
  return result;
}

std::pair<Verdict, OwctyStats> run_owcty(const CsrSnapshot& snap, const Bitset& accepting) {
  if (accepting.size() != snap.n)
    throw ContractError("run_owcty: accepting set size mismatch");

  OwctyStats stats;
  if (snap.n == 0) return {Verdict::no_cycle(), stats};

  Bitset approx = Bitset::all_set(snap.n);
  for (;;) {
    Bitset before = approx;
    auto t0 = std::chrono::steady_clock::now();
    approx = owcty_reach(snap, approx, accepting);
    stats.reach_ms += ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    approx = owcty_elim(snap, approx);
    stats.elim_ms += ms_since(t0);
    ++stats.outer_iterations;
    if (approx.none() || approx == before) break;
  }

  stats.final_size = approx.count();
  if (approx.none()) return {Verdict::no_cycle(), stats};

  VertexId witness = 0;
  for (std::size_t v = approx.first_set(); v < approx.size(); ++v) {
    if (approx.test(v) && accepting.test(v)) {
      witness = static_cast<VertexId>(v);
      break;
    }
  }
  return {Verdict::cycle(witness), stats};
}

}  // namespace cycheck
