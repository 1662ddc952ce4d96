#include "cycheck/map_engine.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace cycheck {

MaxPropagation::MaxPropagation(const CsrSnapshot& snap) : n_(snap.n) {
  gather_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (VertexId u = 0; u < n_; ++u)
    for (VertexId c : snap.row(u)) ++gather_offsets_[c + 1];
  std::partial_sum(gather_offsets_.begin(), gather_offsets_.end(), gather_offsets_.begin());

  gather_sources_.resize(snap.m);
  std::vector<std::uint64_t> cursor(gather_offsets_.begin(), gather_offsets_.end() - 1);
  for (VertexId u = 0; u < n_; ++u)
    for (VertexId c : snap.row(u)) gather_sources_[cursor[c]++] = u;
}

StepResult MaxPropagation::step(const MapVector& x, const Bitset& accepting,
                                MapVector& out, WorkerPool& pool) const {
  if (x.size() != n_)
    throw ContractError("propagate_step: vector length " + std::to_string(x.size()) +
                        " != vertex count " + std::to_string(n_));
  if (accepting.size() != n_)
    throw ContractError("propagate_step: accepting set size mismatch");
  out.resize(n_);

  const int workers = pool.workers();
  const std::uint64_t total = gather_offsets_[n_];

  // Contiguous row ranges balanced by gather-edge count. The output is a
  // pure per-row function of x, so the partition cannot affect results.
  std::vector<VertexId> bounds(static_cast<std::size_t>(workers) + 1, n_);
  bounds[0] = 0;
  for (int w = 1; w < workers; ++w) {
    std::uint64_t target = total * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
    bounds[w] = static_cast<VertexId>(
        std::lower_bound(gather_offsets_.begin(), gather_offsets_.end(), target) -
        gather_offsets_.begin());
    bounds[w] = std::min(bounds[w], n_);
  }

  struct Partial {
    bool changed = false;
    VertexId witness = ~VertexId{0};
  };
  std::vector<Partial> partials(static_cast<std::size_t>(workers));

  const MapValue* xd = x.data();
  MapValue* od = out.data();
  pool.run([&](int w) {
    VertexId lo = bounds[w], hi = bounds[w + 1];
    Partial p;
    for (VertexId v = lo; v < hi; ++v) {
      std::uint32_t best = xd[v].code;
      for (std::uint64_t i = gather_offsets_[v]; i < gather_offsets_[v + 1]; ++i) {
        VertexId u = gather_sources_[i];
        std::uint32_t cand = xd[u].code;
        if (accepting.test(u) && u + 1 > cand) cand = u + 1;
        if (cand > best) best = cand;
      }
      od[v].code = best;
      if (best != xd[v].code) p.changed = true;
      if (best == v + 1 && accepting.test(v) && v < p.witness) p.witness = v;
    }
    partials[static_cast<std::size_t>(w)] = p;
  });

  StepResult r;
  VertexId witness = ~VertexId{0};
  for (const Partial& p : partials) {
    r.changed = r.changed || p.changed;
    witness = std::min(witness, p.witness);
  }
  if (witness != ~VertexId{0}) r.self_witness = witness;
  return r;
}

MapVector init_vector(const CsrSnapshot& snap) {
  return MapVector(snap.n, MapValue::nil());
}

std::pair<MapVector, bool> propagate_step(const CsrSnapshot& snap, const MapVector& x,
                                          const Bitset& accepting) {
  MaxPropagation kernel(snap);
  WorkerPool pool(1);
  MapVector out;
  StepResult r = kernel.step(x, accepting, out, pool);
  return {std::move(out), r.changed};
}

FixpointResult fixpoint(const MaxPropagation& kernel, const Bitset& accepting,
                        const MapOptions& options, WorkerPool& pool) {
  FixpointResult result;
  MapVector x(kernel.vertex_count(), MapValue::nil());
  MapVector next(kernel.vertex_count(), MapValue::nil());
  for (;;) {
    StepResult r = kernel.step(x, accepting, next, pool);
    ++result.steps;
    x.swap(next);
    if (r.self_witness && options.early_exit) {
      result.values = std::move(x);
      result.witness = r.self_witness;
      return result;
    }
    if (!r.changed) {
      result.values = std::move(x);
      result.witness = r.self_witness;
      return result;
    }
  }
}

FixpointResult fixpoint(const CsrSnapshot& snap, const Bitset& accepting,
                        const MapOptions& options) {
  MaxPropagation kernel(snap);
  WorkerPool pool(options.workers);
  return fixpoint(kernel, accepting, options, pool);
}

DemoteResult demote(const MapVector& values, const Bitset& accepting) {
  Bitset used(accepting.size());
  for (const MapValue& v : values)
    if (!v.is_nil() && v.vertex() < used.size()) used.set(v.vertex());

  DemoteResult out;
  out.remaining = accepting;
  accepting.for_each_set([&](std::size_t u) {
    if (used.test(u)) {
      out.demoted.push_back(static_cast<VertexId>(u));
      out.remaining.reset(u);
    }
  });
  return out;
}

std::pair<Verdict, MapStats> run_map(const CsrSnapshot& snap, const Bitset& accepting,
                                     const MapOptions& options) {
  if (accepting.size() != snap.n)
    throw ContractError("run_map: accepting set size mismatch");

  MaxPropagation kernel(snap);
  WorkerPool pool(options.workers);
  MapStats stats;
  Bitset front = accepting;
  while (front.any()) {
    FixpointResult fr = fixpoint(kernel, front, options, pool);
    ++stats.iterations;
    stats.kernel_calls += fr.steps;
    if (fr.witness) {
      stats.cycle_witness = fr.witness;
      return {Verdict::cycle(*fr.witness), stats};
    }
    DemoteResult dr = demote(fr.values, front);
    stats.demoted_total += dr.demoted.size();
    if (dr.demoted.empty()) return {Verdict::no_cycle(), stats};
    front = std::move(dr.remaining);
  }
  return {Verdict::no_cycle(), stats};
}

}  // namespace cycheck
