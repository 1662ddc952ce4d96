#include "cycheck/explore.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "cycheck/graph.hpp"
#include "cycheck/map_engine.hpp"
#include "cycheck/oracle.hpp"
#include "cycheck/owcty.hpp"
#include "cycheck/parallel.hpp"

namespace cycheck {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::map: return "map";
    case Algorithm::owcty: return "owcty";
    case Algorithm::ndfs: return "ndfs";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  if (name == "map") return Algorithm::map;
  if (name == "owcty") return Algorithm::owcty;
  if (name == "ndfs") return Algorithm::ndfs;
  return std::nullopt;
}

ProgressRecord progress_snapshot(const RunStats& stats) {
  return ProgressRecord{stats.states_generated, stats.transitions_generated,
                        stats.detection_rounds, stats.map_iterations, stats.kernel_calls};
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Live counters shared by the generation and detection roles.
struct Counters {
  std::atomic<std::uint64_t> states{0};
  std::atomic<std::uint64_t> transitions{0};
  std::atomic<std::uint64_t> rounds{0};
  std::atomic<std::uint64_t> iterations{0};
  std::atomic<std::uint64_t> kernel_calls{0};
  std::atomic<std::uint64_t> csr_ns{0};
  std::atomic<std::uint64_t> kernel_ns{0};

  ProgressRecord record() const {
    return ProgressRecord{states.load(), transitions.load(), rounds.load(), iterations.load(),
                          kernel_calls.load()};
  }
};

struct RoundOutcome {
  Verdict verdict = Verdict::no_cycle();
  std::uint64_t iterations = 0;
  std::uint64_t kernel_calls = 0;
};

/// One detection round over the edge prefix [0, m) with n vertices.
RoundOutcome run_round(const EdgeLog& log, std::uint64_t m, VertexId n,
                       const ExploreConfig& cfg, bool final_round, Counters& counters) {
  RoundOutcome out;
  Orientation orient =
      cfg.algorithm == Algorithm::map ? cfg.map_orientation : Orientation::forward;

  auto t0 = Clock::now();
  CsrSnapshot snap = build_snapshot(log, orient, m, n);
  counters.csr_ns += static_cast<std::uint64_t>(ms_since(t0) * 1e6);

  const std::vector<VertexId>* back_map = nullptr;
  SccRestriction restricted;
  if (final_round && cfg.enable_final_scc_restriction && cfg.algorithm != Algorithm::ndfs) {
    t0 = Clock::now();
    restricted = restrict_to_accepting_sccs(snap);
    counters.csr_ns += static_cast<std::uint64_t>(ms_since(t0) * 1e6);
    snap = std::move(restricted.snapshot);
    back_map = &restricted.kept;
  }

  t0 = Clock::now();
  switch (cfg.algorithm) {
    case Algorithm::map: {
      MapOptions opts;
      opts.workers = cfg.generation_workers;
      opts.early_exit = cfg.early_exit;
      auto [verdict, stats] = run_map(snap, snap.accepting, opts);
      out.verdict = verdict;
      out.iterations = stats.iterations;
      out.kernel_calls = stats.kernel_calls;
      break;
    }
    case Algorithm::owcty: {
      auto [verdict, stats] = run_owcty(snap, snap.accepting);
      out.verdict = verdict;
      out.iterations = stats.outer_iterations;
      break;
    }
    case Algorithm::ndfs: {
      out.verdict = snap.n == 0 ? Verdict::no_cycle()
                                : ndfs_verdict(snap.edge_list(), snap.n, snap.accepting, 0);
      break;
    }
  }
  counters.kernel_ns += static_cast<std::uint64_t>(ms_since(t0) * 1e6);

  if (out.verdict.cycle_found() && back_map)
    out.verdict.witness = (*back_map)[*out.verdict.witness];

  counters.rounds += 1;
  counters.iterations += out.iterations;
  counters.kernel_calls += out.kernel_calls;
  return out;
}

/// Detection thread state. The generator records, under `mu`, the vertex
/// count at the moment edge k*interval was appended; the detector consumes
/// thresholds strictly in order, so the deciding round is run-invariant.
struct DetectorChannel {
  std::mutex mu;
  std::condition_variable cv;
  std::vector<VertexId> threshold_states;  // k-th entry: n when edge (k+1)*interval landed
  bool generation_done = false;

  std::atomic<bool> decided{false};
  RoundOutcome outcome;            // valid once decided
  std::uint64_t deciding_round = 0;
  std::exception_ptr failure;
};

}  // namespace

ExploreResult explore(const Model& model, const ExploreConfig& cfg) {
  if (cfg.generation_workers < 1)
    throw ContractError("explore: generation_workers must be >= 1");
  if (cfg.max_states == 0 || cfg.report_every_states == 0)
    throw ContractError("explore: counts must be positive");

  const auto t_start = Clock::now();
  Counters counters;
  auto make_stats = [&]() {
    RunStats st;
    st.states_generated = counters.states.load();
    st.transitions_generated = counters.transitions.load();
    st.detection_rounds = counters.rounds.load();
    st.map_iterations = counters.iterations.load();
    st.kernel_calls = counters.kernel_calls.load();
    st.csr_ms = static_cast<double>(counters.csr_ns.load()) / 1e6;
    st.kernel_ms = static_cast<double>(counters.kernel_ns.load()) / 1e6;
    st.total_ms = ms_since(t_start);
    return st;
  };

  const bool pruning = cfg.enable_relevance_pruning && model.has_property();
  const Bitset relevance = pruning ? property_relevance(model) : Bitset();

  std::string init_bytes = initial_state(model);
  if (pruning && !relevance.test(property_location_of(model, init_bytes))) {
    // The property automaton cannot accept anything from its initial
    // location; the product is trivially empty of accepting cycles.
    return ExploreResult{Verdict::no_cycle(), make_stats()};
  }

  EdgeLog log({static_cast<VertexId>(std::min<std::uint64_t>(cfg.max_states, (1u << 31))),
               std::max<std::uint64_t>(cfg.max_states * 64, 1 << 20)});
  VertexInterner interner(log);

  const std::uint64_t interval = cfg.detection_interval_edges;
  const bool detection_enabled = cfg.early_exit && interval > 0;

  DetectorChannel chan;
  std::thread detector;
  if (detection_enabled) {
    detector = std::thread([&] {
      try {
        for (std::uint64_t k = 1; !chan.decided.load(); ++k) {
          VertexId n_k = 0;
          {
            std::unique_lock lock(chan.mu);
            chan.cv.wait(lock, [&] {
              return chan.threshold_states.size() >= k || chan.generation_done;
            });
            if (chan.threshold_states.size() < k) return;  // no more prefixes
            n_k = chan.threshold_states[k - 1];
          }
          RoundOutcome r = run_round(log, k * interval, n_k, cfg, /*final=*/false, counters);
          if (r.verdict.cycle_found()) {
            chan.outcome = r;
            chan.deciding_round = k;
            chan.decided.store(true);
            return;
          }
        }
      } catch (...) {
        std::lock_guard lock(chan.mu);
        chan.failure = std::current_exception();
        chan.decided.store(true);
      }
    });
  }
  auto stop_detector = [&] {
    if (!detector.joinable()) return;
    {
      std::lock_guard lock(chan.mu);
      chan.generation_done = true;
    }
    chan.cv.notify_all();
    detector.join();
  };

  try {
    auto [init_id, fresh] = interner.intern(init_bytes, is_accepting(model, init_bytes));
    counters.states.store(interner.size());

    WorkerPool pool(cfg.generation_workers);
    const int workers = pool.workers();
    struct PendingEdge {
      VertexId src;
      Successor succ;
    };
    std::vector<std::vector<PendingEdge>> chunk_out(static_cast<std::size_t>(workers));
    std::vector<VertexId> level{init_id}, next_level;
    std::uint64_t next_threshold = interval > 0 ? interval : ~std::uint64_t{0};
    std::uint64_t next_report = cfg.report_every_states;

    while (!level.empty() && !chan.decided.load()) {
      const std::size_t count = level.size();
      pool.run([&](int w) {
        auto& out = chunk_out[static_cast<std::size_t>(w)];
        out.clear();
        std::size_t lo = count * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
        std::size_t hi =
            count * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
        for (std::size_t i = lo; i < hi; ++i) {
          VertexId src = level[i];
          for (Successor& s : enumerate_successors(model, interner.key_of(src))) {
            if (pruning && !relevance.test(s.property_location)) continue;
            out.push_back(PendingEdge{src, std::move(s)});
          }
        }
      });

      // Deterministic merge: chunk order, then generation order within each
      // chunk; ids and the edge log are identical for every worker count.
      next_level.clear();
      for (auto& chunk : chunk_out) {
        for (PendingEdge& pe : chunk) {
          auto [id, was_new] = interner.intern(pe.succ.bytes, pe.succ.accepting);
          log.append_edge(pe.src, id);
          std::uint64_t edges = counters.transitions.fetch_add(1) + 1;
          if (was_new) next_level.push_back(id);
          if (edges == next_threshold && detection_enabled) {
            {
              std::lock_guard lock(chan.mu);
              chan.threshold_states.push_back(interner.size());
            }
            chan.cv.notify_all();
            next_threshold += interval;
          }
        }
        chunk.clear();
      }
      counters.states.store(interner.size());
      if (cfg.progress_sink && counters.states.load() >= next_report) {
        cfg.progress_sink(counters.record());
        next_report += cfg.report_every_states;
      }
      level.swap(next_level);
    }

    stop_detector();
    if (chan.failure) std::rethrow_exception(chan.failure);

    RoundOutcome deciding;
    std::uint64_t verdict_states = 0, verdict_transitions = 0;
    bool from_prefix = false;
    if (chan.decided.load()) {
      deciding = chan.outcome;
      verdict_states = chan.threshold_states[chan.deciding_round - 1];
      verdict_transitions = chan.deciding_round * interval;
      from_prefix = true;
    } else {
      deciding = run_round(log, log.edge_count(), log.vertex_count(), cfg, /*final=*/true,
                           counters);
      verdict_states = interner.size();
      verdict_transitions = log.edge_count();
    }

    RunStats stats = make_stats();
    stats.verdict_iterations = deciding.iterations;
    stats.verdict_kernel_calls = deciding.kernel_calls;
    stats.verdict_states = verdict_states;
    stats.verdict_transitions = verdict_transitions;
    if (from_prefix) stats.states_at_detection = verdict_states;
    return ExploreResult{deciding.verdict, stats};
  } catch (const ResourceLimitError& e) {
    stop_detector();
    throw ExploreLimitError(e.what(), make_stats());
  } catch (...) {
    stop_detector();
    throw;
  }
}

}  // namespace cycheck
