#include "cycheck/oracle.hpp"

#include <algorithm>
#include <string>

#include "cycheck/errors.hpp"

namespace cycheck {

namespace {

constexpr VertexId kNone = ~VertexId{0};

std::vector<std::vector<VertexId>> adjacency(
    std::span<const std::pair<VertexId, VertexId>> edges, VertexId n) {
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [s, d] : edges) {
    if (s >= n || d >= n) throw ContractError("oracle: edge endpoint out of range");
    adj[s].push_back(d);
  }
  return adj;
}

void check_limit(VertexId n, std::uint64_t limit) {
  if (n > limit)
    throw ResourceLimitError("oracle limit exceeded: " + std::to_string(n) + " > " +
                             std::to_string(limit));
}

}  // namespace

OracleVerdict scc_verdict(std::span<const std::pair<VertexId, VertexId>> edges, VertexId n,
                          const Bitset& accepting, std::uint64_t limit) {
  check_limit(n, limit);
  auto adj = adjacency(edges, n);

  std::vector<VertexId> index(n, kNone), lowlink(n, 0);
  std::vector<bool> on_stack(n, false), self_loop(n, false);
  std::vector<VertexId> stack;
  OracleVerdict out;
  out.verdict = Verdict::no_cycle();

  struct Frame {
    VertexId v;
    std::size_t next;
  };
  std::vector<Frame> frames;
  VertexId counter = 0;

  for (VertexId root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < adj[f.v].size()) {
        VertexId w = adj[f.v][f.next++];
        if (w == f.v) self_loop[f.v] = true;
        if (index[w] == kNone) {
          index[w] = lowlink[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        VertexId v = f.v;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
        if (lowlink[v] == index[v]) {
          std::vector<VertexId> comp;
          for (;;) {
            VertexId w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
            if (w == v) break;
          }
          bool cyclic = comp.size() >= 2 ||
                        (comp.size() == 1 && self_loop[comp[0]]);
          if (cyclic)
            for (VertexId w : comp)
              if (accepting.test(w)) out.cyclic_accepting.push_back(w);
        }
      }
    }
  }

  std::sort(out.cyclic_accepting.begin(), out.cyclic_accepting.end());
  if (!out.cyclic_accepting.empty())
    out.verdict = Verdict::cycle(out.cyclic_accepting.front());
  return out;
}

Verdict ndfs_verdict(std::span<const std::pair<VertexId, VertexId>> edges, VertexId n,
                     const Bitset& accepting, VertexId init, std::uint64_t limit) {
  check_limit(n, limit);
  if (init >= n) throw ContractError("ndfs: init vertex out of range");
  auto adj = adjacency(edges, n);

  std::vector<bool> blue(n, false), red(n, false);

  // Inner (red) search: is `seed` reachable from itself by a path of
  // length >= 1? The red marks persist across seeds (classic CVWY).
  auto red_search = [&](VertexId seed) -> bool {
    std::vector<VertexId> stack{seed};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (VertexId c : adj[u]) {
        if (c == seed) return true;
        if (!red[c]) {
          red[c] = true;
          stack.push_back(c);
        }
      }
    }
    return false;
  };

  // Outer (blue) DFS; red searches launch at accepting states in postorder.
  struct Frame {
    VertexId v;
    std::size_t next;
  };
  std::vector<Frame> frames{{init, 0}};
  blue[init] = true;
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.next < adj[f.v].size()) {
      VertexId w = adj[f.v][f.next++];
      if (!blue[w]) {
        blue[w] = true;
        frames.push_back({w, 0});
      }
    } else {
      VertexId v = f.v;
      frames.pop_back();
      if (accepting.test(v) && !red[v]) {
        if (red_search(v)) return Verdict::cycle(v);
        red[v] = true;
      }
    }
  }
  return Verdict::no_cycle();
}

}  // namespace cycheck
