#include "cycheck/graph.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace cycheck {

std::vector<std::pair<VertexId, VertexId>> CsrSnapshot::edge_list() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(m);
  for (VertexId v = 0; v < n; ++v)
    for (VertexId c : row(v)) out.emplace_back(v, c);
  return out;
}

EdgeLog::EdgeLog(Limits limits)
    : limits_(limits),
      chunks_((limits.max_edges + kChunkSize - 1) / kChunkSize),
      accepting_((static_cast<std::size_t>(limits.max_vertices) + 63) / 64) {}

VertexId EdgeLog::add_vertex(bool accepting) {
  VertexId id = vertex_count_.load(std::memory_order_relaxed);
  if (id >= limits_.max_vertices)
    throw ResourceLimitError("vertex capacity exceeded (" +
                             std::to_string(limits_.max_vertices) + ")");
  if (accepting) {
    auto& word = accepting_[id >> 6];
    word.store(word.load(std::memory_order_relaxed) | (std::uint64_t{1} << (id & 63)),
               std::memory_order_relaxed);
  }
  vertex_count_.store(id + 1, std::memory_order_release);
  return id;
}

void EdgeLog::append_edge(VertexId src, VertexId dst) {
  VertexId n = vertex_count_.load(std::memory_order_relaxed);
  if (src >= n || dst >= n)
    throw ContractError("append_edge: endpoint not interned (" + std::to_string(src) +
                        " -> " + std::to_string(dst) + ", n=" + std::to_string(n) + ")");
  std::uint64_t e = edge_count_.load(std::memory_order_relaxed);
  if (e >= limits_.max_edges)
    throw ResourceLimitError("edge capacity exceeded (" +
                             std::to_string(limits_.max_edges) + ")");
  std::uint64_t chunk = e >> kChunkBits;
  if (!chunks_[chunk]) chunks_[chunk] = std::make_unique<Edge[]>(kChunkSize);
  chunks_[chunk][e & (kChunkSize - 1)] = Edge{src, dst};
  edge_count_.store(e + 1, std::memory_order_release);
}

Bitset EdgeLog::accepting_prefix(VertexId n) const {
  Bitset out(n);
  std::size_t words = out.words().size();
  for (std::size_t w = 0; w < words; ++w)
    out.words()[w] = accepting_[w].load(std::memory_order_relaxed);
  out.trim();
  return out;
}

CsrSnapshot build_snapshot(const EdgeLog& log, Orientation orientation,
                           std::uint64_t m, VertexId n) {
  if (m > log.edge_count()) throw ContractError("build_snapshot: prefix beyond log");

  CsrSnapshot snap;
  snap.orientation = orientation;
  snap.n = n;

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  const bool fwd = orientation == Orientation::forward;
  for (std::uint64_t i = 0; i < m; ++i) {
    auto [s, d] = log.edge(i);
    ++counts[(fwd ? s : d) + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  std::vector<VertexId> raw(m);
  std::vector<std::uint64_t> cursor(counts.begin(), counts.end() - 1);
  for (std::uint64_t i = 0; i < m; ++i) {
    auto [s, d] = log.edge(i);
    VertexId row = fwd ? s : d;
    raw[cursor[row]++] = fwd ? d : s;
  }

  snap.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  snap.col_indices.reserve(m);
  for (VertexId v = 0; v < n; ++v) {
    auto begin = raw.begin() + static_cast<std::ptrdiff_t>(counts[v]);
    auto end = raw.begin() + static_cast<std::ptrdiff_t>(counts[v + 1]);
    std::sort(begin, end);
    VertexId prev = 0;
    bool first = true;
    for (auto it = begin; it != end; ++it) {
      if (first || *it != prev) snap.col_indices.push_back(*it);
      prev = *it;
      first = false;
    }
    snap.row_offsets[v + 1] = snap.col_indices.size();
  }
  snap.m = snap.col_indices.size();
  snap.accepting = log.accepting_prefix(n);
  return snap;
}

CsrSnapshot build_snapshot(const EdgeLog& log, Orientation orientation) {
  std::uint64_t m = log.edge_count();     // acquire before n: endpoints of the
  VertexId n = log.vertex_count();        // m-prefix are always covered
  return build_snapshot(log, orientation, m, n);
}

namespace {

constexpr VertexId kUnvisited = ~VertexId{0};

/// Iterative Tarjan. Fills comp ids (dense, reverse topological) and flags
/// components that contain a cycle.
struct SccDecomposition {
  std::vector<VertexId> comp;
  std::vector<bool> comp_cyclic;
  VertexId comp_count = 0;
};

SccDecomposition tarjan_scc(const CsrSnapshot& snap) {
  const VertexId n = snap.n;
  SccDecomposition out;
  out.comp.assign(n, kUnvisited);

  std::vector<VertexId> index(n, kUnvisited), lowlink(n, 0);
  std::vector<bool> on_stack(n, false), self_loop(n, false);
  std::vector<VertexId> stack;
  std::vector<VertexId> comp_size_acc;

  struct Frame {
    VertexId v;
    std::uint64_t next;  // index into col_indices
  };
  std::vector<Frame> frames;
  VertexId next_index = 0;

  for (VertexId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.push_back({root, snap.row_offsets[root]});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < snap.row_offsets[f.v + 1]) {
        VertexId w = snap.col_indices[f.next++];
        if (w == f.v) self_loop[f.v] = true;
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, snap.row_offsets[w]});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        VertexId v = f.v;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
        if (lowlink[v] == index[v]) {
          VertexId comp_id = out.comp_count++;
          VertexId size = 0;
          bool cyclic = false;
          for (;;) {
            VertexId w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            out.comp[w] = comp_id;
            ++size;
            cyclic = cyclic || self_loop[w];
            if (w == v) break;
          }
          out.comp_cyclic.push_back(cyclic || size >= 2);
        }
      }
    }
  }
  return out;
}

}  // namespace

SccRestriction restrict_to_accepting_sccs(const CsrSnapshot& snap) {
  SccDecomposition scc = tarjan_scc(snap);

  std::vector<bool> comp_keep(scc.comp_count, false);
  for (VertexId v = 0; v < snap.n; ++v)
    if (snap.accepting.test(v) && scc.comp_cyclic[scc.comp[v]])
      comp_keep[scc.comp[v]] = true;

  SccRestriction out;
  std::vector<VertexId> new_id(snap.n, kUnvisited);
  for (VertexId v = 0; v < snap.n; ++v) {
    if (comp_keep[scc.comp[v]]) {
      new_id[v] = static_cast<VertexId>(out.kept.size());
      out.kept.push_back(v);
    }
  }

  CsrSnapshot& r = out.snapshot;
  r.orientation = snap.orientation;
  r.n = static_cast<VertexId>(out.kept.size());
  r.row_offsets.assign(static_cast<std::size_t>(r.n) + 1, 0);
  r.accepting = Bitset(r.n);
  for (VertexId nv = 0; nv < r.n; ++nv) {
    VertexId ov = out.kept[nv];
    if (snap.accepting.test(ov)) r.accepting.set(nv);
    for (VertexId c : snap.row(ov))
      if (new_id[c] != kUnvisited) r.col_indices.push_back(new_id[c]);
    r.row_offsets[nv + 1] = r.col_indices.size();
  }
  r.m = r.col_indices.size();
  return out;
}

std::pair<VertexId, bool> VertexInterner::intern(std::string_view key, bool accepting) {
  auto it = index_.find(key);
  if (it != index_.end()) return {it->second, false};
  VertexId id = log_->add_vertex(accepting);
  keys_.emplace_back(key);
  index_.emplace(std::string_view(keys_.back()), id);
  return {id, true};
}

namespace {

std::vector<std::string> tokenize_line(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

VertexId parse_vertex_id(const std::string& tok, VertexId n, int line_no) {
  std::uint64_t value = 0;
  for (char c : tok) {
    if (c < '0' || c > '9')
      throw ParseError(DiagCode::syntax_error, line_no, 1, "expected vertex id, got '" + tok + "'");
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > n) break;
  }
  if (value >= n)
    throw ParseError(DiagCode::range_error, line_no, 1,
                     "vertex id " + tok + " out of range [0, " + std::to_string(n) + ")");
  return static_cast<VertexId>(value);
}

}  // namespace

ExplicitGraph parse_explicit_graph(std::istream& in) {
  ExplicitGraph g;
  std::string line;
  int line_no = 0;
  int section = 0;  // 0 = expect graph, 1 = expect accepting, 2 = edges
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokenize_line(line);
    if (toks.empty()) continue;
    if (section == 0) {
      if (toks[0] != "graph" || toks.size() != 2)
        throw ParseError(DiagCode::syntax_error, line_no, 1, "expected 'graph <n>'");
      try {
        g.n = static_cast<VertexId>(std::stoul(toks[1]));
      } catch (const std::exception&) {
        throw ParseError(DiagCode::syntax_error, line_no, 1, "bad vertex count '" + toks[1] + "'");
      }
      section = 1;
    } else if (section == 1) {
      if (toks[0] != "accepting")
        throw ParseError(DiagCode::syntax_error, line_no, 1, "expected 'accepting ...'");
      for (std::size_t i = 1; i < toks.size(); ++i)
        g.accepting.push_back(parse_vertex_id(toks[i], g.n, line_no));
      section = 2;
    } else {
      if (toks[0] != "edge" || toks.size() != 3)
        throw ParseError(DiagCode::syntax_error, line_no, 1, "expected 'edge <src> <dst>'");
      VertexId s = parse_vertex_id(toks[1], g.n, line_no);
      VertexId d = parse_vertex_id(toks[2], g.n, line_no);
      g.edges.emplace_back(s, d);
    }
  }
  if (section == 0)
    throw ParseError(DiagCode::syntax_error, line_no, 1, "empty graph file");
  if (section == 1)
    throw ParseError(DiagCode::syntax_error, line_no, 1, "missing 'accepting' line");
  return g;
}

ExplicitGraph load_explicit_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError(DiagCode::syntax_error, 0, 0, "cannot open '" + path + "'");
  return parse_explicit_graph(in);
}

void fill_log(const ExplicitGraph& g, EdgeLog& log) {
  Bitset acc(g.n);
  for (VertexId a : g.accepting) acc.set(a);
  for (VertexId v = 0; v < g.n; ++v) log.add_vertex(acc.test(v));
  for (auto [s, d] : g.edges) log.append_edge(s, d);
}

}  // namespace cycheck
