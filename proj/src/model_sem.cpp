#include <cstdint>
#include <string>
#include <vector>

#include "cycheck/graph.hpp"
#include "cycheck/model.hpp"

namespace cycheck {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put_i32(std::string& out, std::int32_t v) {
  auto u = static_cast<std::uint32_t>(v);
  out.push_back(static_cast<char>(u & 0xFF));
  out.push_back(static_cast<char>((u >> 8) & 0xFF));
  out.push_back(static_cast<char>((u >> 16) & 0xFF));
  out.push_back(static_cast<char>((u >> 24) & 0xFF));
}

void put_var(std::string& out, VarType type, std::int32_t v) {
  if (type == VarType::byte_width) {
    out.push_back(static_cast<char>(static_cast<std::uint8_t>(v)));
  } else {
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
  }
}

struct ByteReader {
  std::string_view bytes;
  std::size_t pos = 0;

  std::uint8_t u8() {
    check(1);
    return static_cast<std::uint8_t>(bytes[pos++]);
  }
  std::uint16_t u16() {
    check(2);
    std::uint16_t v = static_cast<std::uint8_t>(bytes[pos]) |
                      (static_cast<std::uint16_t>(static_cast<std::uint8_t>(bytes[pos + 1])) << 8);
    pos += 2;
    return v;
  }
  std::int32_t i32() {
    check(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
      v = (v << 8) | static_cast<std::uint8_t>(bytes[pos + static_cast<std::size_t>(i)]);
    pos += 4;
    return static_cast<std::int32_t>(v);
  }
  std::int32_t var(VarType type) {
    if (type == VarType::byte_width) return u8();
    return static_cast<std::int16_t>(u16());
  }
  void check(std::size_t k) const {
    if (pos + k > bytes.size()) throw ContractError("decode_state: truncated state bytes");
  }
};

std::int32_t trunc32(std::int64_t v) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(static_cast<std::uint64_t>(v)));
}

const char* type_name(VarType t) { return t == VarType::byte_width ? "byte" : "int"; }

}  // namespace

std::string encode_state(const Model& m, const ExecState& s) {
  std::string out;
  for (std::size_t g = 0; g < m.globals.size(); ++g)
    put_var(out, m.globals[g].type, s.globals[g]);
  for (std::size_t k = 0; k < m.system_procs.size(); ++k) {
    const Process& p = m.processes[m.system_procs[k]];
    put_u16(out, s.locations[k]);
    for (std::size_t v = 0; v < p.locals.size(); ++v)
      put_var(out, p.locals[v].type, s.locals[k][v]);
  }
  for (std::size_t b = 0; b < m.buffered_channel_count; ++b) {
    out.push_back(static_cast<char>(static_cast<std::uint8_t>(s.buffers[b].size())));
    for (std::int32_t v : s.buffers[b]) put_i32(out, v);
  }
  if (m.has_property()) put_u16(out, s.property_location);
  return out;
}

ExecState decode_state(const Model& m, std::string_view bytes) {
  ExecState s;
  ByteReader r{bytes};
  s.globals.resize(m.globals.size());
  for (std::size_t g = 0; g < m.globals.size(); ++g) s.globals[g] = r.var(m.globals[g].type);
  s.locations.resize(m.system_procs.size());
  s.locals.resize(m.system_procs.size());
  for (std::size_t k = 0; k < m.system_procs.size(); ++k) {
    const Process& p = m.processes[m.system_procs[k]];
    s.locations[k] = r.u16();
    s.locals[k].resize(p.locals.size());
    for (std::size_t v = 0; v < p.locals.size(); ++v) s.locals[k][v] = r.var(p.locals[v].type);
  }
  s.buffers.resize(m.buffered_channel_count);
  for (std::size_t b = 0; b < m.buffered_channel_count; ++b) {
    std::uint8_t len = r.u8();
    s.buffers[b].resize(len);
    for (std::uint8_t i = 0; i < len; ++i) s.buffers[b][i] = r.i32();
  }
  if (m.has_property()) s.property_location = r.u16();
  if (r.pos != bytes.size()) throw ContractError("decode_state: trailing bytes");
  return s;
}

std::string initial_state(const Model& m) {
  ExecState s;
  s.globals.reserve(m.globals.size());
  for (const VarDecl& g : m.globals) s.globals.push_back(g.init);
  for (std::uint16_t pi : m.system_procs) {
    const Process& p = m.processes[pi];
    s.locations.push_back(p.init_location);
    std::vector<std::int32_t> locals;
    for (const VarDecl& v : p.locals) locals.push_back(v.init);
    s.locals.push_back(std::move(locals));
  }
  s.buffers.resize(m.buffered_channel_count);
  if (m.has_property()) s.property_location = m.property().init_location;
  return encode_state(m, s);
}

namespace {

/// Maps a process index to its slot in ExecState arrays (property has none).
std::uint16_t system_slot(const Model& m, std::uint16_t proc) {
  for (std::uint16_t k = 0; k < m.system_procs.size(); ++k)
    if (m.system_procs[k] == proc) return k;
  throw ContractError("system_slot: property process has no state slot");
}

struct EvalEnv {
  const Model& m;
  const ExecState& s;
  std::uint16_t proc;  // process whose locals are in scope
  const std::string& pre_bytes;
};

std::int32_t read_var(const EvalEnv& env, const VarRef& ref) {
  if (ref.scope == VarScope::global) return env.s.globals[ref.index];
  const Process& p = env.m.processes[ref.process];
  if (env.m.property_index && *env.m.property_index == ref.process)
    return p.locals[ref.index].init;  // property locals are constant
  return env.s.locals[system_slot(env.m, ref.process)][ref.index];
}

std::int32_t eval(const EvalEnv& env, const Expr& e) {
  switch (e.op) {
    case ExprOp::constant: return e.value;
    case ExprOp::variable: return read_var(env, e.var);
    case ExprOp::neg: return trunc32(-static_cast<std::int64_t>(eval(env, *e.lhs)));
    case ExprOp::lnot: return eval(env, *e.lhs) == 0 ? 1 : 0;
    case ExprOp::land: return eval(env, *e.lhs) != 0 && eval(env, *e.rhs) != 0 ? 1 : 0;
    case ExprOp::lor: return eval(env, *e.lhs) != 0 || eval(env, *e.rhs) != 0 ? 1 : 0;
    default: break;
  }
  std::int64_t l = eval(env, *e.lhs);
  std::int64_t r = eval(env, *e.rhs);
  switch (e.op) {
    case ExprOp::add: return trunc32(l + r);
    case ExprOp::sub: return trunc32(l - r);
    case ExprOp::mul: return trunc32(l * r);
    case ExprOp::div:
      if (r == 0)
        throw ModelRuntimeError("division by zero at " + std::to_string(e.line) + ":" +
                                    std::to_string(e.col),
                                env.pre_bytes);
      return trunc32(l / r);
    case ExprOp::mod:
      if (r == 0)
        throw ModelRuntimeError("modulo by zero at " + std::to_string(e.line) + ":" +
                                    std::to_string(e.col),
                                env.pre_bytes);
      return trunc32(l % r);
    case ExprOp::eq: return l == r;
    case ExprOp::ne: return l != r;
    case ExprOp::lt: return l < r;
    case ExprOp::le: return l <= r;
    case ExprOp::gt: return l > r;
    case ExprOp::ge: return l >= r;
    default: throw ContractError("eval: bad expression node");
  }
}

bool guard_holds(const Model& m, const ExecState& s, std::uint16_t proc, const ExprPtr& guard,
                 const std::string& pre_bytes) {
  if (!guard) return true;
  return eval(EvalEnv{m, s, proc, pre_bytes}, *guard) != 0;
}

void write_var(const Model& m, ExecState& s, std::uint16_t proc, const VarRef& ref,
               const std::string& name, std::int32_t value, const std::string& pre_bytes) {
  const VarDecl& decl = ref.scope == VarScope::global ? m.globals[ref.index]
                                                      : m.processes[ref.process].locals[ref.index];
  bool ok = decl.type == VarType::byte_width ? (value >= 0 && value <= 255)
                                             : (value >= -32768 && value <= 32767);
  if (!ok)
    throw ModelRuntimeError("assignment " + name + " = " + std::to_string(value) +
                                " out of range for " + type_name(decl.type) + " (process " +
                                m.processes[proc].name + ")",
                            pre_bytes);
  if (ref.scope == VarScope::global)
    s.globals[ref.index] = value;
  else
    s.locals[system_slot(m, ref.process)][ref.index] = value;
}

void apply_effects(const Model& m, ExecState& s, std::uint16_t proc,
                   const std::vector<Assignment>& effects, const std::string& pre_bytes) {
  for (const Assignment& a : effects) {
    std::int32_t v = eval(EvalEnv{m, s, proc, pre_bytes}, *a.value);
    write_var(m, s, proc, a.target, a.target_name, v, pre_bytes);
  }
}

bool any_system_accept(const Model& m, const ExecState& s) {
  for (std::size_t k = 0; k < m.system_procs.size(); ++k)
    if (m.processes[m.system_procs[k]].accept[s.locations[k]]) return true;
  return false;
}

}  // namespace

std::vector<Successor> enumerate_successors(const Model& m, std::string_view bytes) {
  const std::string pre_bytes(bytes);
  const ExecState pre = decode_state(m, bytes);
  std::vector<Successor> out;

  // Property moves are enabled by the pre-state only, so they are fixed for
  // every system step of this expansion.
  std::vector<const Transition*> property_moves;
  if (m.has_property()) {
    const Process& prop = m.property();
    for (const Transition& t : prop.transitions)
      if (t.from == pre.property_location &&
          guard_holds(m, pre, *m.property_index, t.guard, pre_bytes))
        property_moves.push_back(&t);
    if (property_moves.empty()) return out;  // no joint step possible
  }

  auto emit = [&](ExecState&& post) {
    if (!m.has_property()) {
      Successor s;
      s.accepting = any_system_accept(m, post);
      s.bytes = encode_state(m, post);
      out.push_back(std::move(s));
      return;
    }
    for (const Transition* pt : property_moves) {
      ExecState branched = post;
      branched.property_location = pt->to;
      Successor s;
      s.property_location = pt->to;
      s.accepting = m.property().accept[pt->to];
      s.bytes = encode_state(m, branched);
      out.push_back(std::move(s));
    }
  };

  for (std::uint16_t slot = 0; slot < m.system_procs.size(); ++slot) {
    const std::uint16_t pi = m.system_procs[slot];
    const Process& proc = m.processes[pi];
    for (const Transition& t : proc.transitions) {
      if (t.from != pre.locations[slot]) continue;
      if (!guard_holds(m, pre, pi, t.guard, pre_bytes)) continue;

      if (t.sync.kind == SyncKind::none) {
        ExecState post = pre;
        apply_effects(m, post, pi, t.effects, pre_bytes);
        post.locations[slot] = t.to;
        emit(std::move(post));
        continue;
      }

      const Channel& chan = m.channels[t.sync.channel];
      if (t.sync.kind == SyncKind::send) {
        if (chan.capacity == 0) {
          // Rendezvous: pair with every enabled receive in another process.
          for (std::uint16_t pslot = 0; pslot < m.system_procs.size(); ++pslot) {
            if (pslot == slot) continue;
            const std::uint16_t pj = m.system_procs[pslot];
            const Process& partner = m.processes[pj];
            for (const Transition& r : partner.transitions) {
              if (r.from != pre.locations[pslot]) continue;
              if (r.sync.kind != SyncKind::receive || r.sync.channel != t.sync.channel) continue;
              if (!guard_holds(m, pre, pj, r.guard, pre_bytes)) continue;
              ExecState post = pre;
              std::int32_t value = eval(EvalEnv{m, post, pi, pre_bytes}, *t.sync.send_value);
              write_var(m, post, pj, r.sync.target, r.sync.target_name, value, pre_bytes);
              apply_effects(m, post, pi, t.effects, pre_bytes);
              apply_effects(m, post, pj, r.effects, pre_bytes);
              post.locations[slot] = t.to;
              post.locations[pslot] = r.to;
              emit(std::move(post));
            }
          }
        } else {
          int buf = m.buffer_slot[t.sync.channel];
          if (pre.buffers[buf].size() < chan.capacity) {
            ExecState post = pre;
            std::int32_t value = eval(EvalEnv{m, post, pi, pre_bytes}, *t.sync.send_value);
            post.buffers[buf].push_back(value);
            apply_effects(m, post, pi, t.effects, pre_bytes);
            post.locations[slot] = t.to;
            emit(std::move(post));
          }
        }
      } else {  // receive
        if (chan.capacity == 0) continue;  // fires jointly, enumerated from the send side
        int buf = m.buffer_slot[t.sync.channel];
        if (!pre.buffers[buf].empty()) {
          ExecState post = pre;
          std::int32_t value = post.buffers[buf].front();
          post.buffers[buf].erase(post.buffers[buf].begin());
          write_var(m, post, pi, t.sync.target, t.sync.target_name, value, pre_bytes);
          apply_effects(m, post, pi, t.effects, pre_bytes);
          post.locations[slot] = t.to;
          emit(std::move(post));
        }
      }
    }
  }
  return out;
}

std::vector<std::string> successors(const Model& m, std::string_view bytes) {
  std::vector<std::string> out;
  for (Successor& s : enumerate_successors(m, bytes)) out.push_back(std::move(s.bytes));
  return out;
}

std::uint16_t property_location_of(const Model& m, std::string_view bytes) {
  if (!m.has_property()) throw ContractError("property_location_of: no property process");
  if (bytes.size() < 2) throw ContractError("property_location_of: truncated state");
  return static_cast<std::uint8_t>(bytes[bytes.size() - 2]) |
         (static_cast<std::uint16_t>(static_cast<std::uint8_t>(bytes[bytes.size() - 1])) << 8);
}

bool is_accepting(const Model& m, std::string_view bytes) {
  if (m.has_property()) return m.property().accept[property_location_of(m, bytes)];
  return any_system_accept(m, decode_state(m, bytes));
}

Bitset property_relevance(const Model& m) {
  if (!m.has_property()) return Bitset();
  const Process& prop = m.property();
  const auto locs = static_cast<VertexId>(prop.locations.size());

  EdgeLog log({locs, std::max<std::uint64_t>(prop.transitions.size(), 1)});
  for (VertexId l = 0; l < locs; ++l) log.add_vertex(prop.accept[l]);
  for (const Transition& t : prop.transitions) log.append_edge(t.from, t.to);

  // Locations inside cyclic accepting SCCs, then everything that reaches
  // them (walking predecessor lists of the transposed snapshot).
  SccRestriction core = restrict_to_accepting_sccs(build_snapshot(log, Orientation::forward));
  Bitset relevant(locs);
  std::vector<VertexId> frontier;
  for (VertexId old_id : core.kept) {
    relevant.set(old_id);
    frontier.push_back(old_id);
  }
  CsrSnapshot preds = build_snapshot(log, Orientation::transposed);
  while (!frontier.empty()) {
    VertexId v = frontier.back();
    frontier.pop_back();
    for (VertexId p : preds.row(v)) {
      if (!relevant.test(p)) {
        relevant.set(p);
        frontier.push_back(p);
      }
    }
  }
  return relevant;
}

}  // namespace cycheck
