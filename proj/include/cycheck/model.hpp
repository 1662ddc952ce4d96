#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cycheck/bitset.hpp"
#include "cycheck/errors.hpp"

namespace cycheck {

/// Asynchronous network of communicating finite automata with an optional
/// synchronous observer (property) automaton. Grammar (.cdve files):
///
///   model        ::= (global-decl | channel-decl | process | system-decl | property-decl)*
///   global-decl  ::= ("byte" | "int") name ("=" int)? ";"
///   channel-decl ::= "channel" name ("[" capacity "]")? ";"   (no capacity = rendezvous)
///   process      ::= "process" name "{" decls
///                      "state" namelist ";" "init" name ";" ("accept" namelist ";")?
///                      trans* "}"
///   trans        ::= "trans" name "->" name "{" ("guard" expr ";")?
///                      ("sync" chan ("!" expr | "?" var) ";")?
///                      ("effect" assign ("," assign)* ";")? "}"
///   system-decl  ::= "system" "async" ";"
///   property-decl::= "property" name ";"
///
/// Comments run from `//` to end of line. byte ranges over 0..255, int over
/// -32768..32767; expressions use signed 32-bit intermediate arithmetic with
/// + - * / % == != < <= > >= && || ! and parentheses.

enum class VarType : std::uint8_t { byte_width, int_width };

struct VarDecl {
  std::string name;
  VarType type = VarType::byte_width;
  std::int32_t init = 0;
};

enum class VarScope : std::uint8_t { global, local };

struct VarRef {
  VarScope scope = VarScope::global;
  std::uint16_t process = 0;  // owning process for locals
  std::uint16_t index = 0;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprOp : std::uint8_t {
  constant, variable,
  neg, lnot,
  add, sub, mul, div, mod,
  eq, ne, lt, le, gt, ge,
  land, lor,
};

struct Expr {
  ExprOp op = ExprOp::constant;
  std::int32_t value = 0;   // constant
  VarRef var;               // variable (resolved)
  std::string name;         // variable (source name, kept for diagnostics)
  ExprPtr lhs, rhs;
  int line = 0, col = 0;
};

struct Assignment {
  VarRef target;
  std::string target_name;
  ExprPtr value;
  int line = 0, col = 0;
};

enum class SyncKind : std::uint8_t { none, send, receive };

struct SyncAction {
  SyncKind kind = SyncKind::none;
  std::uint16_t channel = 0;
  std::string channel_name;
  ExprPtr send_value;      // send only
  VarRef target;           // receive only
  std::string target_name;
  int line = 0, col = 0;
};

struct Transition {
  std::uint16_t from = 0, to = 0;
  ExprPtr guard;  // null means true
  SyncAction sync;
  std::vector<Assignment> effects;
};

struct Process {
  std::string name;
  std::vector<VarDecl> locals;
  std::vector<std::string> locations;
  std::uint16_t init_location = 0;
  std::vector<bool> accept;  // per location
  std::vector<Transition> transitions;
};

struct Channel {
  std::string name;
  std::uint16_t capacity = 0;  // 0 = rendezvous
};

struct Model {
  std::vector<VarDecl> globals;
  std::vector<Channel> channels;
  std::vector<Process> processes;  // property process included
  std::optional<std::uint16_t> property_index;

  // Derived by the parser.
  std::vector<std::uint16_t> system_procs;   // process indices, property excluded
  std::vector<int> buffer_slot;              // channel index -> buffer slot, -1 if rendezvous
  std::uint16_t buffered_channel_count = 0;

  bool has_property() const { return property_index.has_value(); }
  const Process& property() const { return processes[*property_index]; }

  std::size_t transition_count() const {
    std::size_t c = 0;
    for (const Process& p : processes) c += p.transitions.size();
    return c;
  }
};

/// Parses and fully resolves a model. `constants` maps identifiers to the
/// integer literal substituted for them at lexing time (the CLI's --const).
/// Throws ParseError with a line/column diagnostic.
Model parse_model(std::string_view text,
                  const std::map<std::string, std::int32_t>& constants = {});

/// Decoded working form of a state. The canonical byte serialization is, in
/// order: global values (byte = 1 byte, int = 2 bytes little-endian); per
/// system process in declaration order a 2-byte location index then its
/// locals; per buffered channel a 1-byte length then 4-byte little-endian
/// values front first; finally a 2-byte property location if a property is
/// declared. Property locals never change and are not serialized.
struct ExecState {
  std::vector<std::int32_t> globals;
  std::vector<std::uint16_t> locations;             // per system process
  std::vector<std::vector<std::int32_t>> locals;    // per system process
  std::vector<std::vector<std::int32_t>> buffers;   // per buffered channel
  std::uint16_t property_location = 0;

  bool operator==(const ExecState&) const = default;
};

std::string encode_state(const Model& m, const ExecState& s);
ExecState decode_state(const Model& m, std::string_view bytes);

/// Canonical serialization of the initial state.
std::string initial_state(const Model& m);

struct Successor {
  std::string bytes;
  bool accepting = false;
  std::uint16_t property_location = 0;
};

/// Product successors in deterministic order: system processes in
/// declaration order, transitions in declaration order, rendezvous pairs
/// enumerated from the send side with partners in declaration order; each
/// system step is paired with every property transition whose guard holds in
/// the pre-state. Throws ModelRuntimeError on range violations and division
/// by zero.
std::vector<Successor> enumerate_successors(const Model& m, std::string_view bytes);

/// Successor serializations only (same order).
std::vector<std::string> successors(const Model& m, std::string_view bytes);

/// With a property: true iff the property automaton is at an accept
/// location. Without: true iff any process is at one of its accept
/// locations.
bool is_accepting(const Model& m, std::string_view bytes);

/// Cheap peek at the trailing property location (property models only).
std::uint16_t property_location_of(const Model& m, std::string_view bytes);

/// Property locations from which a cyclic accepting SCC of the property
/// automaton is reachable (guards ignored). Product states whose property
/// location lies outside this set can never be part of or lead to an
/// accepting cycle. Empty bitset when no property is declared.
Bitset property_relevance(const Model& m);

}  // namespace cycheck
