#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cycheck/model.hpp"

namespace cycheck {

namespace {

enum class Tok : std::uint8_t {
  identifier, number,
  kw_byte, kw_int, kw_channel, kw_process, kw_state, kw_init, kw_accept,
  kw_trans, kw_guard, kw_sync, kw_effect, kw_system, kw_async, kw_property,
  lbrace, rbrace, lparen, rparen, lbracket, rbracket,
  semicolon, comma, arrow, bang, question, assign,
  plus, minus, star, slash, percent,
  eq, ne, lt, le, gt, ge, and_and, or_or,
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::int64_t number = 0;
  int line = 1, col = 1;
};

const std::unordered_map<std::string_view, Tok>& keywords() {
  static const std::unordered_map<std::string_view, Tok> kw = {
      {"byte", Tok::kw_byte},     {"int", Tok::kw_int},
      {"channel", Tok::kw_channel}, {"process", Tok::kw_process},
      {"state", Tok::kw_state},   {"init", Tok::kw_init},
      {"accept", Tok::kw_accept}, {"trans", Tok::kw_trans},
      {"guard", Tok::kw_guard},   {"sync", Tok::kw_sync},
      {"effect", Tok::kw_effect}, {"system", Tok::kw_system},
      {"async", Tok::kw_async},   {"property", Tok::kw_property},
  };
  return kw;
}

std::vector<Token> lex(std::string_view text,
                       const std::map<std::string, std::int32_t>& constants) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (text[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += k;
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.text = std::string(text.substr(i, j - i));
      auto kw = keywords().find(t.text);
      if (kw != keywords().end()) {
        t.kind = kw->second;
      } else if (auto sub = constants.find(t.text); sub != constants.end()) {
        t.kind = Tok::number;
        t.number = sub->second;
      } else {
        t.kind = Tok::identifier;
      }
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::int64_t value = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        value = value * 10 + (text[j] - '0');
        if (value > INT32_MAX)
          throw ParseError(DiagCode::range_error, line, col, "integer literal too large");
        ++j;
      }
      t.kind = Tok::number;
      t.number = value;
      advance(j - i);
    } else {
      auto two = [&](char a, char b) {
        return c == a && i + 1 < text.size() && text[i + 1] == b;
      };
      if (two('-', '>')) { t.kind = Tok::arrow; advance(2); }
      else if (two('=', '=')) { t.kind = Tok::eq; advance(2); }
      else if (two('!', '=')) { t.kind = Tok::ne; advance(2); }
      else if (two('<', '=')) { t.kind = Tok::le; advance(2); }
      else if (two('>', '=')) { t.kind = Tok::ge; advance(2); }
      else if (two('&', '&')) { t.kind = Tok::and_and; advance(2); }
      else if (two('|', '|')) { t.kind = Tok::or_or; advance(2); }
      else {
        switch (c) {
          case '{': t.kind = Tok::lbrace; break;
          case '}': t.kind = Tok::rbrace; break;
          case '(': t.kind = Tok::lparen; break;
          case ')': t.kind = Tok::rparen; break;
          case '[': t.kind = Tok::lbracket; break;
          case ']': t.kind = Tok::rbracket; break;
          case ';': t.kind = Tok::semicolon; break;
          case ',': t.kind = Tok::comma; break;
          case '!': t.kind = Tok::bang; break;
          case '?': t.kind = Tok::question; break;
          case '=': t.kind = Tok::assign; break;
          case '+': t.kind = Tok::plus; break;
          case '-': t.kind = Tok::minus; break;
          case '*': t.kind = Tok::star; break;
          case '/': t.kind = Tok::slash; break;
          case '%': t.kind = Tok::percent; break;
          case '<': t.kind = Tok::lt; break;
          case '>': t.kind = Tok::gt; break;
          default:
            throw ParseError(DiagCode::syntax_error, line, col,
                             std::string("unexpected character '") + c + "'");
        }
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  Token eof;
  eof.kind = Tok::end;
  eof.line = line;
  eof.col = col;
  out.push_back(eof);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Model parse() {
    Model m;
    bool system_seen = false;
    std::string property_name;
    int property_line = 0, property_col = 0;

    while (!at(Tok::end)) {
      if (at(Tok::kw_byte) || at(Tok::kw_int)) {
        m.globals.push_back(parse_var_decl());
      } else if (at(Tok::kw_channel)) {
        m.channels.push_back(parse_channel());
      } else if (at(Tok::kw_process)) {
        m.processes.push_back(parse_process());
      } else if (at(Tok::kw_system)) {
        const Token& t = next();
        if (system_seen)
          throw ParseError(DiagCode::syntax_error, t.line, t.col, "duplicate system declaration");
        expect(Tok::kw_async, "'async'");
        expect(Tok::semicolon, "';'");
        system_seen = true;
      } else if (at(Tok::kw_property)) {
        const Token& t = next();
        if (!property_name.empty())
          throw ParseError(DiagCode::duplicate_name, t.line, t.col,
                           "duplicate property declaration");
        Token name = expect(Tok::identifier, "property process name");
        expect(Tok::semicolon, "';'");
        property_name = name.text;
        property_line = name.line;
        property_col = name.col;
      } else {
        const Token& t = peek();
        throw ParseError(DiagCode::syntax_error, t.line, t.col,
                         "expected declaration, got '" + describe(t) + "'");
      }
    }
    if (!system_seen)
      throw ParseError(DiagCode::syntax_error, peek().line, peek().col,
                       "missing 'system async;' declaration");

    resolve(m, property_name, property_line, property_col);
    return m;
  }

 private:
  // ---- token plumbing ----

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }

  Token expect(Tok k, const char* what) {
    if (!at(k)) {
      const Token& t = peek();
      throw ParseError(DiagCode::syntax_error, t.line, t.col,
                       std::string("expected ") + what + ", got '" + describe(t) + "'");
    }
    return next();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::end) return "<end of input>";
    if (t.kind == Tok::number) return std::to_string(t.number);
    if (!t.text.empty()) return t.text;
    static const char* names[] = {
        "identifier", "number", "byte", "int", "channel", "process", "state",
        "init", "accept", "trans", "guard", "sync", "effect", "system",
        "async", "property", "{", "}", "(", ")", "[", "]", ";", ",", "->",
        "!", "?", "=", "+", "-", "*", "/", "%", "==", "!=", "<", "<=", ">",
        ">=", "&&", "||", "<end>"};
    return names[static_cast<int>(t.kind)];
  }

  // ---- grammar ----

  std::int32_t parse_int_literal() {
    bool negative = false;
    if (at(Tok::minus)) {
      next();
      negative = true;
    }
    Token t = expect(Tok::number, "integer literal");
    std::int64_t v = negative ? -t.number : t.number;
    if (v < INT32_MIN || v > INT32_MAX)
      throw ParseError(DiagCode::range_error, t.line, t.col, "integer literal out of range");
    return static_cast<std::int32_t>(v);
  }

  VarDecl parse_var_decl() {
    Token kind = next();  // kw_byte or kw_int
    VarDecl d;
    d.type = kind.kind == Tok::kw_byte ? VarType::byte_width : VarType::int_width;
    Token name = expect(Tok::identifier, "variable name");
    d.name = name.text;
    if (at(Tok::assign)) {
      next();
      d.init = parse_int_literal();
    }
    expect(Tok::semicolon, "';'");
    bool ok = d.type == VarType::byte_width ? (d.init >= 0 && d.init <= 255)
                                            : (d.init >= -32768 && d.init <= 32767);
    if (!ok)
      throw ParseError(DiagCode::type_mismatch, name.line, name.col,
                       "initializer " + std::to_string(d.init) + " out of range for " +
                           (d.type == VarType::byte_width ? "byte" : "int"));
    return d;
  }

  Channel parse_channel() {
    next();  // kw_channel
    Channel c;
    Token name = expect(Tok::identifier, "channel name");
    c.name = name.text;
    if (at(Tok::lbracket)) {
      next();
      Token cap = expect(Tok::number, "channel capacity");
      if (cap.number < 0 || cap.number > 255)
        throw ParseError(DiagCode::range_error, cap.line, cap.col,
                         "channel capacity must be in 0..255");
      c.capacity = static_cast<std::uint16_t>(cap.number);
      expect(Tok::rbracket, "']'");
    }
    expect(Tok::semicolon, "';'");
    return c;
  }

  Process parse_process() {
    next();  // kw_process
    Process p;
    Token name = expect(Tok::identifier, "process name");
    p.name = name.text;
    expect(Tok::lbrace, "'{'");

    while (at(Tok::kw_byte) || at(Tok::kw_int)) p.locals.push_back(parse_var_decl());

    Token state_kw = expect(Tok::kw_state, "'state'");
    for (;;) {
      Token loc = expect(Tok::identifier, "location name");
      if (std::find(p.locations.begin(), p.locations.end(), loc.text) != p.locations.end())
        throw ParseError(DiagCode::duplicate_name, loc.line, loc.col,
                         "duplicate location '" + loc.text + "'");
      p.locations.push_back(loc.text);
      if (!at(Tok::comma)) break;
      next();
    }
    expect(Tok::semicolon, "';'");
    if (p.locations.size() > 65535)
      throw ParseError(DiagCode::range_error, state_kw.line, state_kw.col, "too many locations");
    p.accept.assign(p.locations.size(), false);

    expect(Tok::kw_init, "'init'");
    Token init = expect(Tok::identifier, "initial location");
    p.init_location = location_index(p, init);
    expect(Tok::semicolon, "';'");

    if (at(Tok::kw_accept)) {
      next();
      for (;;) {
        Token loc = expect(Tok::identifier, "accepting location");
        p.accept[location_index(p, loc)] = true;
        if (!at(Tok::comma)) break;
        next();
      }
      expect(Tok::semicolon, "';'");
    }

    while (at(Tok::kw_trans)) p.transitions.push_back(parse_transition(p));

    expect(Tok::rbrace, "'}'");
    return p;
  }

  std::uint16_t location_index(const Process& p, const Token& name) {
    auto it = std::find(p.locations.begin(), p.locations.end(), name.text);
    if (it == p.locations.end())
      throw ParseError(DiagCode::unknown_identifier, name.line, name.col,
                       "unknown location '" + name.text + "' in process " + p.name);
    return static_cast<std::uint16_t>(it - p.locations.begin());
  }

  Transition parse_transition(const Process& p) {
    next();  // kw_trans
    Transition t;
    Token from = expect(Tok::identifier, "source location");
    t.from = location_index(p, from);
    expect(Tok::arrow, "'->'");
    Token to = expect(Tok::identifier, "target location");
    t.to = location_index(p, to);
    expect(Tok::lbrace, "'{'");

    if (at(Tok::kw_guard)) {
      next();
      t.guard = parse_expr();
      expect(Tok::semicolon, "';'");
    }
    if (at(Tok::kw_sync)) {
      next();
      Token chan = expect(Tok::identifier, "channel name");
      t.sync.channel_name = chan.text;
      t.sync.line = chan.line;
      t.sync.col = chan.col;
      if (at(Tok::bang)) {
        next();
        t.sync.kind = SyncKind::send;
        t.sync.send_value = parse_expr();
      } else if (at(Tok::question)) {
        next();
        t.sync.kind = SyncKind::receive;
        Token target = expect(Tok::identifier, "receive target variable");
        t.sync.target_name = target.text;
      } else {
        const Token& bad = peek();
        throw ParseError(DiagCode::syntax_error, bad.line, bad.col, "expected '!' or '?'");
      }
      expect(Tok::semicolon, "';'");
    }
    if (at(Tok::kw_effect)) {
      next();
      for (;;) {
        Assignment a;
        Token target = expect(Tok::identifier, "assignment target");
        a.target_name = target.text;
        a.line = target.line;
        a.col = target.col;
        expect(Tok::assign, "'='");
        a.value = parse_expr();
        t.effects.push_back(std::move(a));
        if (!at(Tok::comma)) break;
        next();
      }
      expect(Tok::semicolon, "';'");
    }
    expect(Tok::rbrace, "'}'");
    return t;
  }

  // Precedence climbing: || < && < (== !=) < (< <= > >=) < (+ -) < (* / %) < unary.
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr make_binary(ExprOp op, ExprPtr l, ExprPtr r, const Token& at_tok) {
    auto e = std::make_unique<Expr>();
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    e->line = at_tok.line;
    e->col = at_tok.col;
    return e;
  }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (at(Tok::or_or)) {
      Token t = next();
      e = make_binary(ExprOp::lor, std::move(e), parse_and(), t);
    }
    return e;
  }
  ExprPtr parse_and() {
    ExprPtr e = parse_equality();
    while (at(Tok::and_and)) {
      Token t = next();
      e = make_binary(ExprOp::land, std::move(e), parse_equality(), t);
    }
    return e;
  }
  ExprPtr parse_equality() {
    ExprPtr e = parse_relational();
    while (at(Tok::eq) || at(Tok::ne)) {
      Token t = next();
      e = make_binary(t.kind == Tok::eq ? ExprOp::eq : ExprOp::ne, std::move(e),
                      parse_relational(), t);
    }
    return e;
  }
  ExprPtr parse_relational() {
    ExprPtr e = parse_additive();
    while (at(Tok::lt) || at(Tok::le) || at(Tok::gt) || at(Tok::ge)) {
      Token t = next();
      ExprOp op = t.kind == Tok::lt   ? ExprOp::lt
                  : t.kind == Tok::le ? ExprOp::le
                  : t.kind == Tok::gt ? ExprOp::gt
                                      : ExprOp::ge;
      e = make_binary(op, std::move(e), parse_additive(), t);
    }
    return e;
  }
  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    while (at(Tok::plus) || at(Tok::minus)) {
      Token t = next();
      e = make_binary(t.kind == Tok::plus ? ExprOp::add : ExprOp::sub, std::move(e),
                      parse_multiplicative(), t);
    }
    return e;
  }
  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_unary();
    while (at(Tok::star) || at(Tok::slash) || at(Tok::percent)) {
      Token t = next();
      ExprOp op = t.kind == Tok::star    ? ExprOp::mul
                  : t.kind == Tok::slash ? ExprOp::div
                                         : ExprOp::mod;
      e = make_binary(op, std::move(e), parse_unary(), t);
    }
    return e;
  }
  ExprPtr parse_unary() {
    if (at(Tok::bang) || at(Tok::minus)) {
      Token t = next();
      auto e = std::make_unique<Expr>();
      e->op = t.kind == Tok::bang ? ExprOp::lnot : ExprOp::neg;
      e->lhs = parse_unary();
      e->line = t.line;
      e->col = t.col;
      return e;
    }
    return parse_primary();
  }
  ExprPtr parse_primary() {
    if (at(Tok::lparen)) {
      next();
      ExprPtr e = parse_expr();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (at(Tok::number)) {
      Token t = next();
      auto e = std::make_unique<Expr>();
      e->op = ExprOp::constant;
      e->value = static_cast<std::int32_t>(t.number);
      e->line = t.line;
      e->col = t.col;
      return e;
    }
    Token t = expect(Tok::identifier, "expression");
    auto e = std::make_unique<Expr>();
    e->op = ExprOp::variable;
    e->name = t.text;
    e->line = t.line;
    e->col = t.col;
    return e;
  }

  // ---- resolution ----

  enum class NameKind { global, channel, process };

  void resolve(Model& m, const std::string& property_name, int prop_line, int prop_col) {
    std::unordered_map<std::string, NameKind> toplevel;
    std::unordered_map<std::string, std::uint16_t> global_index, channel_index, process_index;

    auto declare = [&](const std::string& name, NameKind kind) {
      if (!toplevel.emplace(name, kind).second)
        throw ParseError(DiagCode::duplicate_name, 0, 0, "duplicate name '" + name + "'");
    };
    for (std::size_t i = 0; i < m.globals.size(); ++i) {
      declare(m.globals[i].name, NameKind::global);
      global_index[m.globals[i].name] = static_cast<std::uint16_t>(i);
    }
    for (std::size_t i = 0; i < m.channels.size(); ++i) {
      declare(m.channels[i].name, NameKind::channel);
      channel_index[m.channels[i].name] = static_cast<std::uint16_t>(i);
    }
    for (std::size_t i = 0; i < m.processes.size(); ++i) {
      declare(m.processes[i].name, NameKind::process);
      process_index[m.processes[i].name] = static_cast<std::uint16_t>(i);
    }

    if (!property_name.empty()) {
      auto it = process_index.find(property_name);
      if (it == process_index.end())
        throw ParseError(DiagCode::unknown_identifier, prop_line, prop_col,
                         "property process '" + property_name + "' not declared");
      m.property_index = it->second;
    }

    for (std::uint16_t pi = 0; pi < m.processes.size(); ++pi) {
      Process& p = m.processes[pi];
      std::unordered_map<std::string, std::uint16_t> local_index;
      for (std::size_t i = 0; i < p.locals.size(); ++i) {
        const std::string& name = p.locals[i].name;
        if (toplevel.count(name) || !local_index.emplace(name, static_cast<std::uint16_t>(i)).second)
          throw ParseError(DiagCode::duplicate_name, 0, 0,
                           "local '" + name + "' in process " + p.name +
                               " duplicates another declaration");
      }

      auto resolve_var = [&](const std::string& name, int line, int col) -> VarRef {
        if (auto it = local_index.find(name); it != local_index.end())
          return VarRef{VarScope::local, pi, it->second};
        if (auto it = global_index.find(name); it != global_index.end())
          return VarRef{VarScope::global, 0, it->second};
        if (toplevel.count(name))
          throw ParseError(DiagCode::type_mismatch, line, col,
                           "'" + name + "' is not a variable");
        throw ParseError(DiagCode::unknown_identifier, line, col,
                         "unknown identifier '" + name + "'");
      };

      auto resolve_expr = [&](auto&& self, Expr& e) -> void {
        switch (e.op) {
          case ExprOp::constant:
            break;
          case ExprOp::variable:
            e.var = resolve_var(e.name, e.line, e.col);
            break;
          default:
            if (e.lhs) self(self, *e.lhs);
            if (e.rhs) self(self, *e.rhs);
        }
      };

      for (Transition& t : p.transitions) {
        if (t.guard) resolve_expr(resolve_expr, *t.guard);
        if (t.sync.kind != SyncKind::none) {
          auto it = channel_index.find(t.sync.channel_name);
          if (it == channel_index.end()) {
            if (toplevel.count(t.sync.channel_name))
              throw ParseError(DiagCode::type_mismatch, t.sync.line, t.sync.col,
                               "'" + t.sync.channel_name + "' is not a channel");
            throw ParseError(DiagCode::unknown_identifier, t.sync.line, t.sync.col,
                             "unknown channel '" + t.sync.channel_name + "'");
          }
          t.sync.channel = it->second;
          if (t.sync.kind == SyncKind::send)
            resolve_expr(resolve_expr, *t.sync.send_value);
          else
            t.sync.target = resolve_var(t.sync.target_name, t.sync.line, t.sync.col);
        }
        for (Assignment& a : t.effects) {
          a.target = resolve_var(a.target_name, a.line, a.col);
          resolve_expr(resolve_expr, *a.value);
        }
      }
    }

    if (m.has_property()) {
      const Process& prop = m.property();
      for (const Transition& t : prop.transitions) {
        if (t.sync.kind != SyncKind::none)
          throw ParseError(DiagCode::property_restriction, t.sync.line, t.sync.col,
                           "property process '" + prop.name + "' may not use channels");
        if (!t.effects.empty())
          throw ParseError(DiagCode::property_restriction, t.effects.front().line,
                           t.effects.front().col,
                           "property process '" + prop.name + "' may not have effects");
      }
    }

    for (std::uint16_t i = 0; i < m.processes.size(); ++i)
      if (!m.property_index || *m.property_index != i) m.system_procs.push_back(i);

    m.buffer_slot.assign(m.channels.size(), -1);
    for (std::size_t c = 0; c < m.channels.size(); ++c)
      if (m.channels[c].capacity > 0) m.buffer_slot[c] = m.buffered_channel_count++;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Model parse_model(std::string_view text,
                  const std::map<std::string, std::int32_t>& constants) {
  Parser parser(lex(text, constants));
  return parser.parse();
}

}  // namespace cycheck
