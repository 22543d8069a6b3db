// Copyright 2026 The ci-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ciengine/document.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace ciengine {

namespace {

constexpr std::string_view kHeader = "ci-engine/1";

// --- Lexer -------------------------------------------------------------------------

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  bool header_seen = false;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (!header_seen) {
      const std::size_t end = text.find('\n', i);
      std::string_view first = text.substr(i, end == std::string_view::npos ? text.size() - i : end - i);
      while (!first.empty() && (first.back() == ' ' || first.back() == '\t' || first.back() == '\r')) {
        first.remove_suffix(1);
      }
      if (first != kHeader) throw ParseError("expected version line 'ci-engine/1'", line, col);
      header_seen = true;
      advance(first.size());
      continue;
    }
    Token t{Tok::Punct, "", line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (is_digit(c)) {
      std::size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
      }
      if (j + 1 < text.size() && text[j] == '/' && is_digit(text[j + 1])) {
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
      }
      t.kind = Tok::Number;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      std::string s;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') {
        if (text[j] == '\\' && j + 1 < text.size()) ++j;
        s += text[j++];
      }
      if (j >= text.size() || text[j] != '"') throw ParseError("unterminated string", line, col);
      t.kind = Tok::String;
      t.text = std::move(s);
      advance(j + 1 - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.text = "->";
      advance(2);
    } else if (std::string_view("{}[](),:;=*+-/.").find(c) != std::string_view::npos) {
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  if (!header_seen) throw ParseError("expected version line 'ci-engine/1'", 1, 1);
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

// --- Parser ------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::vector<Token> toks, const Document* context) : toks_(std::move(toks)), ctx_(context) {}

  Document run() {
    while (!at_end()) statement();
    return std::move(doc_);
  }

 private:
  // Token helpers.
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void error(const Token& t, const std::string& what) const {
    throw ParseError(what + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"), t.line, t.col);
  }
  bool is_punct(const char* p, std::size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == p; }
  bool is_word(const char* w, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == w; }
  void expect(const char* p) {
    if (!is_punct(p)) error(peek(), std::string("expected '") + p + "'");
    next();
  }
  void expect_word(const char* w) {
    if (!is_word(w)) error(peek(), std::string("expected '") + w + "'");
    next();
  }
  std::string name() {
    if (peek().kind != Tok::Ident && peek().kind != Tok::String) error(peek(), "expected a name");
    return next().text;
  }
  std::size_t integer() {
    const Token& t = peek();
    if (t.kind != Tok::Number || !std::all_of(t.text.begin(), t.text.end(), is_digit)) error(t, "expected an integer");
    next();
    try {
      return std::stoul(t.text);
    } catch (const std::exception&) {
      error(t, "integer out of range");
    }
  }

  // Runs a semantic action, tagging engine errors with the statement position.
  template <class F>
  auto at(const Token& where, F&& f) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw ParseError(e.what(), where.line, where.col);
      throw Error(e.code(), "line " + std::to_string(where.line) + ": " + e.what());
    }
  }

  // Lookups across the context and this document.
  const SystemDecl* find_system(const std::string& n) const {
    if (const SystemDecl* s = doc_.find_system(n)) return s;
    return ctx_ ? ctx_->find_system(n) : nullptr;
  }
  OperationalTheory theory() const {
    OperationalTheory th;
    if (ctx_) th = ctx_->theory();
    for (const auto& p : doc_.procedures) th.declare(p.decl);
    return th;
  }
  void check_fresh(const Token& t, const std::string& kind, const std::string& n, bool taken) const {
    if (taken) error(t, kind + " '" + n + "' declared twice");
  }
  template <class T>
  static bool has_name(const std::vector<Named<T>>& v, const std::string& n) {
    return std::any_of(v.begin(), v.end(), [&](const Named<T>& x) { return x.name == n; });
  }

  // Rationals, vectors and matrices.
  Rational rational() {
    bool neg = false;
    if (is_punct("-")) {
      next();
      neg = true;
    }
    const Token& t = peek();
    if (t.kind != Tok::Number) error(t, "expected a number");
    next();
    Rational q;
    try {
      q = parse_rational(t.text);
    } catch (const Error& e) {
      throw ParseError(e.what(), t.line, t.col);
    }
    return neg ? Rational(-q) : q;
  }
  std::vector<Rational> vector() {
    expect("[");
    std::vector<Rational> v;
    if (!is_punct("]")) {
      v.push_back(rational());
      while (is_punct(",")) {
        next();
        v.push_back(rational());
      }
    }
    expect("]");
    return v;
  }
  Matrix<Rational> matrix() {
    const Token& start = peek();
    expect("[");
    std::vector<std::vector<Rational>> rows;
    if (!is_punct("]")) {
      rows.push_back(vector());
      while (is_punct(",")) {
        next();
        rows.push_back(vector());
      }
    }
    expect("]");
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    std::vector<Rational> data;
    for (const auto& r : rows) {
      if (r.size() != cols) error(start, "matrix rows have different lengths");
      data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix<Rational>(rows.size(), cols, std::move(data));
  }

  // Real expressions for Kraus entries.
  double expr() {
    double v = term();
    while (is_punct("+") || is_punct("-")) {
      const bool plus = next().text == "+";
      const double r = term();
      v = plus ? v + r : v - r;
    }
    return v;
  }
  double term() {
    double v = unary();
    while (is_punct("*") || is_punct("/")) {
      const bool mul = next().text == "*";
      const double r = unary();
      v = mul ? v * r : v / r;
    }
    return v;
  }
  double unary() {
    if (is_punct("-")) {
      next();
      return -unary();
    }
    if (is_punct("+")) {
      next();
      return unary();
    }
    return primary();
  }
  double primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      try {
        return to_double(parse_rational(t.text));
      } catch (const Error& e) {
        throw ParseError(e.what(), t.line, t.col);
      }
    }
    if (is_punct("(")) {
      next();
      const double v = expr();
      expect(")");
      return v;
    }
    if (t.kind == Tok::Ident) {
      next();
      if (t.text == "pi") return std::numbers::pi;
      if (t.text == "sqrt" || t.text == "cos" || t.text == "sin") {
        expect("(");
        const double a = expr();
        expect(")");
        if (t.text == "sqrt") return std::sqrt(a);
        return t.text == "cos" ? std::cos(a) : std::sin(a);
      }
    }
    error(t, "expected a real expression");
  }
  Complex complex_entry() {
    if (is_punct("[")) {
      next();
      const double re = expr();
      expect(",");
      const double im = expr();
      expect("]");
      return {re, im};
    }
    return {expr(), 0.0};
  }
  CMatrix complex_matrix() {
    const Token& start = peek();
    expect("[");
    std::vector<std::vector<Complex>> rows;
    do {
      if (!rows.empty()) next();
      expect("[");
      std::vector<Complex> row{complex_entry()};
      while (is_punct(",")) {
        next();
        row.push_back(complex_entry());
      }
      expect("]");
      rows.push_back(std::move(row));
    } while (is_punct(","));
    expect("]");
    CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) error(start, "matrix rows have different lengths");
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return m;
  }

  // Types.
  Carrier carrier_term() {
    const Token& t = peek();
    if (is_word("I")) {
      next();
      return Carrier::trivial();
    }
    if (is_word("Hom") && is_punct("(", 1)) {
      next();
      next();
      const Carrier dom = carrier_expr();
      expect(",");
      const Carrier cod = carrier_expr();
      expect(")");
      return at(t, [&] { return homset_carrier(dom, cod); });
    }
    if (is_word("procs") && is_punct("(", 1)) {
      next();
      next();
      std::vector<SystemType> ins, outs;
      while (!is_punct("->")) {
        if (!ins.empty()) expect(",");
        ins.push_back(system_ref());
      }
      expect("->");
      while (!is_punct(")")) {
        if (!outs.empty()) expect(",");
        outs.push_back(system_ref());
      }
      expect(")");
      return at(t, [&] { return theory().procs_carrier(ins, outs); });
    }
    return system_ref().carrier;
  }
  Carrier carrier_expr() {
    std::vector<Carrier> factors{carrier_term()};
    while (is_punct("*")) {
      next();
      factors.push_back(carrier_term());
    }
    return Carrier::product(factors);
  }
  SystemType system_ref() {
    const Token& t = peek();
    const std::string n = name();
    const SystemDecl* s = find_system(n);
    if (!s) error(t, "unknown system '" + n + "'");
    return s->type;
  }
  SystemType port_type() {
    if (is_word("know") && is_punct("(", 1)) {
      next();
      next();
      Carrier c = carrier_expr();
      expect(")");
      return SystemType::inferential(std::move(c));
    }
    return system_ref();
  }
  std::vector<SystemType> type_list() {
    expect("[");
    std::vector<SystemType> out;
    while (!is_punct("]")) {
      if (!out.empty()) expect(",");
      out.push_back(port_type());
    }
    expect("]");
    return out;
  }
  std::vector<std::string> name_list() {
    expect("[");
    std::vector<std::string> out;
    while (!is_punct("]")) {
      if (!out.empty()) expect(",");
      out.push_back(name());
    }
    expect("]");
    return out;
  }
  std::vector<std::string> labels() {
    expect("{");
    std::vector<std::string> out;
    while (!is_punct("}")) {
      if (!out.empty()) expect(",");
      const Token& t = peek();
      if (t.kind != Tok::Ident && t.kind != Tok::Number && t.kind != Tok::String) error(t, "expected a label");
      out.push_back(next().text);
    }
    expect("}");
    if (out.empty()) error(peek(), "a carrier needs at least one element");
    return out;
  }

  // Statements.
  void statement() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) error(t, "expected a declaration");
    if (t.text == "system") return system_decl();
    if (t.text == "procedure") return procedure_decl();
    if (t.text == "map") return map_decl();
    if (t.text == "diagram") return diagram_decl();
    if (t.text == "rep") return rep_decl();
    if (t.text == "fragment") return fragment_decl();
    if (t.text == "correlation") return correlation_decl();
    if (t.text == "pairs") return pairs_decl();
    if (t.text == "bell") return bell_decl();
    if (t.text == "backend") {
      next();
      if (is_word("quantum")) {
        doc_.backend = BackendKind::Quantum;
      } else if (is_word("classical")) {
        doc_.backend = BackendKind::Classical;
      } else {
        error(peek(), "expected 'quantum' or 'classical'");
      }
      next();
      return;
    }
    error(t, "unknown declaration");
  }

  void system_decl() {
    next();
    const Token& nt = peek();
    const std::string n = name();
    check_fresh(nt, "system", n, find_system(n) != nullptr || n == "I");
    SystemType type;
    if (is_word("causal")) {
      next();
      bool classical = true;
      if (is_word("classical")) {
        next();
      } else if (is_word("nonclassical")) {
        next();
        classical = false;
      }
      if (is_word("abstract")) {
        next();
        const std::size_t dim = integer();
        if (dim == 0) error(nt, "dimension must be positive");
        type = SystemType::abstract_causal(n, dim);
      } else {
        type = SystemType::causal(carrier_spec(n, nt), classical);
      }
    } else if (is_word("inferential")) {
      next();
      type = SystemType::inferential(carrier_spec(n, nt));
    } else {
      error(peek(), "expected 'causal' or 'inferential'");
    }
    doc_.systems.push_back(SystemDecl{n, std::move(type)});
  }
  Carrier carrier_spec(const std::string& n, const Token& where) {
    if (is_word("size")) {
      next();
      const std::size_t k = integer();
      if (k == 0) error(where, "a carrier needs at least one element");
      return Carrier(n, k);
    }
    return Carrier(n, labels());
  }

  void procedure_decl() {
    const Token& start = next();
    const Token& nt = peek();
    ProcedureDef def;
    def.decl.name = name();
    const bool taken = std::any_of(doc_.procedures.begin(), doc_.procedures.end(),
                                   [&](const ProcedureDef& p) { return p.decl.name == def.decl.name; }) ||
                       (ctx_ && ctx_->theory().find(def.decl.name));
    check_fresh(nt, "procedure", def.decl.name, taken);
    if (is_reserved_box_name(def.decl.name)) error(nt, "'" + def.decl.name + "' is a reserved name");
    expect(":");
    def.decl.inputs = type_list();
    expect("->");
    def.decl.outputs = type_list();
    for (const auto* side : {&def.decl.inputs, &def.decl.outputs})
      for (const auto& ty : *side)
        if (!ty.is_causal()) error(nt, "procedures act on causal systems");
    if (is_punct("=")) {
      next();
      if (is_word("kraus")) {
        next();
        expect("[");
        KrausChannel ch;
        ch.in_dim = bundle_size(def.decl.inputs);
        ch.out_dim = bundle_size(def.decl.outputs);
        do {
          if (!ch.ops.empty()) next();
          ch.ops.push_back(complex_matrix());
        } while (is_punct(","));
        expect("]");
        at(start, [&] { ch.validate(); });
        def.kraus = std::move(ch);
      } else {
        Matrix<Rational> m = matrix();
        def.table = at(start, [&] {
          return SubstochMap(Carrier::product(carriers(def.decl.inputs)), Carrier::product(carriers(def.decl.outputs)),
                             std::move(m));
        });
      }
    }
    doc_.procedures.push_back(std::move(def));
  }
  static std::vector<Carrier> carriers(const std::vector<SystemType>& ts) {
    std::vector<Carrier> out;
    for (const auto& t : ts) out.push_back(t.carrier);
    return out;
  }

  void map_decl() {
    const Token& start = next();
    const Token& nt = peek();
    MapDecl m;
    m.name = name();
    const bool taken = std::any_of(doc_.maps.begin(), doc_.maps.end(), [&](const MapDecl& x) { return x.name == m.name; });
    check_fresh(nt, "map", m.name, taken);
    if (is_reserved_box_name(m.name)) error(nt, "'" + m.name + "' is a reserved name");
    expect(":");
    m.inputs = type_list();
    expect("->");
    m.outputs = type_list();
    for (const auto* side : {&m.inputs, &m.outputs})
      for (const auto& ty : *side)
        if (!ty.is_inferential()) error(nt, "maps act on inferential systems");
    expect("=");
    Matrix<Rational> entries = matrix();
    m.map = at(start, [&] {
      return SubstochMap(Carrier::product(carriers(m.inputs)), Carrier::product(carriers(m.outputs)), std::move(entries));
    });
    doc_.maps.push_back(std::move(m));
  }

  struct End {
    Token where;
    bool boundary = false;
    std::string id;
    std::size_t port = 0;
  };
  End wire_end() {
    End e{peek(), false, {}, 0};
    const Token& t = peek();
    if (t.kind == Tok::Number && t.text.find('.') != std::string::npos && t.text.find('/') == std::string::npos) {
      next();
      const auto dot = t.text.find('.');
      e.id = t.text.substr(0, dot);
      e.port = std::stoul(t.text.substr(dot + 1));
      return e;
    }
    if (t.kind == Tok::Number || t.kind == Tok::Ident || t.kind == Tok::String) {
      next();
      e.id = t.text;
      e.boundary = t.kind == Tok::Ident && (t.text == "in" || t.text == "out");
    } else {
      error(t, "expected a port reference");
    }
    expect(".");
    e.port = integer();
    return e;
  }

  void diagram_decl() {
    const Token& start = next();
    const Token& nt = peek();
    const std::string n = name();
    check_fresh(nt, "diagram", n, has_name(doc_.diagrams, n));
    expect("{");
    std::vector<SystemType> inputs, outputs;
    std::vector<Box> boxes;
    std::map<std::string, std::size_t> ids;
    std::vector<std::pair<End, End>> raw;
    while (!is_punct("}")) {
      if (is_word("inputs")) {
        next();
        inputs = type_list();
      } else if (is_word("outputs")) {
        next();
        outputs = type_list();
      } else if (is_word("box")) {
        next();
        const Token& it = peek();
        if (it.kind != Tok::Ident && it.kind != Tok::Number) error(it, "expected a box id");
        if (it.kind == Tok::Number && !std::all_of(it.text.begin(), it.text.end(), is_digit)) {
          error(it, "box ids are integers or identifiers");
        }
        if (it.text == "in" || it.text == "out") error(it, "'in' and 'out' name the open ports");
        const std::string id = next().text;
        if (!ids.emplace(id, boxes.size()).second) error(it, "duplicate box id '" + id + "'");
        Box b;
        b.id = id;
        b.name = name();
        expect(":");
        b.inputs = type_list();
        expect("->");
        b.outputs = type_list();
        boxes.push_back(std::move(b));
      } else if (is_word("wire")) {
        next();
        End from = wire_end();
        expect("->");
        End to = wire_end();
        raw.emplace_back(std::move(from), std::move(to));
      } else {
        error(peek(), "expected inputs, outputs, box or wire");
      }
    }
    expect("}");
    std::vector<Wire> wires;
    auto resolve = [&](const End& e, bool source) {
      if (e.boundary) {
        if ((e.id == "in") != source) error(e.where, std::string("'") + e.id + "' cannot be a wire " +
                                                         (source ? "source" : "target"));
        return PortRef{kBoundary, e.port};
      }
      auto it = ids.find(e.id);
      if (it == ids.end()) error(e.where, "unknown box id '" + e.id + "'");
      return PortRef{static_cast<std::int64_t>(it->second), e.port};
    };
    for (const auto& [from, to] : raw) wires.push_back(Wire{resolve(from, true), resolve(to, false)});
    Diagram d = at(start, [&] { return Diagram(inputs, outputs, boxes, wires); });
    doc_.diagrams.push_back(Named<Diagram>{n, std::move(d)});
  }

  void rep_decl() {
    const Token& start = next();
    const Token& nt = peek();
    const std::string n = name();
    check_fresh(nt, "rep", n, has_name(doc_.reps, n));
    expect("{");
    RealistRep rep;
    while (!is_punct("}")) {
      if (is_word("ontic")) {
        next();
        const std::string sys = name();
        expect("=");
        const std::string cname = name();
        rep.ontic.insert_or_assign(sys, Carrier(cname, labels()));
      } else if (is_word("xi")) {
        next();
        const Token& ct = peek();
        const Carrier procs = carrier_expr();
        if (procs.name().rfind("procs(", 0) != 0) error(ct, "xi is keyed by a procs(...) carrier");
        expect("=");
        Matrix<Rational> m = matrix();
        const std::size_t rows = m.rows();
        rep.xi.insert_or_assign(procs.name(), at(start, [&] {
                                  return SubstochMap(procs, Carrier("Xi", rows), std::move(m));
                                }));
      } else {
        error(peek(), "expected ontic or xi");
      }
    }
    expect("}");
    doc_.reps.push_back(Named<RealistRep>{n, std::move(rep)});
  }

  void fragment_decl() {
    const Token& start = next();
    const Token& nt = peek();
    const std::string n = name();
    check_fresh(nt, "fragment", n, has_name(doc_.fragments, n));
    expect("{");
    GPTFragment f;
    while (!is_punct("}")) {
      if (is_word("dim")) {
        next();
        f.dim = integer();
      } else if (is_word("unit")) {
        next();
        f.unit = vector();
      } else if (is_word("state")) {
        next();
        f.states.push_back(vector());
      } else if (is_word("effect")) {
        next();
        f.effects.push_back(vector());
      } else {
        error(peek(), "expected dim, unit, state or effect");
      }
    }
    expect("}");
    at(start, [&] { f.validate(); });
    doc_.fragments.push_back(Named<GPTFragment>{n, std::move(f)});
  }

  void correlation_decl() {
    const Token& start = next();
    const Token& nt = peek();
    const std::string n = name();
    check_fresh(nt, "correlation", n, has_name(doc_.correlations, n));
    expect("{");
    std::optional<Scenario> scenario;
    std::optional<Matrix<Rational>> table;
    while (!is_punct("}")) {
      if (is_word("scenario")) {
        next();
        const Token& st = peek();
        if (st.kind != Tok::String) error(st, "expected a quoted scenario");
        next();
        scenario = at(st, [&] { return parse_scenario(st.text); });
      } else if (is_word("table")) {
        next();
        table = matrix();
      } else {
        error(peek(), "expected scenario or table");
      }
    }
    const Token& close = peek();
    expect("}");
    if (!scenario || !table) error(close, "correlation needs a scenario and a table");
    Correlation c{*scenario, std::move(*table)};
    at(start, [&] { c.validate(); });
    doc_.correlations.push_back(Named<Correlation>{n, std::move(c)});
  }

  void pairs_decl() {
    next();
    const Token& nt = peek();
    const std::string n = name();
    check_fresh(nt, "pairs", n, has_name(doc_.pair_lists, n));
    expect("{");
    PairList list;
    while (!is_punct("}")) {
      expect_word("pair");
      std::string a = name();
      std::string b = name();
      list.emplace_back(std::move(a), std::move(b));
    }
    expect("}");
    doc_.pair_lists.push_back(Named<PairList>{n, std::move(list)});
  }

  void bell_decl() {
    next();
    const Token& nt = peek();
    const std::string n = name();
    check_fresh(nt, "bell", n, has_name(doc_.bell_models, n));
    expect("{");
    BellModel m;
    while (!is_punct("}")) {
      if (is_word("state")) {
        next();
        m.state = name();
      } else if (is_word("alice")) {
        next();
        m.alice = name_list();
      } else if (is_word("bob")) {
        next();
        m.bob = name_list();
      } else {
        error(peek(), "expected state, alice or bob");
      }
    }
    expect("}");
    doc_.bell_models.push_back(Named<BellModel>{n, std::move(m)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Document* ctx_;
  Document doc_;
};

// --- Serializer ----------------------------------------------------------------------

bool plain_ident(const std::string& s) {
  if (s.empty() || !ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), ident_char);
}

std::string quoted(const std::string& s) {
  if (plain_ident(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string label_text(const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), is_digit)) return s;
  return quoted(s);
}

std::string carrier_text(const Carrier& c) {
  if (c.is_hom()) return "Hom(" + carrier_text(c.hom_domain()) + "," + carrier_text(c.hom_codomain()) + ")";
  const auto fs = c.factors();
  if (!fs.empty()) {
    std::string s;
    for (std::size_t i = 0; i < fs.size(); ++i) s += (i ? "*" : "") + carrier_text(fs[i]);
    return s;
  }
  if (c.name().rfind("procs(", 0) == 0) return c.name();
  return quoted(c.name());
}

std::string type_text(const SystemType& t) {
  if (t.is_inferential()) return "know(" + carrier_text(t.carrier) + ")";
  return quoted(t.name());
}

std::string types_text(const std::vector<SystemType>& ts) {
  std::string s = "[";
  for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ", " : "") + type_text(ts[i]);
  return s + "]";
}

std::string names_text(const std::vector<std::string>& ns) {
  std::string s = "[";
  for (std::size_t i = 0; i < ns.size(); ++i) s += (i ? ", " : "") + quoted(ns[i]);
  return s + "]";
}

std::string labels_text(const Carrier& c) {
  if (!c.has_labels()) return "size " + std::to_string(c.size());
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ", " : "") + label_text(c.labels()[i]);
  return s + "}";
}

std::string vector_text(const std::vector<Rational>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + "]";
}

std::string matrix_text(const Matrix<Rational>& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<Rational> row(m.data().begin() + static_cast<std::ptrdiff_t>(r * m.cols()),
                              m.data().begin() + static_cast<std::ptrdiff_t>((r + 1) * m.cols()));
    s += (r ? ", " : "") + vector_text(row);
  }
  return s + "]";
}

std::string real_text(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of("eE") != std::string::npos) {
    // The grammar has no exponents; expand through a fixed-point rendering.
    std::snprintf(buf, sizeof buf, "%.40f", x);
    s = buf;
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (!s.empty() && s[0] == '-') return "-" + s.substr(1);
  return s;
}

std::string complex_matrix_text(const CMatrix& m) {
  std::string s = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    s += r ? ", [" : "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      s += (c ? ", " : "");
      s += z.imag() == 0.0 ? real_text(z.real()) : "[" + real_text(z.real()) + ", " + real_text(z.imag()) + "]";
    }
    s += "]";
  }
  return s + "]";
}

std::string box_id_text(const Diagram& d, std::size_t i, bool use_ids) {
  return use_ids ? d.boxes()[i].id : std::to_string(i);
}

void write_diagram(std::ostringstream& out, const std::string& name, const Diagram& d) {
  // Declared ids are kept when they are unique and well formed.
  bool use_ids = true;
  std::set<std::string> seen;
  for (const auto& b : d.boxes()) {
    const bool numeric = !b.id.empty() && std::all_of(b.id.begin(), b.id.end(), is_digit);
    if (b.id.empty() || (!numeric && !plain_ident(b.id)) || b.id == "in" || b.id == "out" || !seen.insert(b.id).second) {
      use_ids = false;
    }
  }
  out << "diagram " << quoted(name) << " {\n";
  out << "  inputs " << types_text(d.inputs()) << "\n";
  out << "  outputs " << types_text(d.outputs()) << "\n";
  for (std::size_t i = 0; i < d.boxes().size(); ++i) {
    const Box& b = d.boxes()[i];
    out << "  box " << box_id_text(d, i, use_ids) << " " << quoted(b.name) << " : " << types_text(b.inputs) << " -> "
        << types_text(b.outputs) << "\n";
  }
  // Wires ordered by their target: box inputs first, then open outputs.
  std::vector<Wire> wires = d.wires();
  auto key = [](const Wire& w) {
    return std::make_pair(w.to.box == kBoundary ? std::numeric_limits<std::int64_t>::max() : w.to.box, w.to.port);
  };
  std::sort(wires.begin(), wires.end(), [&](const Wire& a, const Wire& b) { return key(a) < key(b); });
  auto end_text = [&](const PortRef& p, const char* boundary) {
    return (p.box == kBoundary ? std::string(boundary) : box_id_text(d, static_cast<std::size_t>(p.box), use_ids)) +
           "." + std::to_string(p.port);
  };
  for (const auto& w : wires) out << "  wire " << end_text(w.from, "in") << " -> " << end_text(w.to, "out") << "\n";
  out << "}\n";
}

}  // namespace

// --- Document ------------------------------------------------------------------------

const SystemDecl* Document::find_system(const std::string& name) const {
  for (const auto& s : systems)
    if (s.name == name) return &s;
  return nullptr;
}

const Diagram* Document::find_diagram(const std::string& name) const {
  for (const auto& d : diagrams)
    if (d.name == name) return &d.value;
  return nullptr;
}

OperationalTheory Document::theory() const {
  OperationalTheory th;
  for (const auto& p : procedures) th.declare(p.decl);
  return th;
}

Library Document::library() const {
  Library lib;
  for (const auto& m : maps) lib.add(m.name, m.map);
  return lib;
}

PredictionMap Document::prediction_map() const {
  BackendKind kind = BackendKind::Classical;
  if (backend) {
    kind = *backend;
  } else if (std::any_of(procedures.begin(), procedures.end(), [](const ProcedureDef& p) { return p.kraus.has_value(); })) {
    kind = BackendKind::Quantum;
  }
  PredictionMap pm(theory(), kind, library());
  for (const auto& p : procedures) {
    if (kind == BackendKind::Classical && p.table) pm.set_classical(p.decl.name, *p.table);
    if (kind == BackendKind::Quantum && p.kraus) pm.set_quantum(p.decl.name, *p.kraus);
  }
  return pm;
}

namespace {

template <class T, class Same>
void merge_named(std::vector<T>& into, const std::vector<T>& from, const char* kind, Same same) {
  for (const auto& item : from) {
    auto it = std::find_if(into.begin(), into.end(), [&](const T& x) { return x.name == item.name; });
    if (it == into.end()) {
      into.push_back(item);
    } else if (!same(*it, item)) {
      fail(ErrorCode::ConfigError, std::string(kind) + " '" + item.name + "' is declared differently in two files");
    }
  }
}

}  // namespace

void Document::merge(const Document& other) {
  merge_named(systems, other.systems, "system", [](const SystemDecl& a, const SystemDecl& b) { return a.type == b.type; });
  for (const auto& p : other.procedures) {
    auto it = std::find_if(procedures.begin(), procedures.end(),
                           [&](const ProcedureDef& x) { return x.decl.name == p.decl.name; });
    if (it == procedures.end()) {
      procedures.push_back(p);
    } else if (it->decl.inputs != p.decl.inputs || it->decl.outputs != p.decl.outputs) {
      fail(ErrorCode::ConfigError, "procedure '" + p.decl.name + "' is declared differently in two files");
    } else {
      if (!it->table) it->table = p.table;
      if (!it->kraus) it->kraus = p.kraus;
    }
  }
  merge_named(maps, other.maps, "map", [](const MapDecl& a, const MapDecl& b) { return a.map == b.map; });
  auto never = [](const auto&, const auto&) { return false; };
  merge_named(diagrams, other.diagrams, "diagram", never);
  merge_named(reps, other.reps, "rep", never);
  merge_named(fragments, other.fragments, "fragment", never);
  merge_named(correlations, other.correlations, "correlation", never);
  merge_named(pair_lists, other.pair_lists, "pairs", never);
  merge_named(bell_models, other.bell_models, "bell", never);
  if (other.backend) backend = other.backend;
}

Document parse_document(std::string_view text, const Document* context) {
  return Parser(lex(text), context).run();
}

Document load_document(const std::string& path, const Document* context) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_document(buf.str(), context);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

std::string serialize_document(const Document& d) {
  std::ostringstream out;
  out << kHeader << "\n";
  for (const auto& s : d.systems) {
    const SystemType& t = s.type;
    out << "system " << quoted(s.name) << " ";
    if (t.is_inferential()) {
      out << "inferential " << labels_text(t.carrier);
    } else if (t.abstract) {
      out << "causal abstract " << t.size();
    } else {
      out << (t.classical ? "causal " : "causal nonclassical ") << labels_text(t.carrier);
    }
    out << "\n";
  }
  for (const auto& p : d.procedures) {
    out << "procedure " << quoted(p.decl.name) << " : " << types_text(p.decl.inputs) << " -> "
        << types_text(p.decl.outputs);
    if (p.kraus) {
      out << " = kraus [";
      for (std::size_t i = 0; i < p.kraus->ops.size(); ++i) out << (i ? ", " : "") << complex_matrix_text(p.kraus->ops[i]);
      out << "]";
    } else if (p.table) {
      out << " = " << matrix_text(p.table->entries());
    }
    out << "\n";
  }
  for (const auto& m : d.maps) {
    out << "map " << quoted(m.name) << " : " << types_text(m.inputs) << " -> " << types_text(m.outputs) << " = "
        << matrix_text(m.map.entries()) << "\n";
  }
  for (const auto& dg : d.diagrams) write_diagram(out, dg.name, dg.value);
  for (const auto& r : d.reps) {
    out << "rep " << quoted(r.name) << " {\n";
    for (const auto& [sys, c] : r.value.ontic) out << "  ontic " << quoted(sys) << " = " << quoted(c.name()) << " " << labels_text(c) << "\n";
    for (const auto& [procs, m] : r.value.xi) out << "  xi " << procs << " = " << matrix_text(m.entries()) << "\n";
    out << "}\n";
  }
  for (const auto& f : d.fragments) {
    out << "fragment " << quoted(f.name) << " {\n  dim " << f.value.dim << "\n  unit " << vector_text(f.value.unit) << "\n";
    for (const auto& s : f.value.states) out << "  state " << vector_text(s) << "\n";
    for (const auto& e : f.value.effects) out << "  effect " << vector_text(e) << "\n";
    out << "}\n";
  }
  for (const auto& c : d.correlations) {
    out << "correlation " << quoted(c.name) << " {\n  scenario \"" << c.value.scenario.describe() << "\"\n  table "
        << matrix_text(c.value.p) << "\n}\n";
  }
  for (const auto& p : d.pair_lists) {
    out << "pairs " << quoted(p.name) << " {\n";
    for (const auto& [a, b] : p.value) out << "  pair " << quoted(a) << " " << quoted(b) << "\n";
    out << "}\n";
  }
  for (const auto& b : d.bell_models) {
    out << "bell " << quoted(b.name) << " {\n  state " << quoted(b.value.state) << "\n  alice " << names_text(b.value.alice)
        << "\n  bob " << names_text(b.value.bob) << "\n}\n";
  }
  if (d.backend) out << "backend " << (*d.backend == BackendKind::Quantum ? "quantum" : "classical") << "\n";
  return out.str();
}

namespace {

void collect_base(const Carrier& c, std::vector<Carrier>& out) {
  if (c.is_hom()) {
    collect_base(c.hom_domain(), out);
    collect_base(c.hom_codomain(), out);
    return;
  }
  const auto fs = c.factors();
  if (!fs.empty()) {
    for (const auto& f : fs) collect_base(f, out);
    return;
  }
  if (c.name().rfind("procs(", 0) == 0 || (c.name() == "I" && c.size() == 1)) return;
  if (std::none_of(out.begin(), out.end(), [&](const Carrier& x) { return x.name() == c.name(); })) out.push_back(c);
}

}  // namespace

Document document_for(const Diagram& d, const std::string& name, const Library& lib, const OperationalTheory* theory) {
  Document doc;
  std::vector<SystemType> causal;
  std::vector<Carrier> inferential;
  auto note = [&](const SystemType& t) {
    if (t.is_causal()) {
      if (std::none_of(causal.begin(), causal.end(), [&](const SystemType& x) { return x.name() == t.name(); })) {
        causal.push_back(t);
      }
    } else {
      collect_base(t.carrier, inferential);
    }
  };
  if (theory) {
    for (const auto& p : theory->procedures()) {
      for (const auto& t : p.inputs) note(t);
      for (const auto& t : p.outputs) note(t);
      doc.procedures.push_back(ProcedureDef{p, std::nullopt, std::nullopt});
    }
  }
  for (const auto& t : d.inputs()) note(t);
  for (const auto& t : d.outputs()) note(t);
  for (const auto& b : d.boxes()) {
    for (const auto& t : b.inputs) note(t);
    for (const auto& t : b.outputs) note(t);
    const bool procedure = theory && theory->find(b.name);
    if (!procedure && !is_reserved_box_name(b.name)) {
      const SubstochMap* m = lib.find(b.name);
      if (m && std::none_of(doc.maps.begin(), doc.maps.end(), [&](const MapDecl& x) { return x.name == b.name; })) {
        doc.maps.push_back(MapDecl{b.name, b.inputs, b.outputs, *m});
      }
    }
  }
  for (const auto& t : causal) doc.systems.push_back(SystemDecl{t.name(), t});
  for (const auto& c : inferential) {
    if (!doc.find_system(c.name())) doc.systems.push_back(SystemDecl{c.name(), SystemType::inferential(c)});
  }
  doc.diagrams.push_back(Named<Diagram>{name, d});
  return doc;
}

}  // namespace ciengine
