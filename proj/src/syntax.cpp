#include "decolog/syntax.hpp"

#include <fstream>
#include <sstream>

namespace decolog {

namespace {

// ------------------------------------------------------------------ lexer

struct Token {
  enum class Kind { word, sym, end } kind = Kind::end;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

bool word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '\'';
}

// Unicode spellings and their ASCII equivalents.
struct Alias {
  std::string_view utf8;
  std::string_view ascii;
};
constexpr Alias kAliases[] = {
    {"∘", "."}, {"≈", "~"}, {"≡", "=="}, {"⟨", "<"},
    {"⟩", ">"}, {"→", "->"}, {"×", "*"},
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto push = [&](Token::Kind k, std::string text, std::size_t l, std::size_t c) {
    out.push_back({k, std::move(text), l, c});
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (word_char(c)) {
      const std::size_t start = i;
      while (i < src.size() && word_char(src[i])) ++i;
      push(Token::Kind::word, std::string(src.substr(start, i - start)), line, col);
      col += i - start;
      continue;
    }
    const std::string_view rest = src.substr(i);
    if (rest.starts_with("•")) {
      push(Token::Kind::sym, "(", line, col);
      push(Token::Kind::sym, ")", line, col);
      i += std::string_view("•").size();
      ++col;
      continue;
    }
    bool aliased = false;
    for (const auto& a : kAliases) {
      if (rest.starts_with(a.utf8)) {
        push(Token::Kind::sym, std::string(a.ascii), line, col);
        i += a.utf8.size();
        ++col;
        aliased = true;
        break;
      }
    }
    if (aliased) continue;
    if (rest.starts_with("==") || rest.starts_with("->")) {
      push(Token::Kind::sym, std::string(rest.substr(0, 2)), line, col);
      i += 2;
      col += 2;
      continue;
    }
    if (std::string_view("()<>,.*=~:{}@;|").find(c) != std::string_view::npos) {
      push(Token::Kind::sym, std::string(1, c), line, col);
      ++i;
      ++col;
      continue;
    }
    throw ParseError(line, col, "unexpected character '" + std::string(1, c) + "'");
  }
  push(Token::Kind::end, "", line, col);
  return out;
}

// ----------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::string_view src, const Theory* theory)
      : toks_(lex(src)), theory_(theory) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Token::Kind::end; }
  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::sym && peek(ahead).text == s;
  }
  bool is_word(std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::word;
  }
  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    return is_word(ahead) && peek(ahead).text == w;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.col, msg);
  }

  std::string describe(const Token& t) const {
    return t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
  }
  void expect(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()));
    next();
  }
  const Token& expect_word(std::string_view what) {
    if (!is_word()) fail("expected " + std::string(what) + ", found " + describe(peek()));
    return next();
  }
  bool accept(std::string_view s) {
    if (!is_sym(s)) return false;
    next();
    return true;
  }

  // Semantic errors get the position of the construct that caused them.
  template <class F>
  auto located(const Token& at, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw Error(e.code(), std::to_string(at.line) + ":" + std::to_string(at.col) +
                                ": " + e.what());
    }
  }

  void set_theory(const Theory* t) { theory_ = t; }
  const Theory& theory() const { return *theory_; }

  // type := atom ('*' type)?
  Type type() {
    Type left = type_atom();
    if (accept("*")) return Type::prod(left, type());
    return left;
  }

  Type type_atom() {
    if (accept("(")) {
      Type t = type();
      expect(")");
      return t;
    }
    const Token& w = expect_word("a type");
    if (w.text == "Unit") return Type::unit();
    if (!theory_->has_base_type(w.text))
      throw Error(Errc::unknown_base_type,
                  std::to_string(w.line) + ":" + std::to_string(w.col) +
                      ": undeclared base type '" + w.text + "'");
    return Type::base(w.text);
  }

  // term := factor (('.'|'∘') factor)*, returned as a raw tree.
  Term raw_term() {
    Term t = factor();
    while (accept(".")) t = Term::compose_raw(t, factor());
    return t;
  }

  Term factor() {
    if (accept("<")) {
      Term l = raw_term();
      expect(",");
      Term r = raw_term();
      expect(">");
      return Term::pair(l, r);
    }
    if (accept("(")) {
      Term t = raw_term();
      expect(")");
      return t;
    }
    const Token& w = expect_word("a term");
    if (w.text == "id" || w.text == "bang") {
      expect("(");
      Type t = type();
      expect(")");
      return w.text == "id" ? Term::id(t) : Term::bang(t);
    }
    if (w.text == "p1" || w.text == "p2") {
      expect("(");
      Type a = type();
      expect(",");
      Type b = type();
      expect(")");
      return w.text == "p1" ? Term::proj1(a, b) : Term::proj2(a, b);
    }
    if (const Definition* d = theory_->find_definition(w.text)) return d->body;
    if (theory_->find_op(w.text)) return Term::op(w.text);
    throw Error(Errc::undeclared_symbol, std::to_string(w.line) + ":" +
                                             std::to_string(w.col) +
                                             ": undeclared symbol '" + w.text + "'");
  }

  Term term() {
    const Token& at = peek();
    Term raw = raw_term();
    located(at, [&] { return wf_term(*theory_, raw); });
    return normalize(raw);
  }

  // equation := [strong|weak] [':'] term ('=='|'~') term
  Equation equation() {
    const Token& at = peek();
    std::optional<Strength> keyword;
    if ((is_word("strong") || is_word("weak")) && !is_sym(".", 1)) {
      keyword = next().text == "strong" ? Strength::strong : Strength::weak;
      accept(":");
    }
    Equation eq;
    eq.lhs = term();
    const Token& op = peek();
    if (accept("==")) eq.strength = Strength::strong;
    else if (accept("~")) eq.strength = Strength::weak;
    else fail("expected '==' or '~', found " + describe(op));
    if (keyword && *keyword != eq.strength)
      fail_at(op, "operator does not match the '" +
                      std::string(strength_name(*keyword)) + "' keyword");
    eq.rhs = term();
    located(at, [&] { return check_equation_wf(*theory_, eq); });
    return eq;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Theory* theory_;
};

const std::string_view kDecorationWords[] = {"pure", "propagator", "observer",
                                             "catcher", "modifier"};

}  // namespace

// ----------------------------------------------------------------- theory

Theory parse_theory(std::string_view text) {
  Parser p(text, nullptr);
  if (!p.is_word("effect")) p.fail("a theory file must start with 'effect'");
  p.next();
  const Token& eff = p.expect_word("an effect");
  auto effect = parse_effect(eff.text);
  if (!effect) Parser::fail_at(eff, "unknown effect '" + eff.text + "'");
  Theory theory(*effect);
  p.set_theory(&theory);

  while (!p.at_end()) {
    const Token& kw = p.expect_word("a stanza keyword");
    if (kw.text == "type") {
      const Token& name = p.expect_word("a type name");
      p.located(name, [&] { theory.add_base_type(name.text); });
    } else if (kw.text == "op") {
      const Token& name = p.expect_word("an operation name");
      p.expect(":");
      Type dom = p.type();
      p.expect("->");
      Type cod = p.type();
      const Token& deco = p.expect_word("a decoration");
      bool known = false;
      for (auto w : kDecorationWords) known = known || w == deco.text;
      if (!known) Parser::fail_at(deco, "unknown decoration '" + deco.text + "'");
      p.located(deco, [&] {
        theory.add_op(
            OpDecl{name.text, dom, cod, parse_decoration(deco.text, *effect)});
      });
    } else if (kw.text == "def") {
      const Token& name = p.expect_word("a definition name");
      p.expect("=");
      Term body = p.term();
      p.located(name, [&] { theory.add_definition(name.text, body); });
    } else if (kw.text == "axiom") {
      std::string name;
      if (p.is_word() && p.is_sym(":", 1) && !p.is_word("strong") &&
          !p.is_word("weak")) {
        name = p.next().text;
        p.next();
      }
      Equation eq = p.equation();
      p.located(kw, [&] { theory.add_axiom(eq, name); });
    } else if (kw.text == "effect") {
      Parser::fail_at(kw, "'effect' may appear only once");
    } else {
      Parser::fail_at(kw, "unknown stanza '" + kw.text + "'");
    }
    p.accept(";");
  }
  return theory;
}

namespace {

std::string equation_text(const Equation& eq) {
  return std::string(strength_name(eq.strength)) + " " + eq.lhs.str() +
         (eq.strength == Strength::strong ? " == " : " ~ ") + eq.rhs.str();
}

}  // namespace

std::string print_theory(const Theory& theory) {
  std::ostringstream out;
  out << "effect " << effect_name(theory.effect()) << "\n";
  for (const auto& t : theory.base_types()) out << "type " << t << "\n";
  for (const auto& op : theory.ops())
    out << "op " << op.name << " : " << op.dom.str() << " -> " << op.cod.str()
        << " " << decoration_name(op.decoration, theory.effect()) << "\n";
  for (const auto& d : theory.definitions())
    out << "def " << d.name << " = " << d.body.str() << "\n";
  for (const auto& ax : theory.axioms())
    out << "axiom " << ax.name << ": " << equation_text(ax.equation) << "\n";
  return out.str();
}

Type parse_type(const Theory& theory, std::string_view text) {
  Parser p(text, &theory);
  Type t = p.type();
  if (!p.at_end()) p.fail("unexpected " + p.describe(p.peek()));
  return t;
}

Term parse_term(const Theory& theory, std::string_view text) {
  Parser p(text, &theory);
  Term t = p.term();
  if (!p.at_end()) p.fail("unexpected " + p.describe(p.peek()));
  return t;
}

Equation parse_equation(const Theory& theory, std::string_view text) {
  Parser p(text, &theory);
  Equation eq = p.equation();
  if (!p.at_end()) p.fail("unexpected " + p.describe(p.peek()));
  return eq;
}

// ------------------------------------------------------------------ model

namespace {

class ModelReader {
 public:
  ModelReader(Parser& p, FiniteModel& m) : p_(p), m_(m) {}

  [[noreturn]] void mismatch(const Token& at, const std::string& msg) const {
    throw Error(Errc::model_mismatch,
                std::to_string(at.line) + ":" + std::to_string(at.col) + ": " + msg);
  }

  FiniteSet set() {
    FiniteSet s;
    p_.expect("{");
    if (!p_.is_sym("}")) {
      do {
        const Token& w = p_.expect_word("an element label");
        if (s.index_of(w.text)) mismatch(w, "duplicate element '" + w.text + "'");
        s.labels.push_back(w.text);
      } while (p_.accept(","));
    }
    p_.expect("}");
    return s;
  }

  std::size_t value(const Type& t) {
    switch (t.kind()) {
      case Type::Kind::unit:
        p_.expect("(");
        p_.expect(")");
        return 0;
      case Type::Kind::base: {
        const Token& w = p_.expect_word("a value of " + t.str());
        auto i = m_.carrier(t.name()).index_of(w.text);
        if (!i) mismatch(w, "'" + w.text + "' is not in the carrier of " + t.name());
        return *i;
      }
      case Type::Kind::prod: {
        p_.expect("(");
        const std::size_t a = value(t.left());
        p_.expect(",");
        const std::size_t b = value(t.right());
        p_.expect(")");
        return a * m_.size_of(t.right()) + b;
      }
    }
    return 0;
  }

  std::size_t effect_value() {
    const Token& w = p_.expect_word("an effect element");
    auto i = m_.effect_carrier().index_of(w.text);
    if (!i) mismatch(w, "'" + w.text + "' is not in the effect carrier");
    return *i;
  }

  // ok/exc tagged value in A+Exc; a bare value means ok.
  std::size_t tagged(const Type& t) {
    if (p_.is_word("exc") && !is_plain_value(t)) {
      p_.next();
      return m_.size_of(t) + effect_value();
    }
    if (p_.is_word("ok") && !is_plain_value(t)) p_.next();
    return value(t);
  }

  // "ok"/"exc" may also be carrier labels; a tag is recognized only when a
  // value follows it.
  bool is_plain_value(const Type& t) const {
    if (t.kind() != Type::Kind::base) return false;
    return !(p_.is_word(1) || p_.is_sym("(", 1));
  }

  std::size_t stateful(const Type& t) {
    const std::size_t v = value(t);
    p_.expect("@");
    return v * m_.effect_carrier().size() + effect_value();
  }

  std::size_t input(const Type& dom, Decoration rank) {
    if (m_.effect() == Effect::exceptions)
      return rank.rank == 2 ? tagged(dom) : value(dom);
    return rank.rank == 0 ? value(dom) : stateful(dom);
  }

  std::size_t output(const Type& cod, Decoration rank) {
    if (m_.effect() == Effect::exceptions)
      return rank.rank == 0 ? value(cod) : tagged(cod);
    return rank.rank == 2 ? stateful(cod) : value(cod);
  }

 private:
  Parser& p_;
  FiniteModel& m_;
};

}  // namespace

FiniteModel parse_model(const Theory& theory, std::string_view text) {
  Parser p(text, &theory);
  FiniteModel model(theory);
  ModelReader r(p, model);
  std::vector<bool> carrier_set(theory.base_types().size(), false);
  std::vector<bool> table_set(theory.ops().size(), false);
  bool tables_started = false;

  while (!p.at_end()) {
    const Token& kw = p.expect_word("a stanza keyword");
    if (kw.text == "carrier") {
      const Token& name = p.expect_word("a type name");
      p.expect("=");
      FiniteSet s = r.set();
      if (tables_started) r.mismatch(name, "carriers must precede tables");
      bool found = false;
      for (std::size_t i = 0; i < theory.base_types().size(); ++i) {
        if (theory.base_types()[i] == name.text) {
          if (carrier_set[i]) r.mismatch(name, "carrier of '" + name.text + "' given twice");
          carrier_set[i] = found = true;
        }
      }
      if (!found) r.mismatch(name, "theory has no base type '" + name.text + "'");
      if (s.size() == 0) r.mismatch(name, "carrier of '" + name.text + "' is empty");
      model.set_carrier(name.text, std::move(s));
    } else if (kw.text == "effectcarrier") {
      p.expect("=");
      FiniteSet s = r.set();
      if (tables_started) r.mismatch(kw, "carriers must precede tables");
      if (s.size() == 0) r.mismatch(kw, "effect carrier is empty");
      model.set_effect_carrier(std::move(s));
    } else if (kw.text == "table") {
      if (!tables_started) {
        for (std::size_t i = 0; i < carrier_set.size(); ++i)
          if (!carrier_set[i])
            r.mismatch(kw, "no carrier for base type '" + theory.base_types()[i] + "'");
        tables_started = true;
      }
      const Token& name = p.expect_word("an operation name");
      auto idx = theory.op_index(name.text);
      if (!idx) r.mismatch(name, "theory has no operation '" + name.text + "'");
      if (table_set[*idx]) r.mismatch(name, "table for '" + name.text + "' given twice");
      table_set[*idx] = true;
      const OpDecl& op = theory.ops()[*idx];
      OperationTable t;
      t.effect = theory.effect();
      t.rank = op.decoration;
      t.dom_size = model.size_of(op.dom);
      t.cod_size = model.size_of(op.cod);
      t.effect_size = model.effect_carrier().size();
      constexpr std::uint32_t kUnset = ~std::uint32_t{0};
      t.out.assign(t.input_count(), kUnset);
      p.expect("{");
      while (!p.is_sym("}")) {
        const Token& row = p.peek();
        const std::size_t in = r.input(op.dom, op.decoration);
        p.expect("->");
        const std::size_t out = r.output(op.cod, op.decoration);
        if (t.out[in] != kUnset)
          r.mismatch(row, "row for input '" + input_label(model, op.decoration, op.dom, in) +
                              "' of '" + op.name + "' given twice");
        t.out[in] = static_cast<std::uint32_t>(out);
        if (!p.accept(";")) p.accept(",");
      }
      p.expect("}");
      for (std::size_t i = 0; i < t.out.size(); ++i)
        if (t.out[i] == kUnset)
          r.mismatch(name, "table for '" + op.name + "' has no row for input '" +
                               input_label(model, op.decoration, op.dom, i) + "'");
      model.set_table(*idx, std::move(t));
    } else {
      Parser::fail_at(kw, "unknown stanza '" + kw.text + "'");
    }
  }
  check_model(model, theory);
  return model;
}

namespace {

std::string set_text(const FiniteSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s.labels[i];
  return out + "}";
}

}  // namespace

std::string print_model(const Theory& theory, const FiniteModel& model) {
  std::ostringstream out;
  for (const auto& t : theory.base_types())
    out << "carrier " << t << " = " << set_text(model.carrier(t)) << "\n";
  out << "effectcarrier = " << set_text(model.effect_carrier()) << "\n";
  for (std::size_t i = 0; i < theory.ops().size(); ++i) {
    const OpDecl& op = theory.ops()[i];
    const OperationTable& t = model.table(i);
    out << "\ntable " << op.name << " {\n";
    for (std::size_t in = 0; in < t.out.size(); ++in)
      out << "  " << input_label(model, op.decoration, op.dom, in) << " -> "
          << output_label(model, op.decoration, op.cod, t.out[in]) << "\n";
    out << "}\n";
  }
  return out.str();
}

// ------------------------------------------------------------- derivation

namespace {

Derivation derivation_node(Parser& p) {
  p.expect("(");
  const Token& name = p.expect_word("a rule name");
  auto rule = parse_rule(name.text);
  if (!rule) Parser::fail_at(name, "unknown rule '" + name.text + "'");
  Derivation d;
  d.rule = *rule;
  while (!p.is_sym(")")) {
    if (p.at_end()) p.fail("unbalanced '(' in derivation");
    if (p.is_sym("(")) {
      d.premises.push_back(derivation_node(p));
    } else if (p.is_word() && p.is_sym("=", 1)) {
      const Token& key = p.next();
      p.next();
      if (key.text == "side") {
        const Token& v = p.expect_word("1 or 2");
        if (v.text != "1" && v.text != "2")
          Parser::fail_at(v, "side must be 1 or 2");
        d.side = v.text == "1" ? 1 : 2;
      } else {
        for (const auto& [k, _] : d.params)
          if (k == key.text) Parser::fail_at(key, "parameter '" + key.text + "' given twice");
        d.params.emplace_back(key.text, p.term());
      }
    } else if (d.rule == RuleId::axiom && d.axiom.empty() && p.is_word() &&
               !p.is_sym(".", 1) && !p.is_sym("==", 1) && !p.is_sym("~", 1) &&
               !p.is_sym(":", 1)) {
      d.axiom = p.next().text;
    } else {
      if (d.claim) p.fail("a node has at most one stated conclusion");
      d.claim = p.equation();
    }
  }
  p.expect(")");
  return d;
}

void print_node(const Derivation& d, std::size_t indent, std::string& out) {
  out += "(";
  out += rule_name(d.rule);
  if (!d.axiom.empty()) out += " " + d.axiom;
  for (const auto& [k, v] : d.params) out += " " + k + "=" + v.str();
  if (d.side != 0) out += " side=" + std::to_string(d.side);
  if (d.claim) out += " " + equation_text(*d.claim);
  for (const auto& prem : d.premises) {
    out += "\n" + std::string(indent + 2, ' ');
    print_node(prem, indent + 2, out);
  }
  out += ")";
}

}  // namespace

Derivation parse_derivation(const Theory& theory, std::string_view text) {
  Parser p(text, &theory);
  Derivation d = derivation_node(p);
  if (!p.at_end()) p.fail("unexpected " + p.describe(p.peek()) + " after derivation");
  return d;
}

std::string print_derivation(const Derivation& d) {
  std::string out;
  print_node(d, 0, out);
  return out + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace decolog
