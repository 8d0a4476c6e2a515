#include "decolog/calculus.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace decolog {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::undeclared_symbol: return "UndeclaredSymbol";
    case Errc::composition_type_mismatch: return "CompositionTypeMismatch";
    case Errc::pair_domain_mismatch: return "PairDomainMismatch";
    case Errc::pair_rank_violation: return "PairRankViolation";
    case Errc::side_type_mismatch: return "SideTypeMismatch";
    case Errc::duplicate_symbol: return "DuplicateSymbol";
    case Errc::reserved_name: return "ReservedName";
    case Errc::unknown_base_type: return "UnknownBaseType";
    case Errc::effect_keyword_mismatch: return "EffectKeywordMismatch";
    case Errc::rank_not_increasing: return "RankNotIncreasing";
    case Errc::bounds_too_large: return "BoundsTooLarge";
    case Errc::model_mismatch: return "ModelMismatch";
    case Errc::rule_misapplied: return "RuleMisapplied";
    case Errc::conclusion_mismatch: return "ConclusionMismatch";
    case Errc::ill_formed_parameter: return "IllFormedParameter";
    case Errc::not_dualizable: return "NotDualizable";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

std::string_view effect_name(Effect effect) noexcept {
  return effect == Effect::exceptions ? "exceptions" : "states";
}

std::optional<Effect> parse_effect(std::string_view word) noexcept {
  if (word == "exceptions") return Effect::exceptions;
  if (word == "states") return Effect::states;
  return std::nullopt;
}

Effect dual(Effect effect) noexcept {
  return effect == Effect::exceptions ? Effect::states : Effect::exceptions;
}

namespace {

constexpr std::array<std::string_view, 3> kExceptionRanks = {
    "pure", "propagator", "catcher"};
constexpr std::array<std::string_view, 3> kStateRanks = {"pure", "observer",
                                                         "modifier"};

}  // namespace

std::string_view decoration_name(Decoration deco, Effect effect) noexcept {
  const auto& names =
      effect == Effect::exceptions ? kExceptionRanks : kStateRanks;
  return deco.rank < names.size() ? names[deco.rank] : "invalid";
}

Decoration parse_decoration(std::string_view word, Effect effect) {
  const auto& mine =
      effect == Effect::exceptions ? kExceptionRanks : kStateRanks;
  const auto& other =
      effect == Effect::exceptions ? kStateRanks : kExceptionRanks;
  for (std::uint8_t r = 0; r < mine.size(); ++r)
    if (mine[r] == word) return Decoration{r};
  if (std::find(other.begin(), other.end(), word) != other.end())
    throw Error(Errc::effect_keyword_mismatch,
                "decoration '" + std::string(word) + "' is not legal under effect " +
                    std::string(effect_name(effect)));
  throw Error(Errc::effect_keyword_mismatch,
              "unknown decoration '" + std::string(word) + "'");
}

// ---------------------------------------------------------------- Type

struct Type::Node {
  Kind kind;
  std::string name;
  std::vector<Type> children;
};

Type::Type() : Type(unit()) {}

Type Type::base(std::string name) {
  return Type(std::make_shared<const Node>(Node{Kind::base, std::move(name), {}}));
}

Type Type::unit() {
  static const Type u(std::make_shared<const Node>(Node{Kind::unit, {}, {}}));
  return u;
}

Type Type::prod(Type left, Type right) {
  return Type(std::make_shared<const Node>(
      Node{Kind::prod, {}, {std::move(left), std::move(right)}}));
}

Type::Kind Type::kind() const noexcept { return node_->kind; }
const std::string& Type::name() const { return node_->name; }
const Type& Type::left() const { return node_->children.at(0); }
const Type& Type::right() const { return node_->children.at(1); }

std::string Type::str() const {
  switch (kind()) {
    case Kind::base: return name();
    case Kind::unit: return "Unit";
    case Kind::prod: {
      std::string l = left().str();
      if (left().kind() == Kind::prod) l = "(" + l + ")";
      return l + " * " + right().str();
    }
  }
  return {};
}

bool operator==(const Type& a, const Type& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Type::Kind::base: return a.name() <=> b.name();
    case Type::Kind::unit: return std::strong_ordering::equal;
    case Type::Kind::prod:
      if (auto c = a.left() <=> b.left(); c != 0) return c;
      return a.right() <=> b.right();
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- Term

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<Type> types;
  std::vector<Term> children;
};

Term::Term() : Term(id(Type::unit())) {}

Term Term::id(Type type) {
  return Term(std::make_shared<const Node>(Node{Kind::id, {}, {std::move(type)}, {}}));
}

Term Term::op(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::op, std::move(name), {}, {}}));
}

Term Term::pair(Term left, Term right) {
  return Term(std::make_shared<const Node>(
      Node{Kind::pair, {}, {}, {std::move(left), std::move(right)}}));
}

Term Term::proj1(Type left, Type right) {
  return Term(std::make_shared<const Node>(
      Node{Kind::proj1, {}, {std::move(left), std::move(right)}, {}}));
}

Term Term::proj2(Type left, Type right) {
  return Term(std::make_shared<const Node>(
      Node{Kind::proj2, {}, {std::move(left), std::move(right)}, {}}));
}

Term Term::bang(Type type) {
  if (type.is_unit()) return id(Type::unit());
  return Term(std::make_shared<const Node>(Node{Kind::bang, {}, {std::move(type)}, {}}));
}

Term Term::compose_raw(Term after, Term first) {
  return Term(std::make_shared<const Node>(
      Node{Kind::comp, {}, {}, {std::move(first), std::move(after)}}));
}

Term Term::spine(std::vector<Term> factors, const Type& empty) {
  if (factors.empty()) return id(empty);
  if (factors.size() == 1) return std::move(factors.front());
  return Term(std::make_shared<const Node>(Node{Kind::comp, {}, {}, std::move(factors)}));
}

Term Term::compose(const Term& after, const Term& first) {
  Term a = after.is_normal() ? after : normalize(after);
  Term f = first.is_normal() ? first : normalize(first);
  if (a.kind() == Kind::id) return f;
  if (f.kind() == Kind::id) return a;
  std::vector<Term> factors = f.spine_factors();
  for (auto& t : a.spine_factors()) factors.push_back(std::move(t));
  return spine(std::move(factors), Type::unit());
}

Term::Kind Term::kind() const noexcept { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Type& Term::type() const { return node_->types.at(0); }
const Type& Term::left_type() const { return node_->types.at(0); }
const Type& Term::right_type() const { return node_->types.at(1); }
const Term& Term::left() const { return node_->children.at(0); }
const Term& Term::right() const { return node_->children.at(1); }
const std::vector<Term>& Term::factors() const { return node_->children; }

std::vector<Term> Term::spine_factors() const {
  switch (kind()) {
    case Kind::comp: return factors();
    case Kind::id: return {};
    default: return {*this};
  }
}

bool Term::is_normal() const {
  switch (kind()) {
    case Kind::bang: return !type().is_unit();
    case Kind::pair: return left().is_normal() && right().is_normal();
    case Kind::comp:
      if (factors().size() < 2) return false;
      for (const auto& f : factors()) {
        if (f.kind() == Kind::comp || f.kind() == Kind::id || !f.is_normal())
          return false;
      }
      return true;
    default: return true;
  }
}

std::string Term::str() const {
  switch (kind()) {
    case Kind::id: return "id(" + type().str() + ")";
    case Kind::op: return name();
    case Kind::bang: return "bang(" + type().str() + ")";
    case Kind::proj1:
      return "p1(" + left_type().str() + "," + right_type().str() + ")";
    case Kind::proj2:
      return "p2(" + left_type().str() + "," + right_type().str() + ")";
    case Kind::pair: return "<" + left().str() + "," + right().str() + ">";
    case Kind::comp: {
      std::string out;
      for (auto it = factors().rbegin(); it != factors().rend(); ++it) {
        if (!out.empty()) out += "∘";
        out += it->str();
      }
      return out;
    }
  }
  return {};
}

bool operator==(const Term& a, const Term& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
  const auto& at = a.node_->types;
  const auto& bt = b.node_->types;
  if (auto c = std::lexicographical_compare_three_way(at.begin(), at.end(),
                                                      bt.begin(), bt.end());
      c != 0)
    return c;
  const auto& ac = a.node_->children;
  const auto& bc = b.node_->children;
  return std::lexicographical_compare_three_way(ac.begin(), ac.end(),
                                                bc.begin(), bc.end());
}

namespace {

void flatten_into(const Term& t, std::vector<Term>& out) {
  switch (t.kind()) {
    case Term::Kind::comp:
      for (const auto& f : t.factors()) flatten_into(f, out);
      break;
    case Term::Kind::id: break;
    default: out.push_back(normalize(t));
  }
}

// Type of the identity a fully-cancelled spine collapses to: the innermost
// identity's type.
std::optional<Type> first_identity_type(const Term& t) {
  if (t.kind() == Term::Kind::id) return t.type();
  if (t.kind() == Term::Kind::bang && t.type().is_unit()) return Type::unit();
  if (t.kind() == Term::Kind::comp) {
    for (const auto& f : t.factors())
      if (auto ty = first_identity_type(f)) return ty;
  }
  return std::nullopt;
}

}  // namespace

Term normalize(const Term& term) {
  switch (term.kind()) {
    case Term::Kind::bang: return Term::bang(term.type());
    case Term::Kind::pair:
      return Term::pair(normalize(term.left()), normalize(term.right()));
    case Term::Kind::comp: {
      std::vector<Term> factors;
      flatten_into(term, factors);
      Type empty = first_identity_type(term).value_or(Type::unit());
      return Term::spine(std::move(factors), empty);
    }
    default: return term;
  }
}

std::string_view strength_name(Strength s) noexcept {
  return s == Strength::strong ? "strong" : "weak";
}

std::string Equation::str() const {
  return std::string(strength_name(strength)) + ": " + lhs.str() +
         (strength == Strength::strong ? " == " : " ≈ ") + rhs.str();
}

// ---------------------------------------------------------------- Theory

bool is_reserved_name(std::string_view name) noexcept {
  static constexpr std::array<std::string_view, 7> reserved = {
      "id", "p1", "p2", "bang", "Unit", "strong", "weak"};
  return std::find(reserved.begin(), reserved.end(), name) != reserved.end();
}

void Theory::check_fresh(const std::string& name) const {
  if (is_reserved_name(name))
    throw Error(Errc::reserved_name, "'" + name + "' is a reserved name");
  if (has_base_type(name) || find_op(name) || find_definition(name))
    throw Error(Errc::duplicate_symbol, "'" + name + "' is already declared");
}

void Theory::check_type(const Type& type) const {
  switch (type.kind()) {
    case Type::Kind::unit: return;
    case Type::Kind::base:
      if (!has_base_type(type.name()))
        throw Error(Errc::unknown_base_type,
                    "unknown base type '" + type.name() + "'");
      return;
    case Type::Kind::prod:
      check_type(type.left());
      check_type(type.right());
      return;
  }
}

void Theory::add_base_type(std::string name) {
  check_fresh(name);
  base_types_.push_back(std::move(name));
}

void Theory::add_op(OpDecl op) {
  check_fresh(op.name);
  check_type(op.dom);
  check_type(op.cod);
  if (op.decoration.rank > 2)
    throw Error(Errc::effect_keyword_mismatch, "decoration rank out of range");
  ops_.push_back(std::move(op));
}

void Theory::add_axiom(Equation eq, std::string name) {
  if (name.empty()) name = "ax" + std::to_string(axioms_.size() + 1);
  if (find_axiom(name))
    throw Error(Errc::duplicate_symbol, "axiom '" + name + "' already declared");
  eq.lhs = normalize(eq.lhs);
  eq.rhs = normalize(eq.rhs);
  check_equation_wf(*this, eq);
  axioms_.push_back(Axiom{std::move(name), std::move(eq)});
}

void Theory::add_definition(std::string name, Term body) {
  check_fresh(name);
  wf_term(*this, body);
  definitions_.push_back(Definition{std::move(name), normalize(body)});
}

bool Theory::has_base_type(std::string_view name) const noexcept {
  return std::find(base_types_.begin(), base_types_.end(), name) !=
         base_types_.end();
}

const OpDecl* Theory::find_op(std::string_view name) const noexcept {
  for (const auto& op : ops_)
    if (op.name == name) return &op;
  return nullptr;
}

std::optional<std::size_t> Theory::op_index(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name == name) return i;
  return std::nullopt;
}

const Axiom* Theory::find_axiom(std::string_view name) const noexcept {
  for (const auto& ax : axioms_)
    if (ax.name == name) return &ax;
  return nullptr;
}

const Definition* Theory::find_definition(std::string_view name) const noexcept {
  for (const auto& d : definitions_)
    if (d.name == name) return &d;
  return nullptr;
}

// ---------------------------------------------------------------- typing

Decoration pair_component_limit(Effect effect) noexcept {
  return effect == Effect::exceptions ? Decoration::pure() : Decoration::low();
}

namespace {

struct Typed {
  Arrow arrow;
  Decoration rank;
};

void require_type(const Theory& theory, const Type& type) {
  switch (type.kind()) {
    case Type::Kind::unit: return;
    case Type::Kind::base:
      if (!theory.has_base_type(type.name()))
        throw Error(Errc::unknown_base_type,
                    "unknown base type '" + type.name() + "'");
      return;
    case Type::Kind::prod:
      require_type(theory, type.left());
      require_type(theory, type.right());
  }
}

Typed analyze(const Theory& theory, const Term& term) {
  switch (term.kind()) {
    case Term::Kind::id:
      require_type(theory, term.type());
      return {{term.type(), term.type()}, Decoration::pure()};
    case Term::Kind::bang:
      require_type(theory, term.type());
      return {{term.type(), Type::unit()}, Decoration::pure()};
    case Term::Kind::proj1:
    case Term::Kind::proj2: {
      require_type(theory, term.left_type());
      require_type(theory, term.right_type());
      Type dom = Type::prod(term.left_type(), term.right_type());
      Type cod = term.kind() == Term::Kind::proj1 ? term.left_type()
                                                  : term.right_type();
      return {{dom, cod}, Decoration::pure()};
    }
    case Term::Kind::op: {
      const OpDecl* op = theory.find_op(term.name());
      if (!op)
        throw Error(Errc::undeclared_symbol,
                    "undeclared symbol '" + term.name() + "'");
      return {{op->dom, op->cod}, op->decoration};
    }
    case Term::Kind::pair: {
      Typed l = analyze(theory, term.left());
      Typed r = analyze(theory, term.right());
      if (l.arrow.dom != r.arrow.dom)
        throw Error(Errc::pair_domain_mismatch,
                    "pair components have domains " + l.arrow.dom.str() +
                        " and " + r.arrow.dom.str() + " in " + term.str());
      const Decoration limit = pair_component_limit(theory.effect());
      if (l.rank > limit || r.rank > limit)
        throw Error(Errc::pair_rank_violation,
                    "pair " + term.str() + " has a component of rank " +
                        std::to_string(max(l.rank, r.rank).rank) +
                        " but " + std::string(effect_name(theory.effect())) +
                        " pairs allow at most rank " +
                        std::to_string(limit.rank));
      return {{l.arrow.dom, Type::prod(l.arrow.cod, r.arrow.cod)},
              max(l.rank, r.rank)};
    }
    case Term::Kind::comp: {
      const auto& fs = term.factors();
      Typed acc = analyze(theory, fs.front());
      for (std::size_t i = 1; i < fs.size(); ++i) {
        Typed next = analyze(theory, fs[i]);
        if (next.arrow.dom != acc.arrow.cod)
          throw Error(Errc::composition_type_mismatch,
                      "cannot compose " + fs[i].str() + " : " +
                          next.arrow.dom.str() + " -> " + next.arrow.cod.str() +
                          " after a term with codomain " + acc.arrow.cod.str());
        acc.arrow.cod = next.arrow.cod;
        acc.rank = max(acc.rank, next.rank);
      }
      return acc;
    }
  }
  throw Error(Errc::undeclared_symbol, "malformed term");
}

}  // namespace

Arrow wf_term(const Theory& theory, const Term& term) {
  return analyze(theory, term).arrow;
}

Decoration infer_decoration(const Theory& theory, const Term& term) {
  return analyze(theory, term).rank;
}

EquationReport check_equation_wf(const Theory& theory, const Equation& eq) {
  Typed l = analyze(theory, eq.lhs);
  Typed r = analyze(theory, eq.rhs);
  if (l.arrow != r.arrow)
    throw Error(Errc::side_type_mismatch,
                "equation sides have types " + l.arrow.dom.str() + " -> " +
                    l.arrow.cod.str() + " and " + r.arrow.dom.str() + " -> " +
                    r.arrow.cod.str());
  return {l.arrow, l.rank, r.rank};
}

}  // namespace decolog
