#pragma once

// Effect-decorated signatures and terms.
//
// A theory fixes one effect (exceptions or states). Every operation symbol
// carries a decoration rank: 0 is pure, 1 is a propagator (exceptions) or an
// observer (states), 2 is a catcher (exceptions) or a modifier (states). The
// type language has base types, Unit and binary products only; there is no
// way to name the set of exceptions or the set of states.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decolog/error.hpp"

namespace decolog {

enum class Effect : std::uint8_t { exceptions, states };

std::string_view effect_name(Effect effect) noexcept;
std::optional<Effect> parse_effect(std::string_view word) noexcept;
Effect dual(Effect effect) noexcept;

struct Decoration {
  std::uint8_t rank = 0;

  static constexpr Decoration pure() { return {0}; }
  static constexpr Decoration low() { return {1}; }
  static constexpr Decoration high() { return {2}; }

  friend constexpr auto operator<=>(Decoration, Decoration) = default;
};

inline constexpr Decoration max(Decoration a, Decoration b) {
  return a < b ? b : a;
}

// "pure", "propagator", "catcher", "observer", "modifier".
std::string_view decoration_name(Decoration deco, Effect effect) noexcept;
// Accepts only the keywords legal for `effect`; throws
// Errc::effect_keyword_mismatch for a keyword of the other effect.
Decoration parse_decoration(std::string_view word, Effect effect);

class Type {
 public:
  enum class Kind : std::uint8_t { base, unit, prod };

  Type();  // Unit
  static Type base(std::string name);
  static Type unit();
  static Type prod(Type left, Type right);

  Kind kind() const noexcept;
  bool is_unit() const noexcept { return kind() == Kind::unit; }
  const std::string& name() const;
  const Type& left() const;
  const Type& right() const;

  std::string str() const;

  friend bool operator==(const Type& a, const Type& b);
  friend std::strong_ordering operator<=>(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Decorated terms in point-free style. Composition is kept as a spine of
// factors listed in application order (factors()[0] runs first). The public
// constructors normalize: nested compositions are flattened, identities are
// dropped and bang(Unit) becomes id(Unit), so associativity and the unit laws
// hold by construction. compose_raw keeps the literal tree for parsers and
// tests that need to observe normalization.
class Term {
 public:
  enum class Kind : std::uint8_t { id, op, comp, pair, proj1, proj2, bang };

  Term();  // id(Unit)
  static Term id(Type type);
  static Term op(std::string name);
  static Term pair(Term left, Term right);
  static Term proj1(Type left, Type right);
  static Term proj2(Type left, Type right);
  static Term bang(Type type);
  static Term compose(const Term& after, const Term& first);
  static Term compose_raw(Term after, Term first);
  // Composition of already-normalized factors; `empty` is the identity type
  // used when `factors` is empty.
  static Term spine(std::vector<Term> factors, const Type& empty);

  Kind kind() const noexcept;
  const std::string& name() const;  // op
  const Type& type() const;         // id, bang
  const Type& left_type() const;    // proj1, proj2
  const Type& right_type() const;   // proj1, proj2
  const Term& left() const;         // pair
  const Term& right() const;        // pair
  const std::vector<Term>& factors() const;  // comp

  // Factors of a normalized term: the comp spine, nothing for an identity,
  // the term itself otherwise.
  std::vector<Term> spine_factors() const;

  bool is_normal() const;
  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Term normalize(const Term& term);

enum class Strength : std::uint8_t { strong, weak };

std::string_view strength_name(Strength s) noexcept;

struct Equation {
  Strength strength = Strength::strong;
  Term lhs;
  Term rhs;

  // "weak: lhs ≈ rhs" / "strong: lhs == rhs"
  std::string str() const;
  friend bool operator==(const Equation&, const Equation&) = default;
};

struct OpDecl {
  std::string name;
  Type dom;
  Type cod;
  Decoration decoration;

  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

struct Axiom {
  std::string name;
  Equation equation;

  friend bool operator==(const Axiom&, const Axiom&) = default;
};

// Named abbreviation for a term; expanded wherever the name is parsed.
struct Definition {
  std::string name;
  Term body;

  friend bool operator==(const Definition&, const Definition&) = default;
};

struct Arrow {
  Type dom;
  Type cod;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

class Theory {
 public:
  explicit Theory(Effect effect = Effect::states) : effect_(effect) {}

  Effect effect() const noexcept { return effect_; }

  void add_base_type(std::string name);
  void add_op(OpDecl op);
  // Unnamed axioms get "ax<N>" with N their 1-based position.
  void add_axiom(Equation eq, std::string name = {});
  void add_definition(std::string name, Term body);

  const std::vector<std::string>& base_types() const noexcept {
    return base_types_;
  }
  const std::vector<OpDecl>& ops() const noexcept { return ops_; }
  const std::vector<Axiom>& axioms() const noexcept { return axioms_; }
  const std::vector<Definition>& definitions() const noexcept {
    return definitions_;
  }

  bool has_base_type(std::string_view name) const noexcept;
  const OpDecl* find_op(std::string_view name) const noexcept;
  std::optional<std::size_t> op_index(std::string_view name) const noexcept;
  const Axiom* find_axiom(std::string_view name) const noexcept;
  const Definition* find_definition(std::string_view name) const noexcept;

  friend bool operator==(const Theory&, const Theory&) = default;

 private:
  void check_fresh(const std::string& name) const;
  void check_type(const Type& type) const;

  Effect effect_;
  std::vector<std::string> base_types_;
  std::vector<OpDecl> ops_;
  std::vector<Axiom> axioms_;
  std::vector<Definition> definitions_;
};

bool is_reserved_name(std::string_view name) noexcept;

// Typing. Also enforces the pairing restriction: pair components must be
// pure under exceptions and of rank <= 1 under states.
Arrow wf_term(const Theory& theory, const Term& term);

Decoration infer_decoration(const Theory& theory, const Term& term);

// Highest rank a pair component may have under `effect`.
Decoration pair_component_limit(Effect effect) noexcept;

struct EquationReport {
  Arrow arrow;
  Decoration lhs_rank;
  Decoration rhs_rank;

  // Rank at which the two sides are compared semantically.
  Decoration comparison_rank() const { return max(lhs_rank, rhs_rank); }
};

EquationReport check_equation_wf(const Theory& theory, const Equation& eq);

}  // namespace decolog
