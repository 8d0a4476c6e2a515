#pragma once

// The decorated deduction system.
//
// The catalog below is the minimal rule set needed for the bank-account
// theorem plus the rules the decoration hierarchy names directly. Side
// conditions depend on the effect:
//
//   weak_subst   f1 ≈ f2  ⊢  f1∘g ≈ f2∘g   any g (states), g pure (exceptions)
//   weak_repl    f1 ≈ f2  ⊢  h∘f1 ≈ h∘f2   h pure (states), any h (exceptions)
//
// Orientation: the textbook reading of weak congruence for exceptions puts
// the arbitrary context on the substitution side. Under the weak-equation
// semantics used here (agreement on ok inputs, g∘f runs f first) that variant
// has countermodels for exceptions and is sound only for states, so the two
// effects get mirrored side conditions. validate_rules re-checks both
// orientations on every run.
//
// Rules whose soundness needs a low-rank argument are restricted further
// under exceptions, where rank 1 may raise: unit_strong_lowrank and
// pair_comp_lowrank require rank <= 1 under states but rank 0 under
// exceptions, and unit_weak requires rank 0 under exceptions.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "decolog/calculus.hpp"

namespace decolog {

enum class RuleId : std::uint8_t {
  refl,
  sym,
  trans_strong,
  trans_weak,
  trans_mixed,
  strong_to_weak,
  weak_to_strong_lowrank,
  subst_strong,
  repl_strong,
  weak_subst,
  weak_repl,
  pair_cong_strong,
  pair_proj,
  pair_comp_lowrank,
  unit_strong_lowrank,
  unit_weak,
  axiom,
};

std::string_view rule_name(RuleId rule) noexcept;
std::optional<RuleId> parse_rule(std::string_view name) noexcept;
std::span<const RuleId> all_rules() noexcept;

// Rules that mention pairs, projections or Unit.
bool is_pair_or_unit_rule(RuleId rule) noexcept;

// One inference step. Parameters are explicit; the checker never unifies.
//
//   refl                 t
//   subst_strong         g            weak_subst   g
//   repl_strong          h            weak_repl    h
//   pair_proj            f, g, side (1 or 2)
//   pair_comp_lowrank    f, g, w
//   unit_strong_lowrank  f            unit_weak    f
//   axiom                axiom name
//
// `claim` is an optional stated conclusion; when present it must match.
struct Derivation {
  RuleId rule = RuleId::refl;
  std::vector<std::pair<std::string, Term>> params;
  int side = 0;
  std::string axiom;
  std::vector<Derivation> premises;
  std::optional<Equation> claim;

  const Term* param(std::string_view key) const noexcept;
  Derivation& with(std::string key, Term value);

  std::size_t size() const noexcept;
  friend bool operator==(const Derivation&, const Derivation&) = default;
};

namespace derive {
// Small constructors used by the prover, the tests and the duality module.
Derivation refl(Term t);
Derivation axiom(std::string name);
Derivation sym(Derivation p);
Derivation trans(RuleId rule, Derivation a, Derivation b);
Derivation strong_to_weak(Derivation p);
Derivation weak_to_strong(Derivation p);
Derivation subst(RuleId rule, Term g, Derivation p);
Derivation repl(RuleId rule, Term h, Derivation p);
Derivation pair_cong(Derivation left, Derivation right);
Derivation pair_proj(Term f, Term g, int side);
Derivation pair_comp(Term f, Term g, Term w);
Derivation unit(RuleId rule, Term f);
}  // namespace derive

struct Judgment {
  Equation conclusion;
};

// Failure inside a derivation. `node` is the path of the offending node:
// "0" is the root and "0.2" its third premise.
class DerivationError : public Error {
 public:
  DerivationError(Errc code, std::string node, RuleId rule,
                  const std::string& detail)
      : Error(code, "node " + node + " (" + std::string(rule_name(rule)) +
                        "): " + detail),
        node_(std::move(node)),
        rule_(rule) {}

  const std::string& node() const noexcept { return node_; }
  RuleId rule() const noexcept { return rule_; }

 private:
  std::string node_;
  RuleId rule_;
};

// Errors: Errc::rule_misapplied, Errc::conclusion_mismatch,
// Errc::ill_formed_parameter, all as DerivationError.
Judgment check_derivation(const Theory& theory, const Derivation& d);

}  // namespace decolog
