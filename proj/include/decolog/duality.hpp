#pragma once

// Exceptions/states duality on the pairing-free fragment.
//
// Every arrow f : A -> B of rank r becomes f_dual : B -> A of the same rank
// (propagator <-> observer, catcher <-> modifier), compositions reverse, and
// substitution-style rules swap with replacement-style rules. Products,
// pairs, projections and bang would need coproducts on the other side, which
// the term language does not have, so they are rejected.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "decolog/calculus.hpp"
#include "decolog/deduction.hpp"

namespace decolog {

std::string dual_symbol(std::string_view name);

struct DualityMap {
  Theory source;
  Theory target;
  // Source symbol -> target symbol, operations first, then definitions.
  std::vector<std::pair<std::string, std::string>> symbols;

  const std::string& image(std::string_view source_symbol) const;
};

// Throws Errc::not_dualizable listing every offending construct.
DualityMap dualize_theory(const Theory& theory);

Term dualize_term(const DualityMap& map, const Term& term);
Equation dualize_equation(const DualityMap& map, const Equation& eq);
Derivation dualize_derivation(const DualityMap& map, const Derivation& d);

// Applies a symbol renaming to every operation, definition and term.
Theory rename_symbols(const Theory& theory,
                      const std::vector<std::pair<std::string, std::string>>& names);
Term rename_symbols(const Term& term,
                    const std::vector<std::pair<std::string, std::string>>& names);
Derivation rename_symbols(const Derivation& d,
                          const std::vector<std::pair<std::string, std::string>>& names);

}  // namespace decolog
