#pragma once

#include <cstddef>
#include <optional>

#include "decolog/deduction.hpp"

namespace decolog {

struct ProveOptions {
  // Total number of rewrite steps, both directions together.
  std::size_t depth = 8;
  // Search is abandoned (reported as not found) past this many terms.
  std::size_t max_terms = 200'000;
};

// A missing derivation means "not found within the depth bound", never
// "disproved": use find_counterexample for refutation.
struct ProveResult {
  std::optional<Derivation> derivation;
  std::size_t explored = 0;

  bool found() const noexcept { return derivation.has_value(); }
};

// Bounded bidirectional rewriting. Axioms (both orientations) and the
// structural rules pair_proj, pair_comp_lowrank, unit_strong_lowrank and
// unit_weak act as rewrites under composition contexts; weak steps only go
// through contexts their side conditions allow. Every returned derivation has
// been re-checked by check_derivation.
ProveResult prove(const Theory& theory, const Equation& goal,
                  const ProveOptions& options = {});

}  // namespace decolog
