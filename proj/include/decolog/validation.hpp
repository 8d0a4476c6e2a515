#pragma once

// Machine validation of the rule catalog against finite models.
//
// Each rule schema is instantiated with fresh operation symbols over a single
// base type B, at every combination of decorations. The premises become the
// axioms of a throwaway theory, the conclusion is computed by
// check_derivation itself (so the shipped kernel is what gets tested), and
// every model with carriers up to the bound is searched for a violation.
// Instances the checker rejects are outside the rule and are skipped.
//
// Documented non-rules run through the same sweep and must be refuted.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decolog/deduction.hpp"
#include "decolog/semantics.hpp"

namespace decolog {

// Raw-interpretation ceiling for the sweeps; axiom pruning keeps the visited
// count far below it.
inline constexpr std::uint64_t kSweepCeiling = 100'000'000;

struct SchemaCountermodel {
  std::string instance;  // e.g. "f1:catcher f2:catcher g:propagator"
  Theory theory;
  Equation conclusion;
  Counterexample counterexample;
};

struct RuleCheck {
  std::string name;
  std::optional<RuleId> rule;
  bool shipped = true;  // false: a documented non-rule that must be refuted
  std::string statement;
  std::size_t instances = 0;
  std::uint64_t models = 0;
  std::optional<SchemaCountermodel> countermodel;

  bool passed() const noexcept {
    return shipped ? !countermodel.has_value() : countermodel.has_value();
  }
};

struct SoundnessReport {
  Effect effect = Effect::states;
  std::size_t max_carrier = 2;
  std::vector<RuleCheck> checks;

  bool ok() const noexcept;
};

// Non-rules are included when the rule they shadow is requested.
SoundnessReport validate_rules(Effect effect, std::span<const RuleId> rules,
                               std::size_t max_carrier = 2,
                               unsigned threads = 0);
SoundnessReport validate_rules(Effect effect, std::size_t max_carrier = 2,
                               unsigned threads = 0);

std::string format_report(const SoundnessReport& report);

}  // namespace decolog
