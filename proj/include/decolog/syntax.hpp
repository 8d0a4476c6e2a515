#pragma once

// Text formats: theory files (.dth), model files (.model) and derivation
// files (.drv). The grammars are documented in docs/formats.md. Printers
// produce text the parsers read back to the same value.
//
// Syntax problems raise ParseError (with line and column). Well-formed text
// that does not make sense for the theory raises Error with the matching
// code: UndeclaredSymbol, CompositionTypeMismatch, EffectKeywordMismatch,
// ModelMismatch and so on.

#include <filesystem>
#include <string>
#include <string_view>

#include "decolog/calculus.hpp"
#include "decolog/deduction.hpp"
#include "decolog/semantics.hpp"

namespace decolog {

Theory parse_theory(std::string_view text);
std::string print_theory(const Theory& theory);

Type parse_type(const Theory& theory, std::string_view text);
Term parse_term(const Theory& theory, std::string_view text);
// "[strong|weak][:] lhs (==|~) rhs"; the keyword, when present, must agree
// with the operator.
Equation parse_equation(const Theory& theory, std::string_view text);

FiniteModel parse_model(const Theory& theory, std::string_view text);
std::string print_model(const Theory& theory, const FiniteModel& model);

Derivation parse_derivation(const Theory& theory, std::string_view text);
std::string print_derivation(const Derivation& d);

std::string read_file(const std::filesystem::path& path);

}  // namespace decolog
