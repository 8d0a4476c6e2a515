#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace decolog {

enum class Errc {
  undeclared_symbol,
  composition_type_mismatch,
  pair_domain_mismatch,
  pair_rank_violation,
  side_type_mismatch,
  duplicate_symbol,
  reserved_name,
  unknown_base_type,
  effect_keyword_mismatch,
  rank_not_increasing,
  bounds_too_large,
  model_mismatch,
  rule_misapplied,
  conclusion_mismatch,
  ill_formed_parameter,
  not_dualizable,
  parse_error,
};

std::string_view errc_name(Errc code) noexcept;

// Every failure surfaced by the library is an Error carrying a machine-readable
// code; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(Errc::parse_error, std::to_string(line) + ":" +
                                     std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace decolog
