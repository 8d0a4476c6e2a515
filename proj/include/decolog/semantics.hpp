#pragma once

// Finite set-theoretic models of decorated theories.
//
// Exceptions: a rank-0 symbol f : A -> B denotes A -> B, rank 1 denotes
// A -> B+Exc and rank 2 denotes A+Exc -> B+Exc. States: rank 0 denotes A -> B,
// rank 1 denotes A×St -> B and rank 2 denotes A×St -> B×St. The effect
// carrier (Exc or St) lives only in the model; terms never mention it.
//
// Encodings used by every table: an element of A+Exc is an index in
// [0, |A|+|Exc|) with ok(a) = a and exc(e) = |A| + e; an element of A×St is
// a*|St| + s; an element of A×B is a*|B| + b.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decolog/calculus.hpp"

namespace decolog {

struct FiniteSet {
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;
  static FiniteSet numbered(std::size_t n, std::string_view prefix = "");

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
};

std::size_t table_input_count(Effect effect, Decoration rank, std::size_t dom,
                              std::size_t effect_size) noexcept;
std::size_t table_output_count(Effect effect, Decoration rank, std::size_t cod,
                               std::size_t effect_size) noexcept;

// Total function table in the native shape of `rank`.
struct OperationTable {
  Effect effect = Effect::states;
  Decoration rank;
  std::size_t dom_size = 0;
  std::size_t cod_size = 0;
  std::size_t effect_size = 1;
  std::vector<std::uint32_t> out;

  std::size_t input_count() const noexcept {
    return table_input_count(effect, rank, dom_size, effect_size);
  }
  std::size_t output_count() const noexcept {
    return table_output_count(effect, rank, cod_size, effect_size);
  }
  bool is_total() const noexcept;

  friend bool operator==(const OperationTable&, const OperationTable&) = default;
};

// Canonical embedding into a higher rank: propagate exceptions, leave the
// state untouched. Throws Errc::rank_not_increasing when `to` < table.rank.
OperationTable coerce(const OperationTable& table, Decoration to);

// Inverse of coerce: the native table at `rank` whose coercion is `table`,
// or nullopt when `table` does not factor through that rank.
std::optional<OperationTable> factor_through(const OperationTable& table,
                                             Decoration rank);

class FiniteModel {
 public:
  FiniteModel() = default;
  // Skeleton for `theory`: carriers and tables still have to be filled in.
  explicit FiniteModel(const Theory& theory);

  Effect effect() const noexcept { return effect_; }

  void set_carrier(std::string_view type, FiniteSet set);
  void set_effect_carrier(FiniteSet set);
  void set_table(std::size_t op_index, OperationTable table);
  void set_table(std::string_view op, OperationTable table);

  const std::vector<std::string>& base_types() const noexcept { return type_names_; }
  const std::vector<std::string>& op_names() const noexcept { return op_names_; }

  const FiniteSet& carrier(std::string_view type) const;
  const FiniteSet& effect_carrier() const noexcept { return effect_carrier_; }
  bool has_table(std::size_t op_index) const;
  const OperationTable& table(std::size_t op_index) const;
  const OperationTable& table(std::string_view op) const;
  // Rank-2 form of a table, cached.
  const OperationTable& top_table(std::size_t op_index) const;

  std::size_t size_of(const Type& type) const;

 private:
  std::size_t op_slot(std::string_view op) const;

  Effect effect_ = Effect::states;
  std::vector<std::string> type_names_;
  std::vector<FiniteSet> carriers_;
  FiniteSet effect_carrier_;
  std::vector<std::string> op_names_;
  std::vector<std::optional<OperationTable>> tables_;
  std::vector<OperationTable> top_tables_;
};

// Checks that `model` interprets every symbol of `theory` with a total table
// of the declared shape. Throws Errc::model_mismatch.
void check_model(const FiniteModel& model, const Theory& theory);

FiniteSet interpret_type(const FiniteModel& model, const Type& type);

// Printable forms, in the row syntax of model files: "a", "(a,b)", "()",
// "ok a", "exc e", "a @ s".
std::string value_label(const FiniteModel& model, const Type& type,
                        std::size_t value);
std::string input_label(const FiniteModel& model, Decoration rank,
                        const Type& dom, std::size_t input);
std::string output_label(const FiniteModel& model, Decoration rank,
                         const Type& cod, std::size_t output);

// A well-formed term with its typing resolved once, evaluable in many models.
class CompiledTerm {
 public:
  CompiledTerm(const Theory& theory, const Term& term);

  const Arrow& arrow() const noexcept { return arrow_; }
  Decoration rank() const noexcept { return rank_; }

  // Rank-2 table. Throws std::logic_error if the result does not factor
  // through rank().
  OperationTable eval(const FiniteModel& model) const;

  struct Node;

 private:
  Arrow arrow_;
  Decoration rank_;
  std::shared_ptr<const Node> root_;
};

// Denotation at rank 2, after checking that it factors through the inferred
// decoration of `term`.
OperationTable eval_term(const FiniteModel& model, const Theory& theory,
                         const Term& term);

struct Witness {
  std::size_t input = 0;
  std::string input_label;
  std::string lhs_value;
  std::string rhs_value;
};

class CompiledEquation {
 public:
  CompiledEquation(const Theory& theory, const Equation& eq);

  const Equation& equation() const noexcept { return eq_; }
  Decoration comparison_rank() const noexcept {
    return max(lhs_.rank(), rhs_.rank());
  }

  // First input on which the sides disagree under the equation's strength.
  std::optional<std::size_t> first_violation(const FiniteModel& model) const;
  bool holds(const FiniteModel& model) const {
    return !first_violation(model).has_value();
  }
  std::optional<Witness> witness(const FiniteModel& model) const;

 private:
  Equation eq_;
  CompiledTerm lhs_;
  CompiledTerm rhs_;
};

// Strong: rank-2 tables agree everywhere. Weak: under exceptions the tables
// agree on ok inputs; under states the value components agree.
bool holds(const FiniteModel& model, const Theory& theory, const Equation& eq);
std::optional<Witness> find_violation(const FiniteModel& model,
                                      const Theory& theory, const Equation& eq);

// ------------------------------------------------------------ enumeration

inline constexpr std::uint64_t kDefaultEnumerationCeiling = 10'000'000;

struct CarrierRange {
  std::size_t min = 1;
  std::size_t max = 1;
};

struct Bounds {
  std::map<std::string, CarrierRange, std::less<>> base;  // absent: {1, 1}
  CarrierRange effect;
  std::uint64_t ceiling = kDefaultEnumerationCeiling;

  static Bounds up_to(const Theory& theory, std::size_t max_carrier);
  static Bounds exact(const Theory& theory, std::size_t base_size,
                      std::size_t effect_size);
};

// Number of raw interpretations (before axiom filtering), saturating.
std::uint64_t raw_model_count(const Theory& theory, const Bounds& bounds);

// Visits every model within `bounds` that satisfies the axioms of `theory`.
// Order: carrier sizes in declaration order (effect carrier last), then each
// operation's table in declaration order, each table lexicographic in its
// inputs. `visit` returns false to stop. Returns the number of visited models.
// Throws Errc::bounds_too_large when raw_model_count exceeds the ceiling.
std::uint64_t enumerate_models(
    const Theory& theory, const Bounds& bounds,
    const std::function<bool(const FiniteModel&)>& visit);

std::vector<FiniteModel> collect_models(const Theory& theory,
                                        const Bounds& bounds);

struct Counterexample {
  FiniteModel model;
  Witness witness;
};

// First model in canonical order that satisfies the axioms and violates
// `eq`. `threads` = 0 picks the hardware concurrency; any thread count gives
// the same answer.
std::optional<Counterexample> find_counterexample(const Theory& theory,
                                                  const Equation& eq,
                                                  const Bounds& bounds,
                                                  unsigned threads = 1);

}  // namespace decolog
