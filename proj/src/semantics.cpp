#include "decolog/semantics.hpp"

#include <algorithm>
#include <stdexcept>

namespace decolog {

std::optional<std::size_t> FiniteSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  return std::nullopt;
}

FiniteSet FiniteSet::numbered(std::size_t n, std::string_view prefix) {
  FiniteSet set;
  set.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    set.labels.push_back(std::string(prefix) + std::to_string(i));
  return set;
}

std::size_t table_input_count(Effect effect, Decoration rank, std::size_t dom,
                              std::size_t effect_size) noexcept {
  if (effect == Effect::exceptions)
    return rank.rank < 2 ? dom : dom + effect_size;
  return rank.rank == 0 ? dom : dom * effect_size;
}

std::size_t table_output_count(Effect effect, Decoration rank, std::size_t cod,
                               std::size_t effect_size) noexcept {
  if (effect == Effect::exceptions)
    return rank.rank == 0 ? cod : cod + effect_size;
  return rank.rank < 2 ? cod : cod * effect_size;
}

bool OperationTable::is_total() const noexcept {
  if (out.size() != input_count()) return false;
  const std::size_t limit = output_count();
  return std::all_of(out.begin(), out.end(),
                     [limit](std::uint32_t v) { return v < limit; });
}

namespace {

OperationTable step_up(const OperationTable& t) {
  OperationTable r = t;
  r.rank = Decoration{static_cast<std::uint8_t>(t.rank.rank + 1)};
  const std::size_t E = t.effect_size;
  if (t.effect == Effect::exceptions) {
    if (t.rank.rank == 1) {
      for (std::size_t e = 0; e < E; ++e)
        r.out.push_back(static_cast<std::uint32_t>(t.cod_size + e));
    }
    // 0 -> 1: ok(b) is encoded as b already.
    return r;
  }
  if (t.rank.rank == 0) {
    r.out.assign(t.dom_size * E, 0);
    for (std::size_t a = 0; a < t.dom_size; ++a)
      for (std::size_t s = 0; s < E; ++s) r.out[a * E + s] = t.out[a];
  } else {
    for (std::size_t i = 0; i < r.out.size(); ++i)
      r.out[i] = static_cast<std::uint32_t>(t.out[i] * E + i % E);
  }
  return r;
}

std::optional<OperationTable> step_down(const OperationTable& t) {
  OperationTable r = t;
  r.rank = Decoration{static_cast<std::uint8_t>(t.rank.rank - 1)};
  const std::size_t E = t.effect_size;
  if (t.effect == Effect::exceptions) {
    if (t.rank.rank == 2) {
      for (std::size_t e = 0; e < E; ++e)
        if (t.out[t.dom_size + e] != t.cod_size + e) return std::nullopt;
      r.out.resize(t.dom_size);
    } else {
      for (auto v : t.out)
        if (v >= t.cod_size) return std::nullopt;
    }
    return r;
  }
  if (t.rank.rank == 2) {
    for (std::size_t i = 0; i < t.out.size(); ++i) {
      if (t.out[i] % E != i % E) return std::nullopt;
      r.out[i] = static_cast<std::uint32_t>(t.out[i] / E);
    }
  } else {
    r.out.assign(t.dom_size, 0);
    for (std::size_t a = 0; a < t.dom_size; ++a) {
      for (std::size_t s = 1; s < E; ++s)
        if (t.out[a * E + s] != t.out[a * E]) return std::nullopt;
      r.out[a] = t.out[a * E];
    }
  }
  return r;
}

}  // namespace

OperationTable coerce(const OperationTable& table, Decoration to) {
  if (to < table.rank)
    throw Error(Errc::rank_not_increasing,
                "cannot coerce a rank " + std::to_string(table.rank.rank) +
                    " table down to rank " + std::to_string(to.rank));
  if (to.rank > 2)
    throw Error(Errc::rank_not_increasing, "rank out of range");
  OperationTable t = table;
  while (t.rank < to) t = step_up(t);
  return t;
}

std::optional<OperationTable> factor_through(const OperationTable& table,
                                             Decoration rank) {
  if (rank > table.rank) return coerce(table, rank);
  std::optional<OperationTable> t = table;
  while (t && t->rank > rank) t = step_down(*t);
  return t;
}

// ---------------------------------------------------------------- models

FiniteModel::FiniteModel(const Theory& theory)
    : effect_(theory.effect()),
      type_names_(theory.base_types()),
      carriers_(theory.base_types().size()),
      effect_carrier_(FiniteSet::numbered(1)),
      tables_(theory.ops().size()),
      top_tables_(theory.ops().size()) {
  for (const auto& op : theory.ops()) op_names_.push_back(op.name);
}

void FiniteModel::set_carrier(std::string_view type, FiniteSet set) {
  for (std::size_t i = 0; i < type_names_.size(); ++i) {
    if (type_names_[i] == type) {
      carriers_[i] = std::move(set);
      return;
    }
  }
  throw Error(Errc::model_mismatch,
              "model has no base type '" + std::string(type) + "'");
}

void FiniteModel::set_effect_carrier(FiniteSet set) {
  effect_carrier_ = std::move(set);
}

void FiniteModel::set_table(std::size_t op_index, OperationTable table) {
  top_tables_.at(op_index) = coerce(table, Decoration::high());
  tables_.at(op_index) = std::move(table);
}

void FiniteModel::set_table(std::string_view op, OperationTable table) {
  set_table(op_slot(op), std::move(table));
}

std::size_t FiniteModel::op_slot(std::string_view op) const {
  for (std::size_t i = 0; i < op_names_.size(); ++i)
    if (op_names_[i] == op) return i;
  throw Error(Errc::model_mismatch,
              "model has no operation '" + std::string(op) + "'");
}

const FiniteSet& FiniteModel::carrier(std::string_view type) const {
  for (std::size_t i = 0; i < type_names_.size(); ++i)
    if (type_names_[i] == type) return carriers_[i];
  throw Error(Errc::unknown_base_type,
              "no carrier for base type '" + std::string(type) + "'");
}

bool FiniteModel::has_table(std::size_t op_index) const {
  return op_index < tables_.size() && tables_[op_index].has_value();
}

const OperationTable& FiniteModel::table(std::size_t op_index) const {
  if (!has_table(op_index))
    throw Error(Errc::model_mismatch, "missing table for operation '" +
                                          op_names_.at(op_index) + "'");
  return *tables_[op_index];
}

const OperationTable& FiniteModel::table(std::string_view op) const {
  return table(op_slot(op));
}

const OperationTable& FiniteModel::top_table(std::size_t op_index) const {
  table(op_index);
  return top_tables_[op_index];
}

std::size_t FiniteModel::size_of(const Type& type) const {
  switch (type.kind()) {
    case Type::Kind::unit: return 1;
    case Type::Kind::base: return carrier(type.name()).size();
    case Type::Kind::prod: return size_of(type.left()) * size_of(type.right());
  }
  return 0;
}

void check_model(const FiniteModel& model, const Theory& theory) {
  auto fail = [](const std::string& msg) {
    throw Error(Errc::model_mismatch, msg);
  };
  if (model.effect() != theory.effect())
    fail("model is for effect " + std::string(effect_name(model.effect())) +
         " but the theory declares " + std::string(effect_name(theory.effect())));
  if (model.effect_carrier().size() == 0) fail("effect carrier is empty");
  if (model.base_types() != theory.base_types())
    fail("model base types do not match the theory");
  for (const auto& t : theory.base_types())
    if (model.carrier(t).size() == 0) fail("carrier of '" + t + "' is empty");
  if (model.op_names().size() != theory.ops().size())
    fail("model operations do not match the theory");
  for (std::size_t i = 0; i < theory.ops().size(); ++i) {
    const OpDecl& op = theory.ops()[i];
    if (model.op_names()[i] != op.name)
      fail("model operations do not match the theory");
    if (!model.has_table(i)) fail("missing table for '" + op.name + "'");
    const OperationTable& t = model.table(i);
    if (t.effect != theory.effect() || t.rank != op.decoration)
      fail("table for '" + op.name + "' has the wrong decoration");
    if (t.dom_size != model.size_of(op.dom) ||
        t.cod_size != model.size_of(op.cod) ||
        t.effect_size != model.effect_carrier().size())
      fail("table for '" + op.name + "' does not match the carriers");
    if (!t.is_total()) fail("table for '" + op.name + "' is not total");
  }
}

FiniteSet interpret_type(const FiniteModel& model, const Type& type) {
  FiniteSet set;
  const std::size_t n = model.size_of(type);
  set.labels.reserve(n);
  for (std::size_t v = 0; v < n; ++v)
    set.labels.push_back(value_label(model, type, v));
  return set;
}

std::string value_label(const FiniteModel& model, const Type& type,
                        std::size_t value) {
  switch (type.kind()) {
    case Type::Kind::unit: return "()";
    case Type::Kind::base: return model.carrier(type.name()).labels.at(value);
    case Type::Kind::prod: {
      const std::size_t r = model.size_of(type.right());
      return "(" + value_label(model, type.left(), value / r) + "," +
             value_label(model, type.right(), value % r) + ")";
    }
  }
  return {};
}

std::string input_label(const FiniteModel& model, Decoration rank,
                        const Type& dom, std::size_t input) {
  const auto& eff = model.effect_carrier().labels;
  if (model.effect() == Effect::exceptions) {
    if (rank.rank < 2) return value_label(model, dom, input);
    const std::size_t n = model.size_of(dom);
    return input < n ? "ok " + value_label(model, dom, input)
                     : "exc " + eff.at(input - n);
  }
  if (rank.rank == 0) return value_label(model, dom, input);
  return value_label(model, dom, input / eff.size()) + " @ " +
         eff.at(input % eff.size());
}

std::string output_label(const FiniteModel& model, Decoration rank,
                         const Type& cod, std::size_t output) {
  const auto& eff = model.effect_carrier().labels;
  if (model.effect() == Effect::exceptions) {
    if (rank.rank == 0) return value_label(model, cod, output);
    const std::size_t n = model.size_of(cod);
    return output < n ? "ok " + value_label(model, cod, output)
                      : "exc " + eff.at(output - n);
  }
  if (rank.rank < 2) return value_label(model, cod, output);
  return value_label(model, cod, output / eff.size()) + " @ " +
         eff.at(output % eff.size());
}

// ---------------------------------------------------------------- evaluation

struct CompiledTerm::Node {
  Term::Kind kind;
  std::size_t op_index = 0;
  Type first;   // id/bang type, left projection type
  Type second;  // right projection type
  Arrow arrow;
  std::vector<Node> children;
};

namespace {

using Table = std::vector<std::uint32_t>;

CompiledTerm::Node compile(const Theory& theory, const Term& term) {
  CompiledTerm::Node node{term.kind(), 0, {}, {}, wf_term(theory, term), {}};
  switch (term.kind()) {
    case Term::Kind::op: node.op_index = *theory.op_index(term.name()); break;
    case Term::Kind::id:
    case Term::Kind::bang: node.first = term.type(); break;
    case Term::Kind::proj1:
    case Term::Kind::proj2:
      node.first = term.left_type();
      node.second = term.right_type();
      break;
    case Term::Kind::pair:
      node.children.push_back(compile(theory, term.left()));
      node.children.push_back(compile(theory, term.right()));
      break;
    case Term::Kind::comp:
      for (const auto& f : term.factors())
        node.children.push_back(compile(theory, f));
      break;
  }
  return node;
}

Table eval_node(const CompiledTerm::Node& node, const FiniteModel& m) {
  const bool exc = m.effect() == Effect::exceptions;
  const std::size_t E = m.effect_carrier().size();
  auto top_size = [&](std::size_t n) { return exc ? n + E : n * E; };
  Table out;
  switch (node.kind) {
    case Term::Kind::op: return m.top_table(node.op_index).out;
    case Term::Kind::id: {
      out.resize(top_size(m.size_of(node.first)));
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint32_t>(i);
      return out;
    }
    case Term::Kind::bang: {
      const std::size_t n = m.size_of(node.first);
      out.resize(top_size(n));
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (exc) out[i] = static_cast<std::uint32_t>(i < n ? 0 : 1 + (i - n));
        else out[i] = static_cast<std::uint32_t>(i % E);
      }
      return out;
    }
    case Term::Kind::proj1:
    case Term::Kind::proj2: {
      const std::size_t l = m.size_of(node.first);
      const std::size_t r = m.size_of(node.second);
      const std::size_t cod = node.kind == Term::Kind::proj1 ? l : r;
      out.resize(top_size(l * r));
      for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t v = exc ? i : i / E;
        if (exc && v >= l * r) {
          out[i] = static_cast<std::uint32_t>(cod + (v - l * r));
          continue;
        }
        const std::size_t pv = node.kind == Term::Kind::proj1 ? v / r : v % r;
        out[i] = static_cast<std::uint32_t>(exc ? pv : pv * E + i % E);
      }
      return out;
    }
    case Term::Kind::pair: {
      const Table a = eval_node(node.children[0], m);
      const Table b = eval_node(node.children[1], m);
      const std::size_t ca = m.size_of(node.children[0].arrow.cod);
      const std::size_t cb = m.size_of(node.children[1].arrow.cod);
      const std::size_t dom = m.size_of(node.arrow.dom);
      out.resize(a.size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (exc) {
          // Components are pure: ok inputs give ok outputs.
          out[i] = static_cast<std::uint32_t>(
              i < dom ? a[i] * cb + b[i] : ca * cb + (i - dom));
        } else {
          // Components are observers: the state passes through unchanged.
          out[i] = static_cast<std::uint32_t>(
              ((a[i] / E) * cb + b[i] / E) * E + i % E);
        }
      }
      return out;
    }
    case Term::Kind::comp: {
      out = eval_node(node.children.front(), m);
      for (std::size_t k = 1; k < node.children.size(); ++k) {
        const Table next = eval_node(node.children[k], m);
        for (auto& v : out) v = next[v];
      }
      return out;
    }
  }
  return out;
}

}  // namespace

CompiledTerm::CompiledTerm(const Theory& theory, const Term& term)
    : arrow_(wf_term(theory, term)),
      rank_(infer_decoration(theory, term)),
      root_(std::make_shared<const Node>(compile(theory, term))) {}

OperationTable CompiledTerm::eval(const FiniteModel& model) const {
  OperationTable t;
  t.effect = model.effect();
  t.rank = Decoration::high();
  t.dom_size = model.size_of(arrow_.dom);
  t.cod_size = model.size_of(arrow_.cod);
  t.effect_size = model.effect_carrier().size();
  t.out = eval_node(*root_, model);
  if (rank_ < Decoration::high() && !factor_through(t, rank_))
    throw std::logic_error("denotation does not factor through rank " +
                           std::to_string(rank_.rank));
  return t;
}

OperationTable eval_term(const FiniteModel& model, const Theory& theory,
                         const Term& term) {
  return CompiledTerm(theory, term).eval(model);
}

CompiledEquation::CompiledEquation(const Theory& theory, const Equation& eq)
    : eq_(eq), lhs_(theory, eq.lhs), rhs_(theory, eq.rhs) {
  check_equation_wf(theory, eq);
}

std::optional<std::size_t> CompiledEquation::first_violation(
    const FiniteModel& model) const {
  const OperationTable l = lhs_.eval(model);
  const OperationTable r = rhs_.eval(model);
  std::size_t n = l.out.size();
  if (eq_.strength == Strength::weak && model.effect() == Effect::exceptions)
    n = l.dom_size;
  const bool project = eq_.strength == Strength::weak &&
                       model.effect() == Effect::states;
  const std::size_t E = l.effect_size;
  for (std::size_t i = 0; i < n; ++i) {
    const bool same = project ? l.out[i] / E == r.out[i] / E
                              : l.out[i] == r.out[i];
    if (!same) return i;
  }
  return std::nullopt;
}

std::optional<Witness> CompiledEquation::witness(const FiniteModel& model) const {
  auto i = first_violation(model);
  if (!i) return std::nullopt;
  const OperationTable l = lhs_.eval(model);
  const OperationTable r = rhs_.eval(model);
  const auto top = Decoration::high();
  return Witness{*i, input_label(model, top, lhs_.arrow().dom, *i),
                 output_label(model, top, lhs_.arrow().cod, l.out[*i]),
                 output_label(model, top, rhs_.arrow().cod, r.out[*i])};
}

bool holds(const FiniteModel& model, const Theory& theory, const Equation& eq) {
  return CompiledEquation(theory, eq).holds(model);
}

std::optional<Witness> find_violation(const FiniteModel& model,
                                      const Theory& theory, const Equation& eq) {
  return CompiledEquation(theory, eq).witness(model);
}

}  // namespace decolog
