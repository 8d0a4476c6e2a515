#include "decolog/duality.hpp"

#include <algorithm>

namespace decolog {

std::string dual_symbol(std::string_view name) {
  return std::string(name) + "_dual";
}

const std::string& DualityMap::image(std::string_view source_symbol) const {
  for (const auto& [from, to] : symbols)
    if (from == source_symbol) return to;
  throw Error(Errc::undeclared_symbol,
              "no dual for symbol '" + std::string(source_symbol) + "'");
}

namespace {

void collect_blockers(const Term& t, std::vector<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::pair:
    case Term::Kind::proj1:
    case Term::Kind::proj2:
    case Term::Kind::bang: out.push_back(t.str()); break;
    case Term::Kind::comp:
      for (const auto& f : t.factors()) collect_blockers(f, out);
      break;
    default: break;
  }
}

bool has_product(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::prod: return true;
    default: return false;
  }
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

Term reverse_term(const Term& t,
                  const std::vector<std::pair<std::string, std::string>>& names) {
  switch (t.kind()) {
    case Term::Kind::id: return t;
    case Term::Kind::op:
      for (const auto& [from, to] : names)
        if (from == t.name()) return Term::op(to);
      throw Error(Errc::undeclared_symbol, "no dual for symbol '" + t.name() + "'");
    case Term::Kind::comp: {
      std::vector<Term> fs;
      for (auto it = t.factors().rbegin(); it != t.factors().rend(); ++it)
        fs.push_back(reverse_term(*it, names));
      return Term::spine(std::move(fs), Type::unit());
    }
    default:
      throw Error(Errc::not_dualizable, "cannot dualize " + t.str() +
                                            ": pairs, projections and bang "
                                            "have no dual in the term language");
  }
}

}  // namespace

DualityMap dualize_theory(const Theory& theory) {
  std::vector<std::string> blockers;
  for (const auto& op : theory.ops()) {
    if (has_product(op.dom) || has_product(op.cod))
      blockers.push_back("product type in signature of '" + op.name + "'");
  }
  for (const auto& d : theory.definitions()) {
    std::vector<std::string> found;
    collect_blockers(d.body, found);
    for (auto& f : found) blockers.push_back(f + " in definition '" + d.name + "'");
  }
  for (const auto& ax : theory.axioms()) {
    std::vector<std::string> found;
    collect_blockers(ax.equation.lhs, found);
    collect_blockers(ax.equation.rhs, found);
    for (auto& f : found) blockers.push_back(f + " in axiom '" + ax.name + "'");
  }
  if (!blockers.empty())
    throw Error(Errc::not_dualizable,
                "theory is not dualizable: " + joined(blockers));

  DualityMap map{theory, Theory(dual(theory.effect())), {}};
  for (const auto& op : theory.ops())
    map.symbols.emplace_back(op.name, dual_symbol(op.name));
  for (const auto& d : theory.definitions())
    map.symbols.emplace_back(d.name, dual_symbol(d.name));

  Theory& target = map.target;
  for (const auto& t : theory.base_types()) target.add_base_type(t);
  for (const auto& op : theory.ops())
    target.add_op(OpDecl{dual_symbol(op.name), op.cod, op.dom, op.decoration});
  for (const auto& d : theory.definitions())
    target.add_definition(dual_symbol(d.name), dualize_term(map, d.body));
  for (const auto& ax : theory.axioms())
    target.add_axiom(dualize_equation(map, ax.equation), ax.name);
  return map;
}

Term dualize_term(const DualityMap& map, const Term& term) {
  return reverse_term(normalize(term), map.symbols);
}

Equation dualize_equation(const DualityMap& map, const Equation& eq) {
  return {eq.strength, dualize_term(map, eq.lhs), dualize_term(map, eq.rhs)};
}

Derivation dualize_derivation(const DualityMap& map, const Derivation& d) {
  if (is_pair_or_unit_rule(d.rule))
    throw Error(Errc::not_dualizable,
                "derivation uses " + std::string(rule_name(d.rule)) +
                    ", which has no dual");
  Derivation out;
  out.rule = d.rule;
  out.axiom = d.axiom;
  out.side = d.side;
  switch (d.rule) {
    case RuleId::subst_strong: out.rule = RuleId::repl_strong; break;
    case RuleId::repl_strong: out.rule = RuleId::subst_strong; break;
    case RuleId::weak_subst: out.rule = RuleId::weak_repl; break;
    case RuleId::weak_repl: out.rule = RuleId::weak_subst; break;
    default: break;
  }
  for (const auto& [key, value] : d.params) {
    std::string k = key;
    if (k == "g" && out.rule != d.rule) k = "h";
    else if (k == "h" && out.rule != d.rule) k = "g";
    out.params.emplace_back(std::move(k), dualize_term(map, value));
  }
  for (const auto& p : d.premises) out.premises.push_back(dualize_derivation(map, p));
  if (d.claim) out.claim = dualize_equation(map, *d.claim);
  return out;
}

namespace {

Term rename_term(const Term& t,
                 const std::vector<std::pair<std::string, std::string>>& names) {
  switch (t.kind()) {
    case Term::Kind::op:
      for (const auto& [from, to] : names)
        if (from == t.name()) return Term::op(to);
      return t;
    case Term::Kind::pair:
      return Term::pair(rename_term(t.left(), names), rename_term(t.right(), names));
    case Term::Kind::comp: {
      std::vector<Term> fs;
      for (const auto& f : t.factors()) fs.push_back(rename_term(f, names));
      return Term::spine(std::move(fs), Type::unit());
    }
    default: return t;
  }
}

std::string rename_name(const std::string& n,
                        const std::vector<std::pair<std::string, std::string>>& names) {
  for (const auto& [from, to] : names)
    if (from == n) return to;
  return n;
}

}  // namespace

Term rename_symbols(const Term& term,
                    const std::vector<std::pair<std::string, std::string>>& names) {
  return rename_term(term, names);
}

Theory rename_symbols(const Theory& theory,
                      const std::vector<std::pair<std::string, std::string>>& names) {
  Theory out(theory.effect());
  for (const auto& t : theory.base_types()) out.add_base_type(t);
  for (const auto& op : theory.ops())
    out.add_op(OpDecl{rename_name(op.name, names), op.dom, op.cod, op.decoration});
  for (const auto& d : theory.definitions())
    out.add_definition(rename_name(d.name, names), rename_term(d.body, names));
  for (const auto& ax : theory.axioms())
    out.add_axiom({ax.equation.strength, rename_term(ax.equation.lhs, names),
                   rename_term(ax.equation.rhs, names)},
                  ax.name);
  return out;
}

Derivation rename_symbols(const Derivation& d,
                          const std::vector<std::pair<std::string, std::string>>& names) {
  Derivation out = d;
  for (auto& [k, v] : out.params) v = rename_term(v, names);
  for (auto& p : out.premises) p = rename_symbols(p, names);
  if (out.claim) {
    out.claim->lhs = rename_term(out.claim->lhs, names);
    out.claim->rhs = rename_term(out.claim->rhs, names);
  }
  return out;
}

}  // namespace decolog
