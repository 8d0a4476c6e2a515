#include "decolog/deduction.hpp"

#include <algorithm>
#include <array>

namespace decolog {

namespace {

constexpr std::array<std::pair<RuleId, std::string_view>, 17> kRules = {{
    {RuleId::refl, "refl"},
    {RuleId::sym, "sym"},
    {RuleId::trans_strong, "trans_strong"},
    {RuleId::trans_weak, "trans_weak"},
    {RuleId::trans_mixed, "trans_mixed"},
    {RuleId::strong_to_weak, "strong_to_weak"},
    {RuleId::weak_to_strong_lowrank, "weak_to_strong_lowrank"},
    {RuleId::subst_strong, "subst_strong"},
    {RuleId::repl_strong, "repl_strong"},
    {RuleId::weak_subst, "weak_subst"},
    {RuleId::weak_repl, "weak_repl"},
    {RuleId::pair_cong_strong, "pair_cong_strong"},
    {RuleId::pair_proj, "pair_proj"},
    {RuleId::pair_comp_lowrank, "pair_comp_lowrank"},
    {RuleId::unit_strong_lowrank, "unit_strong_lowrank"},
    {RuleId::unit_weak, "unit_weak"},
    {RuleId::axiom, "axiom"},
}};

constexpr std::array<RuleId, 17> kAllRules = [] {
  std::array<RuleId, 17> out{};
  for (std::size_t i = 0; i < kRules.size(); ++i) out[i] = kRules[i].first;
  return out;
}();

}  // namespace

std::string_view rule_name(RuleId rule) noexcept {
  for (const auto& [id, name] : kRules)
    if (id == rule) return name;
  return "?";
}

std::optional<RuleId> parse_rule(std::string_view name) noexcept {
  for (const auto& [id, n] : kRules)
    if (n == name) return id;
  return std::nullopt;
}

std::span<const RuleId> all_rules() noexcept { return kAllRules; }

bool is_pair_or_unit_rule(RuleId rule) noexcept {
  switch (rule) {
    case RuleId::pair_cong_strong:
    case RuleId::pair_proj:
    case RuleId::pair_comp_lowrank:
    case RuleId::unit_strong_lowrank:
    case RuleId::unit_weak: return true;
    default: return false;
  }
}

const Term* Derivation::param(std::string_view key) const noexcept {
  for (const auto& [k, v] : params)
    if (k == key) return &v;
  return nullptr;
}

Derivation& Derivation::with(std::string key, Term value) {
  params.emplace_back(std::move(key), std::move(value));
  return *this;
}

std::size_t Derivation::size() const noexcept {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

namespace derive {

Derivation refl(Term t) {
  Derivation d{RuleId::refl};
  return std::move(d.with("t", std::move(t)));
}

Derivation axiom(std::string name) {
  Derivation d{RuleId::axiom};
  d.axiom = std::move(name);
  return d;
}

Derivation sym(Derivation p) {
  Derivation d{RuleId::sym};
  d.premises.push_back(std::move(p));
  return d;
}

Derivation trans(RuleId rule, Derivation a, Derivation b) {
  Derivation d{rule};
  d.premises.push_back(std::move(a));
  d.premises.push_back(std::move(b));
  return d;
}

Derivation strong_to_weak(Derivation p) {
  Derivation d{RuleId::strong_to_weak};
  d.premises.push_back(std::move(p));
  return d;
}

Derivation weak_to_strong(Derivation p) {
  Derivation d{RuleId::weak_to_strong_lowrank};
  d.premises.push_back(std::move(p));
  return d;
}

Derivation subst(RuleId rule, Term g, Derivation p) {
  Derivation d{rule};
  d.with("g", std::move(g));
  d.premises.push_back(std::move(p));
  return d;
}

Derivation repl(RuleId rule, Term h, Derivation p) {
  Derivation d{rule};
  d.with("h", std::move(h));
  d.premises.push_back(std::move(p));
  return d;
}

Derivation pair_cong(Derivation left, Derivation right) {
  return trans(RuleId::pair_cong_strong, std::move(left), std::move(right));
}

Derivation pair_proj(Term f, Term g, int side) {
  Derivation d{RuleId::pair_proj};
  d.with("f", std::move(f)).with("g", std::move(g));
  d.side = side;
  return d;
}

Derivation pair_comp(Term f, Term g, Term w) {
  Derivation d{RuleId::pair_comp_lowrank};
  d.with("f", std::move(f)).with("g", std::move(g)).with("w", std::move(w));
  return d;
}

Derivation unit(RuleId rule, Term f) {
  Derivation d{rule};
  return std::move(d.with("f", std::move(f)));
}

}  // namespace derive

namespace {

class Checker {
 public:
  explicit Checker(const Theory& theory) : theory_(theory) {}

  Equation check(const Derivation& d, const std::string& path) {
    Equation eq = conclude(d, path);
    if (d.claim) {
      Equation claim{d.claim->strength, normalize(d.claim->lhs),
                     normalize(d.claim->rhs)};
      if (claim != eq)
        fail(Errc::conclusion_mismatch, path, d,
             "stated conclusion " + claim.str() + " but the rule yields " +
                 eq.str());
    }
    return eq;
  }

 private:
  [[noreturn]] void fail(Errc code, const std::string& path,
                         const Derivation& d, const std::string& detail) {
    throw DerivationError(code, path, d.rule, detail);
  }

  void expect_shape(const Derivation& d, const std::string& path,
                    std::size_t premises,
                    std::initializer_list<std::string_view> keys) {
    if (d.premises.size() != premises)
      fail(Errc::rule_misapplied, path, d,
           "expects " + std::to_string(premises) + " premise(s), got " +
               std::to_string(d.premises.size()));
    for (const auto& [k, v] : d.params) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end())
        fail(Errc::ill_formed_parameter, path, d, "unexpected parameter '" + k + "'");
    }
    for (auto k : keys) {
      if (k == "t" && d.rule == RuleId::refl) continue;  // may come from claim
      if (!d.param(k))
        fail(Errc::ill_formed_parameter, path, d,
             "missing parameter '" + std::string(k) + "'");
    }
  }

  struct Info {
    Term term;
    Arrow arrow;
    Decoration rank;
  };

  Info info(const Term& t, const std::string& path, const Derivation& d,
            Errc on_error = Errc::ill_formed_parameter) {
    Term n = normalize(t);
    try {
      return {n, wf_term(theory_, n), infer_decoration(theory_, n)};
    } catch (const Error& e) {
      fail(on_error, path, d, "term " + n.str() + ": " + e.what());
    }
  }

  Info param(const Derivation& d, std::string_view key, const std::string& path) {
    return info(*d.param(key), path, d);
  }

  std::vector<Equation> premises(const Derivation& d, const std::string& path) {
    std::vector<Equation> out;
    for (std::size_t i = 0; i < d.premises.size(); ++i)
      out.push_back(check(d.premises[i], path + "." + std::to_string(i)));
    return out;
  }

  void require(bool ok, const std::string& path, const Derivation& d,
               const std::string& detail) {
    if (!ok) fail(Errc::rule_misapplied, path, d, detail);
  }

  void require_strength(const Equation& eq, Strength s, const std::string& path,
                        const Derivation& d) {
    require(eq.strength == s, path, d,
            "premise " + eq.str() + " must be " + std::string(strength_name(s)));
  }

  Arrow side_arrow(const Equation& eq) { return wf_term(theory_, eq.lhs); }

  Decoration limit() const { return pair_component_limit(theory_.effect()); }

  Equation conclude(const Derivation& d, const std::string& path) {
    const bool states = theory_.effect() == Effect::states;
    switch (d.rule) {
      case RuleId::refl: {
        expect_shape(d, path, 0, {"t"});
        const Term* t = d.param("t");
        if (!t && d.claim) t = &d.claim->lhs;
        if (!t) fail(Errc::ill_formed_parameter, path, d, "missing parameter 't'");
        Info i = info(*t, path, d);
        return {Strength::strong, i.term, i.term};
      }
      case RuleId::axiom: {
        expect_shape(d, path, 0, {});
        const Axiom* ax = theory_.find_axiom(d.axiom);
        require(ax != nullptr, path, d, "no axiom named '" + d.axiom + "'");
        return ax->equation;
      }
      case RuleId::sym: {
        expect_shape(d, path, 1, {});
        Equation p = premises(d, path)[0];
        return {p.strength, p.rhs, p.lhs};
      }
      case RuleId::trans_strong:
      case RuleId::trans_weak:
      case RuleId::trans_mixed: {
        expect_shape(d, path, 2, {});
        auto ps = premises(d, path);
        require(ps[0].rhs == ps[1].lhs, path, d,
                "middle terms differ: " + ps[0].rhs.str() + " vs " +
                    ps[1].lhs.str());
        if (d.rule == RuleId::trans_strong) {
          require_strength(ps[0], Strength::strong, path, d);
          require_strength(ps[1], Strength::strong, path, d);
          return {Strength::strong, ps[0].lhs, ps[1].rhs};
        }
        if (d.rule == RuleId::trans_weak) {
          require_strength(ps[0], Strength::weak, path, d);
          require_strength(ps[1], Strength::weak, path, d);
        } else {
          require(ps[0].strength != ps[1].strength, path, d,
                  "trans_mixed needs one strong and one weak premise");
        }
        return {Strength::weak, ps[0].lhs, ps[1].rhs};
      }
      case RuleId::strong_to_weak: {
        expect_shape(d, path, 1, {});
        Equation p = premises(d, path)[0];
        require_strength(p, Strength::strong, path, d);
        return {Strength::weak, p.lhs, p.rhs};
      }
      case RuleId::weak_to_strong_lowrank: {
        expect_shape(d, path, 1, {});
        Equation p = premises(d, path)[0];
        require_strength(p, Strength::weak, path, d);
        auto report = check_equation_wf(theory_, p);
        require(report.comparison_rank() <= Decoration::low(), path, d,
                "both sides must have rank <= 1, got " +
                    std::to_string(report.lhs_rank.rank) + " and " +
                    std::to_string(report.rhs_rank.rank));
        return {Strength::strong, p.lhs, p.rhs};
      }
      case RuleId::subst_strong:
      case RuleId::weak_subst: {
        expect_shape(d, path, 1, {"g"});
        Equation p = premises(d, path)[0];
        const Strength s =
            d.rule == RuleId::subst_strong ? Strength::strong : Strength::weak;
        require_strength(p, s, path, d);
        Info g = param(d, "g", path);
        Arrow a = side_arrow(p);
        if (g.arrow.cod != a.dom)
          fail(Errc::ill_formed_parameter, path, d,
               "g has codomain " + g.arrow.cod.str() + " but the premise has domain " +
                   a.dom.str());
        if (d.rule == RuleId::weak_subst && !states)
          require(g.rank == Decoration::pure(), path, d,
                  "under exceptions weak substitution needs a pure g, got " +
                      std::string(decoration_name(g.rank, theory_.effect())) +
                      " " + g.term.str());
        return {s, Term::compose(p.lhs, g.term), Term::compose(p.rhs, g.term)};
      }
      case RuleId::repl_strong:
      case RuleId::weak_repl: {
        expect_shape(d, path, 1, {"h"});
        Equation p = premises(d, path)[0];
        const Strength s =
            d.rule == RuleId::repl_strong ? Strength::strong : Strength::weak;
        require_strength(p, s, path, d);
        Info h = param(d, "h", path);
        Arrow a = side_arrow(p);
        if (h.arrow.dom != a.cod)
          fail(Errc::ill_formed_parameter, path, d,
               "h has domain " + h.arrow.dom.str() + " but the premise has codomain " +
                   a.cod.str());
        if (d.rule == RuleId::weak_repl && states)
          require(h.rank == Decoration::pure(), path, d,
                  "under states weak replacement needs a pure h, got " +
                      std::string(decoration_name(h.rank, theory_.effect())) +
                      " " + h.term.str());
        return {s, Term::compose(h.term, p.lhs), Term::compose(h.term, p.rhs)};
      }
      case RuleId::pair_cong_strong: {
        expect_shape(d, path, 2, {});
        auto ps = premises(d, path);
        require_strength(ps[0], Strength::strong, path, d);
        require_strength(ps[1], Strength::strong, path, d);
        Term l = Term::pair(ps[0].lhs, ps[1].lhs);
        Term r = Term::pair(ps[0].rhs, ps[1].rhs);
        info(l, path, d, Errc::rule_misapplied);
        info(r, path, d, Errc::rule_misapplied);
        return {Strength::strong, l, r};
      }
      case RuleId::pair_proj: {
        expect_shape(d, path, 0, {"f", "g"});
        require(d.side == 1 || d.side == 2, path, d, "side must be 1 or 2");
        Info f = param(d, "f", path);
        Info g = param(d, "g", path);
        Term pair = Term::pair(f.term, g.term);
        info(pair, path, d, Errc::rule_misapplied);
        Term proj = d.side == 1 ? Term::proj1(f.arrow.cod, g.arrow.cod)
                                : Term::proj2(f.arrow.cod, g.arrow.cod);
        return {Strength::strong, Term::compose(proj, pair),
                d.side == 1 ? f.term : g.term};
      }
      case RuleId::pair_comp_lowrank: {
        expect_shape(d, path, 0, {"f", "g", "w"});
        Info f = param(d, "f", path);
        Info g = param(d, "g", path);
        Info w = param(d, "w", path);
        Term pair = Term::pair(f.term, g.term);
        Info p = info(pair, path, d, Errc::rule_misapplied);
        if (w.arrow.cod != p.arrow.dom)
          fail(Errc::ill_formed_parameter, path, d,
               "w has codomain " + w.arrow.cod.str() + " but the pair has domain " +
                   p.arrow.dom.str());
        require(w.rank <= limit(), path, d,
                "w must have rank <= " + std::to_string(limit().rank) + ", got " +
                    std::to_string(w.rank.rank));
        Term rhs = Term::pair(Term::compose(f.term, w.term),
                              Term::compose(g.term, w.term));
        return {Strength::strong, Term::compose(pair, w.term), rhs};
      }
      case RuleId::unit_strong_lowrank:
      case RuleId::unit_weak: {
        expect_shape(d, path, 0, {"f"});
        Info f = param(d, "f", path);
        require(f.arrow.cod.is_unit(), path, d,
                "f must have codomain Unit, got " + f.arrow.cod.str());
        const bool strong = d.rule == RuleId::unit_strong_lowrank;
        const Decoration allowed =
            strong ? limit() : (states ? Decoration::high() : Decoration::pure());
        require(f.rank <= allowed, path, d,
                "f must have rank <= " + std::to_string(allowed.rank) +
                    ", got " + std::to_string(f.rank.rank));
        return {strong ? Strength::strong : Strength::weak, f.term,
                Term::bang(f.arrow.dom)};
      }
    }
    fail(Errc::rule_misapplied, path, d, "unknown rule");
  }

  const Theory& theory_;
};

}  // namespace

Judgment check_derivation(const Theory& theory, const Derivation& d) {
  Checker checker(theory);
  return Judgment{checker.check(d, "0")};
}

}  // namespace decolog
