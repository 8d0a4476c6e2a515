#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "decolog/deduction.hpp"
#include "decolog/syntax.hpp"
#include "decolog/validation.hpp"
#include "support.hpp"

using namespace decolog;

namespace {

Theory bank() { return parse_theory(read_file(testing::corpus("bank.dth"))); }
Theory exc() { return parse_theory(read_file(testing::corpus("exc.dth"))); }

const DerivationError* rejected(const Theory& th, const Derivation& d,
                                DerivationError* slot) {
  try {
    check_derivation(th, d);
  } catch (const DerivationError& e) {
    *slot = e;
    return slot;
  }
  return nullptr;
}

Errc rejection(const Theory& th, const Derivation& d) {
  try {
    check_derivation(th, d);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("derivation was accepted");
  return Errc::parse_error;
}

const Type B = Type::base("B");

}  // namespace

TEST_CASE("the bank derivation") {
  const Theory th = bank();
  const Derivation d = parse_derivation(th, read_file(testing::corpus("bank_proof.drv")));
  const Judgment j = check_derivation(th, d);
  CHECK(j.conclusion.str() == "weak: balance∘deposit∘seven ≈ plus∘<seven,balance>");
  CHECK(j.conclusion == parse_equation(th, "weak f ~ g"));
  // The conclusion survives every model of the axiom with carriers <= 2.
  CHECK_FALSE(find_counterexample(th, j.conclusion, Bounds::up_to(th, 2)));
}

TEST_CASE("weak replacement by a modifier is rejected under states") {
  const Theory th = bank();
  const Derivation d =
      parse_derivation(th, read_file(testing::data("illegal_weak_repl.drv")));
  DerivationError slot(Errc::parse_error, "", RuleId::refl, "");
  const DerivationError* e = rejected(th, d, &slot);
  REQUIRE(e != nullptr);
  CHECK(e->code() == Errc::rule_misapplied);
  CHECK(e->node() == "0");
  CHECK(e->rule() == RuleId::weak_repl);

  // The would-be conclusion with a state-reading context is false.
  const Axiom& ax = *th.find_axiom("ax1");
  const Term h = parse_term(th, "balance . deposit");
  const Equation bogus{Strength::weak, Term::compose(h, ax.equation.lhs),
                       Term::compose(h, ax.equation.rhs)};
  const auto cex = find_counterexample(th, bogus, Bounds::up_to(th, 2));
  REQUIRE(cex.has_value());
  CHECK(holds(cex->model, th, ax.equation));
  CHECK_FALSE(holds(cex->model, th, bogus));
}

TEST_CASE("refl") {
  const Theory th = bank();
  CHECK(check_derivation(th, parse_derivation(th, "(refl f==f)")).conclusion ==
        parse_equation(th, "strong f == f"));
  CHECK(check_derivation(th, derive::refl(Term::op("seven"))).conclusion.strength ==
        Strength::strong);
  CHECK(rejection(th, Derivation{}) == Errc::ill_formed_parameter);
}

TEST_CASE("checker errors") {
  const Theory th = bank();
  SUBCASE("stated conclusion must match") {
    Derivation d = derive::refl(Term::op("seven"));
    d.claim = parse_equation(th, "strong seven == balance");
    CHECK(rejection(th, d) == Errc::conclusion_mismatch);
  }
  SUBCASE("unknown axiom") {
    CHECK(rejection(th, derive::axiom("ax9")) == Errc::rule_misapplied);
  }
  SUBCASE("missing and stray parameters") {
    Derivation d = derive::axiom("ax1");
    Derivation s;
    s.rule = RuleId::weak_subst;
    s.premises = {d};
    CHECK(rejection(th, s) == Errc::ill_formed_parameter);
    s.with("g", Term::op("seven")).with("h", Term::op("plus"));
    CHECK(rejection(th, s) == Errc::ill_formed_parameter);
  }
  SUBCASE("ill-typed parameter") {
    CHECK(rejection(th, derive::subst(RuleId::weak_subst, Term::op("deposit"),
                                      derive::axiom("ax1"))) ==
          Errc::ill_formed_parameter);
  }
  SUBCASE("premise count") {
    Derivation d;
    d.rule = RuleId::sym;
    CHECK(rejection(th, d) == Errc::rule_misapplied);
  }
  SUBCASE("strength mismatch") {
    CHECK(rejection(th, derive::subst(RuleId::subst_strong, Term::op("seven"),
                                      derive::axiom("ax1"))) == Errc::rule_misapplied);
    CHECK(rejection(th, derive::trans(RuleId::trans_mixed, derive::refl(Term::op("seven")),
                                      derive::refl(Term::op("seven")))) ==
          Errc::rule_misapplied);
  }
  SUBCASE("error paths point at the failing node") {
    const Derivation bad = derive::trans(
        RuleId::trans_mixed, derive::axiom("ax1"),
        derive::repl(RuleId::weak_repl, Term::op("deposit"), derive::axiom("ax1")));
    try {
      check_derivation(th, bad);
      FAIL("accepted");
    } catch (const DerivationError& e) {
      CHECK(e.node() == "0.1");
    }
  }
}

TEST_CASE("weak congruence side conditions depend on the effect") {
  SUBCASE("states") {
    const Theory th = testing::axiom_theory(Effect::states, false);
    const Derivation ax = derive::axiom("ax1");  // weak w ~ u
    CHECK_NOTHROW(check_derivation(th, derive::subst(RuleId::weak_subst, Term::op("w"), ax)));
    CHECK_NOTHROW(check_derivation(th, derive::repl(RuleId::weak_repl, Term::op("u"), ax)));
    CHECK(rejection(th, derive::repl(RuleId::weak_repl, Term::op("v"), ax)) ==
          Errc::rule_misapplied);
  }
  SUBCASE("exceptions") {
    const Theory th = testing::axiom_theory(Effect::exceptions, false);
    const Derivation ax = derive::axiom("ax1");
    CHECK_NOTHROW(check_derivation(th, derive::repl(RuleId::weak_repl, Term::op("w"), ax)));
    CHECK_NOTHROW(check_derivation(th, derive::subst(RuleId::weak_subst, Term::op("u"), ax)));
    CHECK(rejection(th, derive::subst(RuleId::weak_subst, Term::op("v"), ax)) ==
          Errc::rule_misapplied);
  }
  SUBCASE("the exceptions corpus proof") {
    const Theory th = exc();
    const Derivation d = parse_derivation(th, read_file(testing::corpus("exc_proof.drv")));
    CHECK(check_derivation(th, d).conclusion == parse_equation(th, "weak inc . catchZero ~ inc"));
  }
}

TEST_CASE("low-rank and structural rules") {
  const Theory st = testing::small_theory(Effect::states);
  const Theory ex = testing::small_theory(Effect::exceptions);
  SUBCASE("weak_to_strong needs both sides of rank <= 1") {
    Theory th = testing::small_theory(Effect::states);
    th.add_axiom({Strength::weak, Term::op("v"), Term::op("u")}, "low");
    th.add_axiom({Strength::weak, Term::op("w"), Term::op("u")}, "high");
    CHECK(check_derivation(th, derive::weak_to_strong(derive::axiom("low"))).conclusion.strength ==
          Strength::strong);
    CHECK(rejection(th, derive::weak_to_strong(derive::axiom("high"))) ==
          Errc::rule_misapplied);
  }
  SUBCASE("pair_proj") {
    const Judgment j = check_derivation(st, derive::pair_proj(Term::op("u"), Term::op("v"), 2));
    CHECK(j.conclusion.rhs == Term::op("v"));
    CHECK(rejection(st, derive::pair_proj(Term::op("u"), Term::op("w"), 1)) ==
          Errc::rule_misapplied);
    CHECK(rejection(ex, derive::pair_proj(Term::op("u"), Term::op("v"), 1)) ==
          Errc::rule_misapplied);
    Derivation bad = derive::pair_proj(Term::op("u"), Term::op("u"), 1);
    bad.side = 3;
    CHECK(rejection(st, bad) == Errc::rule_misapplied);
  }
  SUBCASE("pair_comp_lowrank") {
    CHECK_NOTHROW(check_derivation(st, derive::pair_comp(Term::op("u"), Term::op("v"), Term::op("v"))));
    CHECK(rejection(st, derive::pair_comp(Term::op("u"), Term::op("v"), Term::op("w"))) ==
          Errc::rule_misapplied);
    CHECK(rejection(ex, derive::pair_comp(Term::op("u"), Term::op("u"), Term::op("v"))) ==
          Errc::rule_misapplied);
  }
  SUBCASE("unit rules") {
    const Term obs = Term::compose(Term::bang(B), Term::op("v"));
    const Term mod = Term::compose(Term::bang(B), Term::op("w"));
    CHECK(check_derivation(st, derive::unit(RuleId::unit_strong_lowrank, obs)).conclusion.rhs ==
          Term::bang(B));
    CHECK(rejection(st, derive::unit(RuleId::unit_strong_lowrank, mod)) == Errc::rule_misapplied);
    CHECK_NOTHROW(check_derivation(st, derive::unit(RuleId::unit_weak, mod)));
    CHECK(rejection(ex, derive::unit(RuleId::unit_weak, obs)) == Errc::rule_misapplied);
    CHECK(rejection(st, derive::unit(RuleId::unit_weak, Term::op("u"))) == Errc::rule_misapplied);
  }
  SUBCASE("pair_cong_strong keeps pairs legal") {
    Theory th = testing::small_theory(Effect::states);
    th.add_axiom({Strength::strong, Term::op("w"), Term::op("w")}, "ww");
    th.add_axiom({Strength::strong, Term::op("v"), Term::op("v")}, "vv");
    CHECK_NOTHROW(check_derivation(th, derive::pair_cong(derive::axiom("vv"), derive::axiom("vv"))));
    CHECK(rejection(th, derive::pair_cong(derive::axiom("ww"), derive::axiom("vv"))) ==
          Errc::rule_misapplied);
  }
}

TEST_CASE("rule catalog") {
  CHECK(all_rules().size() == 17);
  for (RuleId r : all_rules()) CHECK(parse_rule(rule_name(r)) == r);
  CHECK_FALSE(parse_rule("cut").has_value());
  CHECK(is_pair_or_unit_rule(RuleId::pair_proj));
  CHECK_FALSE(is_pair_or_unit_rule(RuleId::weak_subst));
}

TEST_CASE("accepted derivations are sound in every small model") {
  for (Effect eff : {Effect::states, Effect::exceptions}) {
    const Theory th = testing::axiom_theory(eff, false);
    const auto models = collect_models(th, Bounds::up_to(th, 2));
    REQUIRE(models.size() > 10);
    testing::DerivGen gen(th, 31 + static_cast<int>(eff), true);
    std::size_t checked = 0;
    for (int i = 0; i < 150; ++i) {
      const Derivation d = gen.next(6);
      const Equation c = check_derivation(th, d).conclusion;
      const CompiledEquation ce(th, c);
      CAPTURE(print_derivation(d));
      for (const auto& m : models) CHECK(ce.holds(m));
      ++checked;
    }
    CHECK(checked == 150);
    CHECK(gen.rejected == 0);
  }
}

TEST_CASE("rule validation harness") {
  SUBCASE("an empty rule list is vacuously sound") {
    const SoundnessReport r = validate_rules(Effect::states, std::span<const RuleId>{});
    CHECK(r.ok());
    CHECK(r.checks.empty());
  }
  SUBCASE("states weak substitution and its shadow") {
    const RuleId rules[] = {RuleId::weak_subst, RuleId::weak_repl};
    const SoundnessReport r = validate_rules(Effect::states, rules, 2, 1);
    CHECK(r.ok());
    bool saw_non_rule = false;
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.passed());
      CHECK(c.instances > 0);
      if (!c.shipped) {
        saw_non_rule = true;
        REQUIRE(c.countermodel.has_value());
        const auto& cm = *c.countermodel;
        CHECK_FALSE(holds(cm.counterexample.model, cm.theory, cm.conclusion));
        for (const auto& ax : cm.theory.axioms())
          CHECK(holds(cm.counterexample.model, cm.theory, ax.equation));
      }
    }
    CHECK(saw_non_rule);
  }
}
