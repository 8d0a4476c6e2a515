#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "decolog/syntax.hpp"
#include "support.hpp"

using namespace decolog;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::parse_error;
}

Theory bank() { return parse_theory(read_file(testing::corpus("bank.dth"))); }

}  // namespace

TEST_CASE("ASCII and Unicode spellings agree") {
  const Theory th = bank();
  CHECK(parse_term(th, "balance∘deposit∘seven") == parse_term(th, "balance . deposit . seven"));
  CHECK(parse_term(th, "plus∘⟨seven, balance⟩") == parse_term(th, "plus.<seven,balance>"));
  CHECK(parse_equation(th, "weak: f ≈ g") == parse_equation(th, "weak f ~ g"));
  CHECK(parse_equation(th, "f == f") == parse_equation(th, "strong f == f"));
  CHECK(parse_type(th, "Int × Int") == parse_type(th, "Int * Int"));
  CHECK(parse_term(th, "(balance . deposit) . seven") == parse_term(th, "f"));
}

TEST_CASE("parse errors carry positions") {
  const Theory th = bank();
  try {
    parse_theory(read_file(testing::data("unbalanced_pair.dth")));
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(e.column() > 1);
  }
  CHECK(code_of([&] { parse_equation(th, "weak f == g"); }) == Errc::parse_error);
  CHECK(code_of([&] { parse_term(th, "f $ g"); }) == Errc::parse_error);
  CHECK(code_of([&] { parse_theory("type Int\n"); }) == Errc::parse_error);
  CHECK(code_of([&] { parse_theory("effect states\nop f : Unit -> Unit impure\n"); }) ==
        Errc::parse_error);
  CHECK(code_of([&] { parse_derivation(th, "(cut (refl f==f))"); }) == Errc::parse_error);
  CHECK(code_of([&] { parse_derivation(th, "(sym (refl f==f)"); }) == Errc::parse_error);
}

TEST_CASE("semantic errors in files") {
  CHECK(code_of([] { parse_theory(read_file(testing::data("observer_in_exceptions.dth"))); }) ==
        Errc::effect_keyword_mismatch);
  CHECK(code_of([] { parse_theory("effect states\ntype B\naxiom weak q ~ q\n"); }) ==
        Errc::undeclared_symbol);
  CHECK(code_of([] {
          parse_theory("effect states\ntype B\nop f : B -> B pure\naxiom strong f.bang(B) == f\n");
        }) == Errc::composition_type_mismatch);
  const Theory th = bank();
  CHECK(code_of([&] { parse_model(th, read_file(testing::data("bad_model_label.model"))); }) ==
        Errc::model_mismatch);
  CHECK(code_of([&] { parse_model(th, read_file(testing::data("missing_row.model"))); }) ==
        Errc::model_mismatch);
}

TEST_CASE("round trips") {
  SUBCASE("corpus theories") {
    for (auto name : {"bank.dth", "exc.dth"}) {
      const Theory th = parse_theory(read_file(testing::corpus(name)));
      CHECK(parse_theory(print_theory(th)) == th);
    }
  }
  SUBCASE("corpus models") {
    const Theory th = bank();
    const FiniteModel m = parse_model(th, read_file(testing::corpus("bank_mod4.model")));
    const FiniteModel back = parse_model(th, print_model(th, m));
    for (std::size_t i = 0; i < th.ops().size(); ++i) CHECK(back.table(i) == m.table(i));
    CHECK(print_model(th, back) == print_model(th, m));
  }
  SUBCASE("random models of both effects") {
    for (Effect eff : {Effect::states, Effect::exceptions}) {
      const Theory th = testing::small_theory(eff);
      std::mt19937_64 rng(3);
      for (int i = 0; i < 50; ++i) {
        const FiniteModel m = testing::random_model(th, 1 + i % 3, 1 + i % 2, rng);
        const FiniteModel back = parse_model(th, print_model(th, m));
        for (std::size_t k = 0; k < th.ops().size(); ++k) CHECK(back.table(k) == m.table(k));
        CHECK(back.effect_carrier() == m.effect_carrier());
      }
    }
  }
  SUBCASE("random terms and derivations") {
    for (Effect eff : {Effect::states, Effect::exceptions}) {
      const Theory th = testing::axiom_theory(eff, true);
      CHECK(parse_theory(print_theory(th)) == th);
      testing::TermGen tg(th, 17);
      for (int i = 0; i < 300; ++i) {
        const Term t = normalize(tg.any_term(4, Decoration::high()));
        CHECK(parse_term(th, t.str()) == t);
      }
      testing::DerivGen dg(th, 21, true);
      for (int i = 0; i < 100; ++i) {
        Derivation d = dg.next(5);
        d.claim = check_derivation(th, d).conclusion;
        const std::string text = print_derivation(d);
        CAPTURE(text);
        CHECK(parse_derivation(th, text) == d);
      }
    }
  }
}

TEST_CASE("model rows accept tags only where they belong") {
  const Theory th = parse_theory(read_file(testing::corpus("exc.dth")));
  const FiniteModel m = parse_model(th, read_file(testing::corpus("exc.model")));
  CHECK(m.table("throw").out == std::vector<std::uint32_t>{2});
  CHECK(m.table("catchZero").out == std::vector<std::uint32_t>{0, 1, 0});
  // A bare value in a propagator row means ok.
  const std::string text =
      "carrier Int = {0,1}\neffectcarrier = {E}\n"
      "table zero { () -> 0 }\ntable inc { 0 -> 1  1 -> 0 }\n"
      "table throw { () -> 1 }\ntable catchZero { 0 -> 0  1 -> 1  exc E -> ok 0 }\n";
  const FiniteModel m2 = parse_model(th, text);
  CHECK(m2.table("throw").out == std::vector<std::uint32_t>{1});
}
