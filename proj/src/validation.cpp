#include "decolog/validation.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace decolog {

namespace {

struct Meta {
  std::string name;
  Type dom;
  Type cod;
  std::vector<Decoration> ranks;
};

struct Schema {
  std::string name;
  std::optional<RuleId> rule;  // empty for non-rules
  RuleId related;
  std::string statement;
  std::vector<Meta> metas;
  std::vector<Equation> premises;
  std::optional<Derivation> derivation;  // shipped rules
  std::optional<Equation> conclusion;    // non-rules
};

const std::vector<Decoration> kAnyRank = {Decoration::pure(), Decoration::low(),
                                          Decoration::high()};

Term op(const char* name) { return Term::op(name); }

Equation eq(Strength s, Term l, Term r) { return {s, normalize(l), normalize(r)}; }

std::vector<Schema> schemas(Effect effect) {
  const Type B = Type::base("B");
  const Type U = Type::unit();
  auto meta = [&](const char* n, Type cod = Type::base("B"),
                  std::vector<Decoration> ranks = kAnyRank) {
    return Meta{n, B, std::move(cod), std::move(ranks)};
  };
  const auto S = Strength::strong;
  const auto W = Strength::weak;
  std::vector<Schema> out;

  auto shipped = [&](std::string name, RuleId rule, std::string statement,
                     std::vector<Meta> metas, std::vector<Equation> premises,
                     Derivation d) {
    out.push_back(Schema{std::move(name), rule, rule, std::move(statement),
                         std::move(metas), std::move(premises), std::move(d),
                         std::nullopt});
  };
  auto ax = [](int i) { return derive::axiom("ax" + std::to_string(i)); };

  shipped("refl", RuleId::refl, "⊢ f == f", {meta("f")}, {}, derive::refl(op("f")));
  for (Strength s : {S, W}) {
    const std::string tag = std::string("[") + std::string(strength_name(s)) + "]";
    shipped("sym" + tag, RuleId::sym, "a R b ⊢ b R a", {meta("a"), meta("b")},
            {eq(s, op("a"), op("b"))}, derive::sym(ax(1)));
    shipped("axiom" + tag, RuleId::axiom, "⊢ a R b (listed axiom)",
            {meta("a"), meta("b")}, {eq(s, op("a"), op("b"))}, ax(1));
  }
  shipped("trans_strong", RuleId::trans_strong, "a == b, b == c ⊢ a == c",
          {meta("a"), meta("b"), meta("c")},
          {eq(S, op("a"), op("b")), eq(S, op("b"), op("c"))},
          derive::trans(RuleId::trans_strong, ax(1), ax(2)));
  shipped("trans_weak", RuleId::trans_weak, "a ≈ b, b ≈ c ⊢ a ≈ c",
          {meta("a"), meta("b"), meta("c")},
          {eq(W, op("a"), op("b")), eq(W, op("b"), op("c"))},
          derive::trans(RuleId::trans_weak, ax(1), ax(2)));
  shipped("trans_mixed[weak,strong]", RuleId::trans_mixed, "a ≈ b, b == c ⊢ a ≈ c",
          {meta("a"), meta("b"), meta("c")},
          {eq(W, op("a"), op("b")), eq(S, op("b"), op("c"))},
          derive::trans(RuleId::trans_mixed, ax(1), ax(2)));
  shipped("trans_mixed[strong,weak]", RuleId::trans_mixed, "a == b, b ≈ c ⊢ a ≈ c",
          {meta("a"), meta("b"), meta("c")},
          {eq(S, op("a"), op("b")), eq(W, op("b"), op("c"))},
          derive::trans(RuleId::trans_mixed, ax(1), ax(2)));
  shipped("strong_to_weak", RuleId::strong_to_weak, "a == b ⊢ a ≈ b",
          {meta("a"), meta("b")}, {eq(S, op("a"), op("b"))},
          derive::strong_to_weak(ax(1)));
  shipped("weak_to_strong_lowrank", RuleId::weak_to_strong_lowrank,
          "a ≈ b, rank(a), rank(b) <= 1 ⊢ a == b", {meta("a"), meta("b")},
          {eq(W, op("a"), op("b"))}, derive::weak_to_strong(ax(1)));
  shipped("subst_strong", RuleId::subst_strong, "f1 == f2 ⊢ f1∘g == f2∘g",
          {meta("f1"), meta("f2"), meta("g")}, {eq(S, op("f1"), op("f2"))},
          derive::subst(RuleId::subst_strong, op("g"), ax(1)));
  shipped("repl_strong", RuleId::repl_strong, "f1 == f2 ⊢ h∘f1 == h∘f2",
          {meta("f1"), meta("f2"), meta("h")}, {eq(S, op("f1"), op("f2"))},
          derive::repl(RuleId::repl_strong, op("h"), ax(1)));
  shipped("weak_subst", RuleId::weak_subst,
          effect == Effect::states ? "f1 ≈ f2 ⊢ f1∘g ≈ f2∘g (any g)"
                                   : "f1 ≈ f2 ⊢ f1∘g ≈ f2∘g (g pure)",
          {meta("f1"), meta("f2"), meta("g")}, {eq(W, op("f1"), op("f2"))},
          derive::subst(RuleId::weak_subst, op("g"), ax(1)));
  shipped("weak_repl", RuleId::weak_repl,
          effect == Effect::states ? "f1 ≈ f2 ⊢ h∘f1 ≈ h∘f2 (h pure)"
                                   : "f1 ≈ f2 ⊢ h∘f1 ≈ h∘f2 (any h)",
          {meta("f1"), meta("f2"), meta("h")}, {eq(W, op("f1"), op("f2"))},
          derive::repl(RuleId::weak_repl, op("h"), ax(1)));
  shipped("pair_cong_strong", RuleId::pair_cong_strong,
          "f1 == f2, g1 == g2 ⊢ <f1,g1> == <f2,g2>",
          {meta("f1"), meta("f2"), meta("g1"), meta("g2")},
          {eq(S, op("f1"), op("f2")), eq(S, op("g1"), op("g2"))},
          derive::pair_cong(ax(1), ax(2)));
  for (int side : {1, 2}) {
    shipped("pair_proj[" + std::to_string(side) + "]", RuleId::pair_proj,
            side == 1 ? "⊢ p1∘<f,g> == f" : "⊢ p2∘<f,g> == g",
            {meta("f"), meta("g")}, {}, derive::pair_proj(op("f"), op("g"), side));
  }
  shipped("pair_comp_lowrank", RuleId::pair_comp_lowrank,
          "⊢ <f,g>∘w == <f∘w,g∘w> (w low rank)",
          {meta("f"), meta("g"), meta("w")}, {},
          derive::pair_comp(op("f"), op("g"), op("w")));
  shipped("unit_strong_lowrank", RuleId::unit_strong_lowrank,
          "⊢ f == bang (f : B -> Unit, low rank)", {meta("f", U)}, {},
          derive::unit(RuleId::unit_strong_lowrank, op("f")));
  shipped("unit_weak", RuleId::unit_weak, "⊢ f ≈ bang (f : B -> Unit)",
          {meta("f", U)}, {}, derive::unit(RuleId::unit_weak, op("f")));

  auto non_rule = [&](std::string name, RuleId related, std::string statement,
                      std::vector<Meta> metas, std::vector<Equation> premises,
                      Equation conclusion) {
    out.push_back(Schema{std::move(name), std::nullopt, related,
                         std::move(statement), std::move(metas),
                         std::move(premises), std::nullopt, std::move(conclusion)});
  };
  const std::vector<Decoration> effectful = {Decoration::low(), Decoration::high()};
  if (effect == Effect::states) {
    non_rule("weak_repl[h not pure]", RuleId::weak_repl,
             "f1 ≈ f2 ⊢ h∘f1 ≈ h∘f2 with h an observer or modifier",
             {meta("f1"), meta("f2"), meta("h", B, effectful)},
             {eq(W, op("f1"), op("f2"))},
             eq(W, Term::compose(op("h"), op("f1")), Term::compose(op("h"), op("f2"))));
  } else {
    non_rule("weak_subst[g not pure]", RuleId::weak_subst,
             "f1 ≈ f2 ⊢ f1∘g ≈ f2∘g with g a propagator or catcher",
             {meta("f1"), meta("f2"), meta("g", B, effectful)},
             {eq(W, op("f1"), op("f2"))},
             eq(W, Term::compose(op("f1"), op("g")), Term::compose(op("f2"), op("g"))));
    non_rule("unit_strong_lowrank[rank 1]", RuleId::unit_strong_lowrank,
             "⊢ f == bang with f : B -> Unit a propagator",
             {meta("f", U, {Decoration::low()})}, {},
             eq(S, op("f"), Term::bang(B)));
    non_rule("unit_weak[not pure]", RuleId::unit_weak,
             "⊢ f ≈ bang with f : B -> Unit a propagator or catcher",
             {meta("f", U, effectful)}, {}, eq(W, op("f"), Term::bang(B)));
  }
  return out;
}

struct Task {
  std::size_t schema;
  std::vector<Decoration> ranks;
};

struct Outcome {
  bool valid = false;
  std::uint64_t models = 0;
  std::optional<SchemaCountermodel> countermodel;
};

std::vector<std::vector<Decoration>> rank_choices(const std::vector<Meta>& metas) {
  std::vector<std::vector<Decoration>> out{{}};
  for (const auto& m : metas) {
    std::vector<std::vector<Decoration>> next;
    for (const auto& prefix : out) {
      for (Decoration r : m.ranks) {
        auto v = prefix;
        v.push_back(r);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

Outcome run(const Schema& schema, const std::vector<Decoration>& ranks,
            Effect effect, std::size_t max_carrier) {
  Outcome result;
  Theory theory(effect);
  theory.add_base_type("B");
  std::string instance;
  for (std::size_t i = 0; i < schema.metas.size(); ++i) {
    const Meta& m = schema.metas[i];
    theory.add_op(OpDecl{m.name, m.dom, m.cod, ranks[i]});
    if (!instance.empty()) instance += " ";
    instance += m.name + ":" + std::string(decoration_name(ranks[i], effect));
  }
  try {
    for (const auto& p : schema.premises) theory.add_axiom(p);
  } catch (const Error&) {
    return result;  // premises not expressible at these ranks (illegal pairs)
  }

  Equation conclusion;
  if (schema.derivation) {
    try {
      conclusion = check_derivation(theory, *schema.derivation).conclusion;
    } catch (const DerivationError& e) {
      if (e.code() == Errc::rule_misapplied) return result;
      throw;
    }
  } else {
    try {
      check_equation_wf(theory, *schema.conclusion);
    } catch (const Error&) {
      return result;
    }
    conclusion = *schema.conclusion;
  }
  result.valid = true;

  Bounds bounds = Bounds::up_to(theory, max_carrier);
  bounds.ceiling = kSweepCeiling;
  const CompiledEquation goal(theory, conclusion);
  enumerate_models(theory, bounds, [&](const FiniteModel& m) {
    ++result.models;
    if (auto w = goal.witness(m)) {
      result.countermodel =
          SchemaCountermodel{instance, theory, conclusion, Counterexample{m, *w}};
      return false;
    }
    return true;
  });
  return result;
}

}  // namespace

bool SoundnessReport::ok() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const RuleCheck& c) { return c.passed(); });
}

SoundnessReport validate_rules(Effect effect, std::span<const RuleId> rules,
                               std::size_t max_carrier, unsigned threads) {
  SoundnessReport report;
  report.effect = effect;
  report.max_carrier = max_carrier;

  std::vector<Schema> selected;
  for (auto& s : schemas(effect)) {
    if (std::find(rules.begin(), rules.end(), s.related) != rules.end())
      selected.push_back(std::move(s));
  }

  std::vector<Task> tasks;
  for (std::size_t i = 0; i < selected.size(); ++i)
    for (auto& r : rank_choices(selected[i].metas)) tasks.push_back({i, std::move(r)});

  std::vector<Outcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1))
      outcomes[t] = run(selected[tasks[t].schema], tasks[t].ranks, effect, max_carrier);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < selected.size(); ++i) {
    RuleCheck check;
    check.name = selected[i].name;
    check.rule = selected[i].rule;
    check.shipped = selected[i].rule.has_value();
    check.statement = selected[i].statement;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].schema != i || !outcomes[t].valid) continue;
      ++check.instances;
      check.models += outcomes[t].models;
      if (!check.countermodel && outcomes[t].countermodel)
        check.countermodel = std::move(outcomes[t].countermodel);
    }
    report.checks.push_back(std::move(check));
  }
  return report;
}

SoundnessReport validate_rules(Effect effect, std::size_t max_carrier,
                               unsigned threads) {
  return validate_rules(effect, all_rules(), max_carrier, threads);
}

std::string format_report(const SoundnessReport& report) {
  std::ostringstream out;
  out << "rule validation for " << effect_name(report.effect)
      << ", carriers <= " << report.max_carrier << "\n";
  for (const auto& c : report.checks) {
    std::string verdict;
    if (c.shipped) verdict = c.countermodel ? "UNSOUND" : "sound";
    else verdict = c.countermodel ? "refuted" : "NOT REFUTED";
    out << "  " << verdict << "  " << c.name << "  [" << c.statement << "]  "
        << c.instances << " instances, " << c.models << " models\n";
    if (c.countermodel) {
      const auto& cm = *c.countermodel;
      out << "      countermodel (" << cm.instance << ") for " << cm.conclusion.str()
          << ": at " << cm.counterexample.witness.input_label << " lhs gives "
          << cm.counterexample.witness.lhs_value << ", rhs gives "
          << cm.counterexample.witness.rhs_value << "\n";
    }
  }
  out << (report.ok() ? "all shipped rules sound, all non-rules refuted\n"
                      : "VALIDATION FAILED\n");
  return out.str();
}

}  // namespace decolog
