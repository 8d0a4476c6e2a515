#include "decolog/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "decolog/duality.hpp"
#include "decolog/prover.hpp"
#include "decolog/syntax.hpp"

namespace decolog {

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kParse = 2;
constexpr int kMismatch = 3;
constexpr int kTooLarge = 4;

std::uint64_t enumeration_ceiling() {
  if (const char* env = std::getenv("DECOLOG_MAX_ENUM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultEnumerationCeiling;
}

void report_error(std::ostream& err, const std::string& where, const Error& e) {
  err << where << ":" << e.what() << " [" << errc_name(e.code()) << "]\n";
}

// Loads a file, mapping read failures and syntax errors to exit 2.
struct Loaded {
  std::optional<Theory> theory;
  int code = kOk;
};

Loaded load_theory(const std::string& path, std::ostream& err) {
  Loaded l;
  try {
    l.theory = parse_theory(read_file(path));
  } catch (const ParseError& e) {
    report_error(err, path, e);
    l.code = kParse;
  } catch (const Error& e) {
    report_error(err, path, e);
    l.code = kFailed;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    l.code = kParse;
  }
  return l;
}

std::string rank_text(Decoration d, Effect effect) {
  return std::string(decoration_name(d, effect)) + " (rank " +
         std::to_string(d.rank) + ")";
}

std::string arrow_text(const Arrow& a) {
  return a.dom.str() + " -> " + a.cod.str();
}

void print_witness(std::ostream& out, const Witness& w) {
  out << "  witness: at " << w.input_label << " lhs gives " << w.lhs_value
      << ", rhs gives " << w.rhs_value << "\n";
}

// ------------------------------------------------------------------ check

int cmd_check(const std::string& path, bool as_json, std::ostream& out,
              std::ostream& err) {
  auto l = load_theory(path, err);
  if (!l.theory) return l.code;
  const Theory& th = *l.theory;
  const Effect eff = th.effect();

  json j;
  j["effect"] = effect_name(eff);
  j["types"] = th.base_types();
  j["ops"] = json::array();
  j["definitions"] = json::array();
  j["axioms"] = json::array();

  std::ostringstream human;
  human << path << ": effect " << effect_name(eff) << ", "
      << th.base_types().size() << " base types, " << th.ops().size()
      << " operations, " << th.definitions().size() << " definitions, "
      << th.axioms().size() << " axioms\n";
  for (const auto& op : th.ops()) {
    j["ops"].push_back({{"name", op.name},
                        {"arrow", arrow_text({op.dom, op.cod})},
                        {"rank", op.decoration.rank},
                        {"decoration", decoration_name(op.decoration, eff)}});
    human << "  op    " << op.name << " : " << arrow_text({op.dom, op.cod}) << "  "
        << rank_text(op.decoration, eff) << "\n";
  }
  for (const auto& d : th.definitions()) {
    const Arrow a = wf_term(th, d.body);
    const Decoration r = infer_decoration(th, d.body);
    j["definitions"].push_back({{"name", d.name},
                                {"term", d.body.str()},
                                {"arrow", arrow_text(a)},
                                {"rank", r.rank},
                                {"decoration", decoration_name(r, eff)}});
    human << "  def   " << d.name << " = " << d.body.str() << " : " << arrow_text(a)
        << "  " << rank_text(r, eff) << "\n";
  }
  for (const auto& ax : th.axioms()) {
    const EquationReport rep = check_equation_wf(th, ax.equation);
    j["axioms"].push_back({{"name", ax.name},
                           {"equation", ax.equation.str()},
                           {"arrow", arrow_text(rep.arrow)},
                           {"lhs_rank", rep.lhs_rank.rank},
                           {"rhs_rank", rep.rhs_rank.rank}});
    human << "  axiom " << ax.name << ": " << ax.equation.str() << " : "
        << arrow_text(rep.arrow) << "  ranks " << int(rep.lhs_rank.rank) << ", "
        << int(rep.rhs_rank.rank) << "\n";
  }
  j["ok"] = true;
  if (as_json) out << j.dump(2) << "\n";
  else out << human.str() << "ok\n";
  return kOk;
}

// --------------------------------------------------------------- decorate

int cmd_decorate(const std::string& path, const std::string& text, bool as_json,
                 std::ostream& out, std::ostream& err) {
  auto l = load_theory(path, err);
  if (!l.theory) return l.code;
  try {
    const Term t = parse_term(*l.theory, text);
    const Arrow a = wf_term(*l.theory, t);
    const Decoration r = infer_decoration(*l.theory, t);
    if (as_json) {
      out << json{{"term", t.str()},
                  {"arrow", arrow_text(a)},
                  {"rank", r.rank},
                  {"decoration", decoration_name(r, l.theory->effect())}}
                 .dump(2)
          << "\n";
    } else {
      out << t.str() << " : " << arrow_text(a) << "  "
          << rank_text(r, l.theory->effect()) << "\n";
    }
    return kOk;
  } catch (const ParseError& e) {
    report_error(err, "term", e);
    return kParse;
  } catch (const Error& e) {
    report_error(err, "term", e);
    return kFailed;
  }
}

// ----------------------------------------------------------------- verify

int cmd_verify(const std::string& theory_path, const std::string& drv_path,
               bool as_json, std::ostream& out, std::ostream& err) {
  auto l = load_theory(theory_path, err);
  if (!l.theory) return l.code;
  Derivation d;
  try {
    d = parse_derivation(*l.theory, read_file(drv_path));
  } catch (const ParseError& e) {
    report_error(err, drv_path, e);
    return kParse;
  } catch (const Error& e) {
    report_error(err, drv_path, e);
    return kFailed;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kParse;
  }
  try {
    const Judgment j = check_derivation(*l.theory, d);
    if (as_json)
      out << json{{"accepted", true},
                  {"conclusion", j.conclusion.str()},
                  {"nodes", d.size()}}
                 .dump(2)
          << "\n";
    else
      out << j.conclusion.str() << "\n";
    return kOk;
  } catch (const DerivationError& e) {
    if (as_json)
      out << json{{"accepted", false},
                  {"node", e.node()},
                  {"rule", rule_name(e.rule())},
                  {"error", errc_name(e.code())},
                  {"message", e.what()}}
                 .dump(2)
          << "\n";
    err << "rejected: " << e.what() << " [" << errc_name(e.code()) << "]\n";
    return kFailed;
  } catch (const Error& e) {
    report_error(err, drv_path, e);
    return kFailed;
  }
}

// ------------------------------------------------------------ model-check

int cmd_model_check(const std::string& theory_path, const std::string& model_path,
                    const std::string& eq_text, bool as_json, std::ostream& out,
                    std::ostream& err) {
  auto l = load_theory(theory_path, err);
  if (!l.theory) return l.code == kFailed ? kParse : l.code;
  FiniteModel model;
  try {
    model = parse_model(*l.theory, read_file(model_path));
  } catch (const ParseError& e) {
    report_error(err, model_path, e);
    return kParse;
  } catch (const Error& e) {
    report_error(err, model_path, e);
    return kMismatch;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kParse;
  }
  Equation eq;
  try {
    eq = parse_equation(*l.theory, eq_text);
  } catch (const Error& e) {
    report_error(err, "equation", e);
    return kParse;
  }
  try {
    for (const auto& ax : l.theory->axioms()) {
      if (!holds(model, *l.theory, ax.equation))
        err << "note: the model violates axiom " << ax.name << "\n";
    }
    auto w = find_violation(model, *l.theory, eq);
    if (as_json) {
      json j{{"equation", eq.str()}, {"holds", !w}};
      if (w)
        j["witness"] = {{"input", w->input_label},
                        {"index", w->input},
                        {"lhs_value", w->lhs_value},
                        {"rhs_value", w->rhs_value}};
      out << j.dump(2) << "\n";
    } else if (!w) {
      out << "holds: " << eq.str() << "\n";
    } else {
      out << "violated: " << eq.str() << "\n";
      print_witness(out, *w);
    }
    return w ? kFailed : kOk;
  } catch (const Error& e) {
    report_error(err, model_path, e);
    return kMismatch;
  }
}

// --------------------------------------------------------------- find-cex

int cmd_find_cex(const std::string& path, const std::string& eq_text,
                 std::size_t max_carrier, unsigned threads, bool as_json,
                 std::ostream& out, std::ostream& err) {
  auto l = load_theory(path, err);
  if (!l.theory) return l.code == kFailed ? kParse : l.code;
  Equation eq;
  try {
    eq = parse_equation(*l.theory, eq_text);
  } catch (const Error& e) {
    report_error(err, "equation", e);
    return kParse;
  }
  Bounds b = Bounds::up_to(*l.theory, max_carrier);
  b.ceiling = enumeration_ceiling();
  try {
    auto cex = find_counterexample(*l.theory, eq, b, threads);
    if (as_json) {
      if (cex) out << countermodel_json(*l.theory, eq, *cex).dump(2) << "\n";
      else out << json{{"equation", eq.str()}, {"model", nullptr}}.dump(2) << "\n";
    } else if (cex) {
      out << "countermodel for " << eq.str() << "\n";
      print_witness(out, cex->witness);
      out << "\n" << print_model(*l.theory, cex->model);
    } else {
      out << "no countermodel with carriers <= " << max_carrier << " for "
          << eq.str() << "\n";
    }
    return cex ? kOk : kFailed;
  } catch (const Error& e) {
    report_error(err, path, e);
    return e.code() == Errc::bounds_too_large ? kTooLarge : kFailed;
  }
}

// ------------------------------------------------------------------ prove

int cmd_prove(const std::string& path, const std::string& eq_text,
              std::size_t depth, bool as_json, std::ostream& out,
              std::ostream& err) {
  auto l = load_theory(path, err);
  if (!l.theory) return l.code == kFailed ? kParse : l.code;
  Equation eq;
  try {
    eq = parse_equation(*l.theory, eq_text);
  } catch (const Error& e) {
    report_error(err, "equation", e);
    return kParse;
  }
  ProveOptions opts;
  opts.depth = depth;
  const ProveResult r = prove(*l.theory, eq, opts);
  if (as_json) {
    json j{{"goal", eq.str()}, {"found", r.found()}, {"explored", r.explored}};
    if (r.found()) j["derivation"] = print_derivation(*r.derivation);
    out << j.dump(2) << "\n";
  } else if (r.found()) {
    out << print_derivation(*r.derivation);
  } else {
    out << "not found within depth " << depth << " (" << r.explored
        << " terms explored): " << eq.str() << "\n";
  }
  return r.found() ? kOk : kFailed;
}

// ---------------------------------------------------------------- dualize

int cmd_dualize(const std::string& path, const std::string& out_path,
                bool as_json, std::ostream& out, std::ostream& err) {
  auto l = load_theory(path, err);
  if (!l.theory) return l.code == kFailed ? kParse : l.code;
  try {
    const DualityMap m = dualize_theory(*l.theory);
    const std::string text = print_theory(m.target);
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      f << text;
    }
    if (as_json) {
      json corr = json::array();
      for (const auto& [from, to] : m.symbols)
        corr.push_back({{"source", from}, {"target", to}});
      out << json{{"theory", text}, {"correspondence", corr}}.dump(2) << "\n";
    } else {
      out << text << "\n# correspondence\n";
      for (const auto& [from, to] : m.symbols) out << "#   " << from << " -> " << to << "\n";
    }
    return kOk;
  } catch (const Error& e) {
    report_error(err, path, e);
    return kFailed;
  }
}

// --------------------------------------------------------- validate-rules

int cmd_validate(const std::string& effect_word, const std::vector<std::string>& rules,
                 std::size_t max_carrier, unsigned threads, bool as_json,
                 std::ostream& out, std::ostream& err) {
  std::vector<Effect> effects;
  if (effect_word == "both") {
    effects = {Effect::exceptions, Effect::states};
  } else if (auto e = parse_effect(effect_word)) {
    effects = {*e};
  } else {
    err << "unknown effect '" << effect_word << "'\n";
    return kParse;
  }
  std::vector<RuleId> ids;
  for (const auto& r : rules) {
    auto id = parse_rule(r);
    if (!id) {
      err << "unknown rule '" << r << "'\n";
      return kParse;
    }
    ids.push_back(*id);
  }
  bool ok = true;
  json reports = json::array();
  for (Effect e : effects) {
    try {
      const SoundnessReport rep =
          rules.empty() ? validate_rules(e, max_carrier, threads)
                        : validate_rules(e, ids, max_carrier, threads);
      ok = ok && rep.ok();
      if (as_json) reports.push_back(report_json(rep));
      else out << format_report(rep);
    } catch (const Error& ex) {
      report_error(err, "validate-rules", ex);
      return ex.code() == Errc::bounds_too_large ? kTooLarge : kFailed;
    }
  }
  if (as_json) out << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
  return ok ? kOk : kFailed;
}

}  // namespace

// ------------------------------------------------------------------- json

json model_json(const Theory& theory, const FiniteModel& model) {
  json carriers = json::object();
  for (const auto& t : theory.base_types()) carriers[t] = model.carrier(t).labels;
  json tables = json::object();
  for (std::size_t i = 0; i < theory.ops().size(); ++i) {
    const OpDecl& op = theory.ops()[i];
    const OperationTable& t = model.table(i);
    json rows = json::array();
    for (std::size_t in = 0; in < t.out.size(); ++in)
      rows.push_back({input_label(model, op.decoration, op.dom, in),
                      output_label(model, op.decoration, op.cod, t.out[in])});
    tables[op.name] = {{"rank", op.decoration.rank}, {"rows", rows}};
  }
  return {{"effect", effect_name(model.effect())},
          {"carriers", carriers},
          {"effect_carrier", model.effect_carrier().labels},
          {"tables", tables}};
}

json countermodel_json(const Theory& theory, const Equation& eq,
                       const Counterexample& cex) {
  return {{"model", model_json(theory, cex.model)},
          {"equation", eq.str()},
          {"witness", {{"input", cex.witness.input_label}, {"index", cex.witness.input}}},
          {"lhs_value", cex.witness.lhs_value},
          {"rhs_value", cex.witness.rhs_value}};
}

json report_json(const SoundnessReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json j{{"name", c.name},
           {"shipped", c.shipped},
           {"statement", c.statement},
           {"instances", c.instances},
           {"models", c.models},
           {"passed", c.passed()},
           {"countermodel", nullptr}};
    if (c.countermodel) {
      const auto& cm = *c.countermodel;
      j["countermodel"] = countermodel_json(cm.theory, cm.conclusion, cm.counterexample);
      j["countermodel"]["instance"] = cm.instance;
    }
    checks.push_back(std::move(j));
  }
  return {{"effect", effect_name(report.effect)},
          {"max_carrier", report.max_carrier},
          {"ok", report.ok()},
          {"checks", checks}};
}

// -------------------------------------------------------------------- cli

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"decolog: decorated equational logic for exceptions and states", "decolog"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "decolog 1.0.0");

  bool as_json = false;
  std::size_t max_carrier = 2;
  std::size_t depth = 8;
  unsigned threads = 0;
  std::string theory_path, second_path, text, out_path;
  std::vector<std::string> rules;

  auto json_flag = [&](CLI::App* c) {
    c->add_flag("--json", as_json, "Machine-readable output");
  };

  auto* check = app.add_subcommand("check", "Check a theory file");
  check->add_option("theory", theory_path)->required();
  json_flag(check);

  auto* decorate = app.add_subcommand("decorate", "Type and decorate a term");
  decorate->add_option("theory", theory_path)->required();
  decorate->add_option("term", text)->required();
  json_flag(decorate);

  auto* verify = app.add_subcommand("verify", "Check a derivation file");
  verify->add_option("theory", theory_path)->required();
  verify->add_option("derivation", second_path)->required();
  json_flag(verify);

  auto* mcheck = app.add_subcommand("model-check", "Decide an equation in a model file");
  mcheck->add_option("theory", theory_path)->required();
  mcheck->add_option("model", second_path)->required();
  mcheck->add_option("equation", text)->required();
  json_flag(mcheck);

  auto* fcex = app.add_subcommand("find-cex", "Search finite models for a countermodel");
  fcex->add_option("theory", theory_path)->required();
  fcex->add_option("equation", text)->required();
  fcex->add_option("--max-carrier", max_carrier, "Largest carrier size")
      ->check(CLI::Range(1, 16));
  fcex->add_option("--threads", threads, "Worker threads (0: all cores)");
  json_flag(fcex);

  auto* prv = app.add_subcommand("prove", "Search for a derivation");
  prv->add_option("theory", theory_path)->required();
  prv->add_option("equation", text)->required();
  prv->add_option("--depth", depth, "Rewrite step bound");
  json_flag(prv);

  auto* dualize = app.add_subcommand("dualize", "Dualize a pairing-free theory");
  dualize->add_option("theory", theory_path)->required();
  dualize->add_option("-o,--output", out_path, "Also write the dual theory here");
  json_flag(dualize);

  auto* validate = app.add_subcommand("validate-rules", "Check the rule catalog on finite models");
  validate->add_option("effect", text, "exceptions, states or both")->required();
  validate->add_option("--rule", rules, "Restrict to these rules");
  validate->add_option("--max-carrier", max_carrier, "Largest carrier size")
      ->check(CLI::Range(1, 4));
  validate->add_option("--threads", threads, "Worker threads (0: all cores)");
  json_flag(validate);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  if (check->parsed()) return cmd_check(theory_path, as_json, out, err);
  if (decorate->parsed()) return cmd_decorate(theory_path, text, as_json, out, err);
  if (verify->parsed()) return cmd_verify(theory_path, second_path, as_json, out, err);
  if (mcheck->parsed())
    return cmd_model_check(theory_path, second_path, text, as_json, out, err);
  if (fcex->parsed())
    return cmd_find_cex(theory_path, text, max_carrier, threads, as_json, out, err);
  if (prv->parsed()) return cmd_prove(theory_path, text, depth, as_json, out, err);
  if (dualize->parsed()) return cmd_dualize(theory_path, out_path, as_json, out, err);
  return cmd_validate(text, rules, max_carrier, threads, as_json, out, err);
}

}  // namespace decolog
