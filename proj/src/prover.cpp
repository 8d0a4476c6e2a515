#include "decolog/prover.hpp"

#include <map>
#include <stdexcept>

namespace decolog {

namespace {

struct Step {
  Term result;
  Strength strength;
  Derivation proof;  // current R result
};

class Rewriter {
 public:
  explicit Rewriter(const Theory& theory)
      : theory_(theory), limit_(pair_component_limit(theory.effect())) {}

  std::vector<Step> steps(const Term& t) const {
    std::vector<Step> out;
    // Whole-term axiom matches also cover identity sides.
    for (auto& s : axiom_rewrites(t)) {
      if (auto lifted = in_context(t, std::move(s), std::nullopt, std::nullopt))
        emit(out, t, std::move(*lifted));
    }

    const std::vector<Term> fs = t.spine_factors();
    const std::size_t n = fs.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const bool whole = i == 0 && j + 1 == n;
        std::vector<Term> mid(fs.begin() + i, fs.begin() + j + 1);
        std::vector<Term> pre(fs.begin(), fs.begin() + i);
        std::vector<Term> post(fs.begin() + j + 1, fs.end());
        const Term sub = Term::spine(mid, Type::unit());
        std::vector<Step> base = structural_rewrites(sub, mid);
        if (!whole) {
          for (auto& s : axiom_rewrites(sub)) base.push_back(std::move(s));
        }
        std::optional<Term> g, h;
        if (!pre.empty()) g = Term::spine(pre, Type::unit());
        if (!post.empty()) h = Term::spine(post, Type::unit());
        for (auto& s : base) {
          if (auto wrapped = in_context(sub, std::move(s), g, h))
            emit(out, t, std::move(*wrapped));
        }
      }
    }
    return out;
  }

 private:
  struct Typed {
    Arrow arrow;
    Decoration rank;
  };

  std::optional<Typed> type_of(const Term& t) const {
    try {
      return Typed{wf_term(theory_, t), infer_decoration(theory_, t)};
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void emit(std::vector<Step>& out, const Term& from, Step s) const {
    if (s.result == from) return;
    if (!type_of(s.result)) return;
    out.push_back(std::move(s));
  }

  std::vector<Step> axiom_rewrites(const Term& sub) const {
    std::vector<Step> out;
    for (const auto& ax : theory_.axioms()) {
      const Equation& eq = ax.equation;
      if (eq.lhs == eq.rhs) continue;
      if (sub == eq.lhs)
        out.push_back({eq.rhs, eq.strength, derive::axiom(ax.name)});
      if (sub == eq.rhs)
        out.push_back({eq.lhs, eq.strength, derive::sym(derive::axiom(ax.name))});
    }
    return out;
  }

  std::vector<Step> structural_rewrites(const Term& sub,
                                        const std::vector<Term>& mid) const {
    std::vector<Step> out;
    const auto typed = type_of(sub);
    if (!typed) return out;

    if (mid.size() == 2 && mid[0].kind() == Term::Kind::pair &&
        (mid[1].kind() == Term::Kind::proj1 || mid[1].kind() == Term::Kind::proj2)) {
      const Term& f = mid[0].left();
      const Term& g = mid[0].right();
      const int side = mid[1].kind() == Term::Kind::proj1 ? 1 : 2;
      Derivation d = derive::pair_proj(f, g, side);
      out.push_back({side == 1 ? f : g, Strength::strong, std::move(d)});
    }

    if (mid.size() >= 2 && mid.back().kind() == Term::Kind::pair) {
      const Term w = Term::spine({mid.begin(), mid.end() - 1}, Type::unit());
      if (auto wt = type_of(w); wt && wt->rank <= limit_) {
        const Term& f = mid.back().left();
        const Term& g = mid.back().right();
        out.push_back({Term::pair(Term::compose(f, w), Term::compose(g, w)),
                       Strength::strong, derive::pair_comp(f, g, w)});
      }
    }

    if (typed->arrow.cod.is_unit() && sub != Term::bang(typed->arrow.dom)) {
      const Term target = Term::bang(typed->arrow.dom);
      if (typed->rank <= limit_) {
        out.push_back({target, Strength::strong,
                       derive::unit(RuleId::unit_strong_lowrank, sub)});
      } else if (theory_.effect() == Effect::states) {
        out.push_back({target, Strength::weak,
                       derive::unit(RuleId::unit_weak, sub)});
      }
    }

    if (mid.size() == 1 && sub.kind() == Term::Kind::pair) {
      const Term& l = sub.left();
      const Term& r = sub.right();
      for (auto& s : strong_steps(l))
        out.push_back({Term::pair(s.result, r), Strength::strong,
                       derive::pair_cong(std::move(s.proof), derive::refl(r))});
      for (auto& s : strong_steps(r))
        out.push_back({Term::pair(l, s.result), Strength::strong,
                       derive::pair_cong(derive::refl(l), std::move(s.proof))});
    }
    return out;
  }

  std::vector<Step> strong_steps(const Term& t) const {
    std::vector<Step> out;
    for (auto& s : steps(t))
      if (s.strength == Strength::strong) out.push_back(std::move(s));
    return out;
  }

  // Lifts `s : sub R r` to `h∘sub∘g R h∘r∘g`, if the side conditions allow.
  std::optional<Step> in_context(const Term& sub, Step s,
                                 const std::optional<Term>& g,
                                 const std::optional<Term>& h) const {
    if (s.strength == Strength::weak) {
      auto a = type_of(sub);
      auto b = type_of(s.result);
      if (!a || !b) return std::nullopt;
      if (max(a->rank, b->rank) <= Decoration::low()) {
        s.proof = derive::weak_to_strong(std::move(s.proof));
        s.strength = Strength::strong;
      }
    }
    const bool strong = s.strength == Strength::strong;
    const bool states = theory_.effect() == Effect::states;
    Term result = s.result;
    if (g) {
      auto gt = type_of(*g);
      if (!gt) return std::nullopt;
      if (!strong && !states && gt->rank != Decoration::pure()) return std::nullopt;
      s.proof = derive::subst(strong ? RuleId::subst_strong : RuleId::weak_subst,
                              *g, std::move(s.proof));
      result = Term::compose(result, *g);
    }
    if (h) {
      auto ht = type_of(*h);
      if (!ht) return std::nullopt;
      if (!strong && states && ht->rank != Decoration::pure()) return std::nullopt;
      s.proof = derive::repl(strong ? RuleId::repl_strong : RuleId::weak_repl,
                             *h, std::move(s.proof));
      result = Term::compose(*h, result);
    }
    s.result = std::move(result);
    return s;
  }

  const Theory& theory_;
  Decoration limit_;
};

struct Entry {
  Strength strength;
  Derivation proof;  // origin R term
};

using Table = std::map<Term, Entry>;

Derivation chain(Derivation a, Strength sa, Derivation b, Strength sb) {
  RuleId rule = RuleId::trans_mixed;
  if (sa == sb) rule = sa == Strength::strong ? RuleId::trans_strong : RuleId::trans_weak;
  return derive::trans(rule, std::move(a), std::move(b));
}

// Expands one layer. Returns the newly reached (or upgraded) terms.
std::vector<Term> expand(const Rewriter& rw, Table& table,
                         const std::vector<Term>& frontier, std::size_t& explored,
                         std::size_t cap) {
  std::vector<Term> next;
  for (const Term& t : frontier) {
    const Entry here = table.at(t);
    for (Step& s : rw.steps(t)) {
      const Strength joined = here.strength == Strength::strong ? s.strength
                                                                : Strength::weak;
      auto it = table.find(s.result);
      if (it != table.end() &&
          !(it->second.strength == Strength::weak && joined == Strength::strong))
        continue;
      Derivation proof =
          here.proof.rule == RuleId::refl
              ? std::move(s.proof)
              : chain(here.proof, here.strength, std::move(s.proof), s.strength);
      table.insert_or_assign(s.result, Entry{joined, std::move(proof)});
      next.push_back(s.result);
      if (++explored > cap) return next;
    }
  }
  return next;
}

}  // namespace

ProveResult prove(const Theory& theory, const Equation& goal,
                  const ProveOptions& options) {
  const Equation eq{goal.strength, normalize(goal.lhs), normalize(goal.rhs)};
  const EquationReport report = check_equation_wf(theory, eq);
  const bool low = report.comparison_rank() <= Decoration::low();
  const Rewriter rw(theory);

  Table fwd, bwd;
  fwd.emplace(eq.lhs, Entry{Strength::strong, derive::refl(eq.lhs)});
  bwd.emplace(eq.rhs, Entry{Strength::strong, derive::refl(eq.rhs)});
  std::vector<Term> fwd_frontier{eq.lhs}, bwd_frontier{eq.rhs};
  ProveResult result;

  auto try_meet = [&](const Term& m) -> std::optional<Derivation> {
    auto a = fwd.find(m);
    auto b = bwd.find(m);
    if (a == fwd.end() || b == bwd.end()) return std::nullopt;
    const Strength sa = a->second.strength;
    const Strength sb = b->second.strength;
    Derivation d;
    if (b->second.proof.rule == RuleId::refl) d = a->second.proof;
    else if (a->second.proof.rule == RuleId::refl) d = derive::sym(b->second.proof);
    else d = chain(a->second.proof, sa, derive::sym(b->second.proof), sb);
    const Strength got =
        sa == Strength::strong && sb == Strength::strong ? Strength::strong
                                                         : Strength::weak;
    if (eq.strength == Strength::weak) {
      if (got == Strength::strong) d = derive::strong_to_weak(std::move(d));
      return d;
    }
    if (got == Strength::strong) return d;
    if (low) return derive::weak_to_strong(std::move(d));
    return std::nullopt;
  };

  auto finish = [&](Derivation d) {
    Judgment j = check_derivation(theory, d);
    if (j.conclusion != eq)
      throw std::logic_error("prover produced a derivation of " +
                             j.conclusion.str() + " instead of " + eq.str());
    d.claim = eq;
    result.derivation = std::move(d);
    return result;
  };

  if (auto d = try_meet(eq.lhs)) return finish(std::move(*d));

  std::size_t fwd_depth = 0, bwd_depth = 0;
  while (fwd_depth + bwd_depth < options.depth) {
    const bool forward = bwd_frontier.empty() ||
                         (fwd_depth <= bwd_depth && !fwd_frontier.empty());
    Table& table = forward ? fwd : bwd;
    std::vector<Term>& frontier = forward ? fwd_frontier : bwd_frontier;
    std::vector<Term> fresh =
        expand(rw, table, frontier, result.explored, options.max_terms);
    (forward ? fwd_depth : bwd_depth)++;
    for (const Term& m : fresh)
      if (auto d = try_meet(m)) return finish(std::move(*d));
    if (result.explored > options.max_terms) break;
    frontier = std::move(fresh);
    if (fwd_frontier.empty() && bwd_frontier.empty()) break;
  }
  return result;
}

}  // namespace decolog
