#pragma once

// Test oracles and generators.
//
// RefEval evaluates a term one point at a time, straight from the native
// tables of the operations. It shares no code with CompiledTerm (which
// coerces everything to rank 2 and composes whole tables), so agreement
// between the two is meaningful.

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "decolog/calculus.hpp"
#include "decolog/deduction.hpp"
#include "decolog/semantics.hpp"

namespace decolog::testing {

inline std::filesystem::path source_dir() { return DECOLOG_SOURCE_DIR; }
inline std::filesystem::path corpus(const std::string& name) {
  return source_dir() / "corpus" / name;
}
inline std::filesystem::path data(const std::string& name) {
  return source_dir() / "tests" / "data" / name;
}

// ------------------------------------------------------------ oracle

inline std::size_t card(const FiniteModel& m, const Type& t) {
  switch (t.kind()) {
    case Type::Kind::unit: return 1;
    case Type::Kind::base: return m.carrier(t.name()).size();
    case Type::Kind::prod: return card(m, t.left()) * card(m, t.right());
  }
  return 0;
}

// A point of A+Exc (exceptions) or A×St (states).
struct Point {
  bool exc = false;       // exceptions only
  std::size_t value = 0;  // value, or exception index when exc
  std::size_t state = 0;  // states only
  friend bool operator==(const Point&, const Point&) = default;
};

class RefEval {
 public:
  RefEval(const Theory& th, const FiniteModel& m) : th_(th), m_(m) {}

  Point run(const Term& t, Point p) const {
    if (th_.effect() == Effect::exceptions && p.exc) {
      // Only a catcher can look at an exceptional input.
      if (t.kind() == Term::Kind::op) {
        const OpDecl& op = *th_.find_op(t.name());
        if (op.decoration.rank == 2) return op_exc(op, t.name(), p);
      }
      if (t.kind() != Term::Kind::comp) return p;
    }
    switch (t.kind()) {
      case Term::Kind::id: return p;
      case Term::Kind::bang: return {false, 0, p.state};
      case Term::Kind::proj1: {
        const std::size_t r = card(m_, t.right_type());
        return {false, p.value / r, p.state};
      }
      case Term::Kind::proj2: {
        const std::size_t r = card(m_, t.right_type());
        return {false, p.value % r, p.state};
      }
      case Term::Kind::pair: {
        const Point l = run(t.left(), p);
        const Point r = run(t.right(), p);
        if (l.exc) return l;
        if (r.exc) return r;
        const std::size_t rc = card(m_, wf_term(th_, t.right()).cod);
        return {false, l.value * rc + r.value, p.state};
      }
      case Term::Kind::comp: {
        for (const auto& f : t.factors()) p = run(f, p);
        return p;
      }
      case Term::Kind::op: {
        const OpDecl& op = *th_.find_op(t.name());
        return th_.effect() == Effect::exceptions ? op_exc(op, t.name(), p)
                                                  : op_st(op, t.name(), p);
      }
    }
    return p;
  }

  // All points of the rank-2 domain of an arrow, in table order.
  std::vector<Point> points(const Type& dom) const {
    std::vector<Point> out;
    const std::size_t n = card(m_, dom), e = m_.effect_carrier().size();
    if (th_.effect() == Effect::exceptions) {
      for (std::size_t a = 0; a < n; ++a) out.push_back({false, a, 0});
      for (std::size_t x = 0; x < e; ++x) out.push_back({true, x, 0});
    } else {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t s = 0; s < e; ++s) out.push_back({false, a, s});
    }
    return out;
  }

  bool holds(const Equation& eq) const {
    const Arrow a = wf_term(th_, eq.lhs);
    for (const Point& p : points(a.dom)) {
      const Point l = run(eq.lhs, p), r = run(eq.rhs, p);
      if (eq.strength == Strength::strong) {
        if (!(l == r)) return false;
      } else if (th_.effect() == Effect::exceptions) {
        if (!p.exc && !(l == r)) return false;
      } else if (l.value != r.value) {
        return false;
      }
    }
    return true;
  }

 private:
  Point op_exc(const OpDecl& op, const std::string& name, Point p) const {
    const OperationTable& t = m_.table(name);
    const std::size_t dom = card(m_, op.dom), cod = card(m_, op.cod);
    std::size_t out;
    switch (op.decoration.rank) {
      case 0: return {false, t.out[p.value], 0};
      case 1: out = t.out[p.value]; break;
      default: out = t.out[p.exc ? dom + p.value : p.value]; break;
    }
    return out < cod ? Point{false, out, 0} : Point{true, out - cod, 0};
  }

  Point op_st(const OpDecl& op, const std::string& name, Point p) const {
    const OperationTable& t = m_.table(name);
    const std::size_t e = m_.effect_carrier().size();
    switch (op.decoration.rank) {
      case 0: return {false, t.out[p.value], p.state};
      case 1: return {false, t.out[p.value * e + p.state], p.state};
      default: {
        const std::size_t o = t.out[p.value * e + p.state];
        return {false, o / e, o % e};
      }
    }
  }

  const Theory& th_;
  const FiniteModel& m_;
};

// Decodes entry `i` of a rank-2 table into a Point.
inline Point decode_top(const FiniteModel& m, Effect eff, std::size_t cod,
                        std::size_t out) {
  if (eff == Effect::exceptions)
    return out < cod ? Point{false, out, 0} : Point{true, out - cod, 0};
  const std::size_t e = m.effect_carrier().size();
  return {false, out / e, out % e};
}

// ------------------------------------------------------------ generators

// Single base type B; one B -> B operation per rank, a constant, a binary
// operation and a rank-1 map into Unit.
inline Theory small_theory(Effect eff, bool with_products = true) {
  Theory th(eff);
  th.add_base_type("B");
  th.add_op({"u", Type::base("B"), Type::base("B"), Decoration::pure()});
  th.add_op({"v", Type::base("B"), Type::base("B"), Decoration::low()});
  th.add_op({"w", Type::base("B"), Type::base("B"), Decoration::high()});
  th.add_op({"c", Type::unit(), Type::base("B"), Decoration::pure()});
  th.add_op({"r", Type::unit(), Type::base("B"), Decoration::low()});
  if (with_products)
    th.add_op({"m", Type::prod(Type::base("B"), Type::base("B")), Type::base("B"),
               Decoration::pure()});
  return th;
}

class TermGen {
 public:
  TermGen(const Theory& th, std::uint64_t seed) : th_(th), rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  const std::vector<Type>& types() {
    if (types_.empty()) {
      for (const auto& b : th_.base_types()) types_.push_back(Type::base(b));
      types_.push_back(Type::unit());
      if (has_products_) types_.push_back(Type::prod(types_[0], types_[0]));
    }
    return types_;
  }

  void allow_products(bool on) {
    has_products_ = on;
    types_.clear();
  }

  // Off: no products, pairs, projections or bang (the dualizable fragment).
  void allow_structural(bool on) {
    structural_ = on;
    allow_products(on);
  }

  // Random well-formed term dom -> cod of rank <= max_rank, or nullopt.
  std::optional<Term> term(const Type& dom, const Type& cod, int depth,
                           Decoration max_rank) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (auto t = attempt_term(dom, cod, depth, max_rank)) return t;
    }
    return std::nullopt;
  }

  // Random term of rank <= max_rank with any arrow drawn from types().
  Term any_term(int depth, Decoration max_rank) {
    while (true) {
      const auto& ts = types();
      const Type& d = ts[pick(ts.size())];
      const Type& c = ts[pick(ts.size())];
      if (auto t = term(d, c, depth, max_rank)) return *t;
    }
  }

 private:
  std::optional<Term> attempt_term(const Type& dom, const Type& cod, int depth,
                                   Decoration max_rank) {
    std::vector<int> choices;
    if (dom == cod) choices.push_back(0);
    if (cod.is_unit() && structural_) choices.push_back(1);
    if (dom.kind() == Type::Kind::prod && (dom.left() == cod || dom.right() == cod))
      choices.push_back(2);
    if (has_op(dom, cod, max_rank)) {
      choices.push_back(3);
      choices.push_back(3);
    }
    if (depth > 0) {
      choices.push_back(4);
      choices.push_back(4);
      if (cod.kind() == Type::Kind::prod && has_products_) choices.push_back(5);
    }
    if (choices.empty()) return std::nullopt;
    switch (choices[pick(choices.size())]) {
      case 0: return Term::id(dom);
      case 1: return Term::bang(dom);
      case 2: {
        const bool first = dom.left() == cod && (dom.right() != cod || pick(2) == 0);
        return first ? Term::proj1(dom.left(), dom.right())
                     : Term::proj2(dom.left(), dom.right());
      }
      case 3: {
        std::vector<const OpDecl*> ops;
        for (const auto& op : th_.ops())
          if (op.dom == dom && op.cod == cod && op.decoration <= max_rank)
            ops.push_back(&op);
        return Term::op(ops[pick(ops.size())]->name);
      }
      case 4: {
        const auto& ts = types();
        const Type& mid = ts[pick(ts.size())];
        auto first = term(dom, mid, depth - 1, max_rank);
        if (!first) return std::nullopt;
        auto after = term(mid, cod, depth - 1, max_rank);
        if (!after) return std::nullopt;
        return Term::compose_raw(*after, *first);
      }
      default: {
        const Decoration lim = std::min(max_rank, pair_component_limit(th_.effect()));
        auto l = term(dom, cod.left(), depth - 1, lim);
        if (!l) return std::nullopt;
        auto r = term(dom, cod.right(), depth - 1, lim);
        if (!r) return std::nullopt;
        return Term::pair(*l, *r);
      }
    }
  }

  bool has_op(const Type& dom, const Type& cod, Decoration max_rank) const {
    for (const auto& op : th_.ops())
      if (op.dom == dom && op.cod == cod && op.decoration <= max_rank) return true;
    return false;
  }

  const Theory& th_;
  std::mt19937_64 rng_;
  std::vector<Type> types_;
  bool has_products_ = true;
  bool structural_ = true;
};

// Uniformly random model with the given carrier sizes.
inline FiniteModel random_model(const Theory& th, std::size_t base_size,
                                std::size_t effect_size, std::mt19937_64& rng) {
  FiniteModel m(th);
  for (const auto& b : th.base_types()) m.set_carrier(b, FiniteSet::numbered(base_size));
  m.set_effect_carrier(FiniteSet::numbered(effect_size, "e"));
  for (std::size_t i = 0; i < th.ops().size(); ++i) {
    const OpDecl& op = th.ops()[i];
    OperationTable t;
    t.effect = th.effect();
    t.rank = op.decoration;
    t.dom_size = m.size_of(op.dom);
    t.cod_size = m.size_of(op.cod);
    t.effect_size = effect_size;
    std::uniform_int_distribution<std::size_t> d(0, t.output_count() - 1);
    for (std::size_t k = 0; k < t.input_count(); ++k)
      t.out.push_back(static_cast<std::uint32_t>(d(rng)));
    m.set_table(i, std::move(t));
  }
  return m;
}

// Theory for derivation properties: small_theory plus two satisfiable axioms.
inline Theory axiom_theory(Effect eff, bool with_products) {
  Theory th = small_theory(eff, with_products);
  const Type B = Type::base("B");
  th.add_axiom({Strength::weak, Term::op("w"), Term::op("u")}, "ax1");
  th.add_axiom({Strength::strong, Term::compose(Term::op("u"), Term::op("u")),
                Term::id(B)},
               "ax2");
  return th;
}

// Random valid derivations, built bottom-up from a pool of proven
// conclusions. Every candidate is re-checked; `rejected` counts candidates
// the checker refused, which should stay at zero.
class DerivGen {
 public:
  DerivGen(const Theory& th, std::uint64_t seed, bool pairs)
      : th_(th), gen_(th, seed), pairs_(pairs) {
    gen_.allow_structural(pairs);
  }

  std::size_t rejected = 0;

  Derivation next(int steps) {
    std::vector<std::pair<Derivation, Equation>> pool;
    for (int i = 0; i < 3; ++i) pool.push_back(accept(leaf()));
    for (int i = 0; i < steps; ++i) {
      auto cand = step(pool);
      if (!cand) continue;
      try {
        Equation c = check_derivation(th_, *cand).conclusion;
        pool.emplace_back(std::move(*cand), c);
      } catch (const Error&) {
        ++rejected;
      }
    }
    return pool.back().first;
  }

 private:
  std::pair<Derivation, Equation> accept(Derivation d) {
    Equation c = check_derivation(th_, d).conclusion;
    return {std::move(d), c};
  }

  Derivation leaf() {
    if (gen_.pick(2) == 0 && !th_.axioms().empty())
      return derive::axiom(th_.axioms()[gen_.pick(th_.axioms().size())].name);
    return derive::refl(normalize(gen_.any_term(3, Decoration::high())));
  }

  std::optional<Term> random_into(const Type& cod, Decoration max_rank) {
    const auto& ts = gen_.types();
    auto t = gen_.term(ts[gen_.pick(ts.size())], cod, 2, max_rank);
    if (!t) return std::nullopt;
    return normalize(*t);
  }
  std::optional<Term> random_from(const Type& dom, Decoration max_rank) {
    const auto& ts = gen_.types();
    auto t = gen_.term(dom, ts[gen_.pick(ts.size())], 2, max_rank);
    if (!t) return std::nullopt;
    return normalize(*t);
  }

  std::optional<Derivation> step(
      const std::vector<std::pair<Derivation, Equation>>& pool) {
    const bool states = th_.effect() == Effect::states;
    const auto& [d, c] = pool[gen_.pick(pool.size())];
    const Arrow a = wf_term(th_, c.lhs);
    const int kinds = pairs_ ? 12 : 8;
    switch (gen_.pick(kinds)) {
      case 0: return leaf();
      case 1: return derive::sym(d);
      case 2: {
        for (const auto& [d2, c2] : pool)
          if (c2.lhs == c.rhs && (c2.strength != c.strength || gen_.pick(2) == 0)) {
            RuleId r = c.strength != c2.strength       ? RuleId::trans_mixed
                       : c.strength == Strength::strong ? RuleId::trans_strong
                                                        : RuleId::trans_weak;
            return derive::trans(r, d, d2);
          }
        RuleId r = c.strength == Strength::strong ? RuleId::trans_strong
                                                  : RuleId::trans_mixed;
        return derive::trans(r, d, derive::refl(c.rhs));
      }
      case 3:
        if (c.strength == Strength::strong) return derive::strong_to_weak(d);
        if (max(infer_decoration(th_, c.lhs), infer_decoration(th_, c.rhs)) <=
            Decoration::low())
          return derive::weak_to_strong(d);
        return std::nullopt;
      case 4:
      case 5: {
        const bool strong = c.strength == Strength::strong;
        const Decoration lim = strong || states ? Decoration::high() : Decoration::pure();
        auto g = random_into(a.dom, lim);
        if (!g) return std::nullopt;
        return derive::subst(strong ? RuleId::subst_strong : RuleId::weak_subst, *g, d);
      }
      case 6:
      case 7: {
        const bool strong = c.strength == Strength::strong;
        const Decoration lim = strong || !states ? Decoration::high() : Decoration::pure();
        auto h = random_from(a.cod, lim);
        if (!h) return std::nullopt;
        return derive::repl(strong ? RuleId::repl_strong : RuleId::weak_repl, *h, d);
      }
      case 8: {
        const Decoration lim = pair_component_limit(th_.effect());
        for (const auto& [d2, c2] : pool) {
          if (c.strength != Strength::strong || c2.strength != Strength::strong) continue;
          if (wf_term(th_, c2.lhs).dom != a.dom) continue;
          if (max(infer_decoration(th_, c.lhs), infer_decoration(th_, c.rhs)) > lim) continue;
          if (max(infer_decoration(th_, c2.lhs), infer_decoration(th_, c2.rhs)) > lim) continue;
          return derive::pair_cong(d, d2);
        }
        return std::nullopt;
      }
      case 9: {
        const Decoration lim = pair_component_limit(th_.effect());
        auto f = random_from(a.dom, lim);
        auto g = random_from(a.dom, lim);
        if (!f || !g) return std::nullopt;
        return derive::pair_proj(*f, *g, 1 + static_cast<int>(gen_.pick(2)));
      }
      case 10: {
        const Decoration lim = pair_component_limit(th_.effect());
        auto f = random_from(a.dom, lim);
        auto g = random_from(a.dom, lim);
        auto w = random_into(a.dom, lim);
        if (!f || !g || !w) return std::nullopt;
        return derive::pair_comp(*f, *g, *w);
      }
      default: {
        const bool strong = gen_.pick(2) == 0;
        const Decoration lim = strong ? pair_component_limit(th_.effect())
                               : states ? Decoration::high()
                                        : Decoration::pure();
        auto f = gen_.term(a.dom, Type::unit(), 2, lim);
        if (!f) return std::nullopt;
        return derive::unit(strong ? RuleId::unit_strong_lowrank : RuleId::unit_weak,
                            normalize(*f));
      }
    }
  }

  const Theory& th_;
  TermGen gen_;
  bool pairs_;
};

}  // namespace decolog::testing
