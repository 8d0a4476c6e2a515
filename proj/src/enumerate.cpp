#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "decolog/semantics.hpp"

namespace decolog {

Bounds Bounds::up_to(const Theory& theory, std::size_t max_carrier) {
  Bounds b;
  for (const auto& t : theory.base_types()) b.base[t] = {1, max_carrier};
  b.effect = {1, max_carrier};
  return b;
}

Bounds Bounds::exact(const Theory& theory, std::size_t base_size,
                     std::size_t effect_size) {
  Bounds b;
  for (const auto& t : theory.base_types()) b.base[t] = {base_size, base_size};
  b.effect = {effect_size, effect_size};
  return b;
}

namespace {

using u64 = std::uint64_t;
constexpr u64 kSaturated = std::numeric_limits<u64>::max();

u64 sat_mul(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

u64 sat_add(u64 a, u64 b) { return a > kSaturated - b ? kSaturated : a + b; }

u64 sat_pow(u64 base, u64 exp) {
  u64 r = 1;
  for (u64 i = 0; i < exp && r != kSaturated; ++i) r = sat_mul(r, base);
  return r;
}

CarrierRange range_for(const Bounds& bounds, const std::string& type) {
  auto it = bounds.base.find(type);
  return it == bounds.base.end() ? CarrierRange{} : it->second;
}

void check_range(const CarrierRange& r, const std::string& what) {
  if (r.min < 1 || r.max < r.min)
    throw std::invalid_argument("carrier bounds for " + what +
                                " must satisfy 1 <= min <= max");
}

// All carrier size vectors (base types in declaration order, effect last),
// first coordinate most significant.
std::vector<std::vector<std::size_t>> size_vectors(const Theory& theory,
                                                   const Bounds& bounds) {
  std::vector<CarrierRange> ranges;
  for (const auto& t : theory.base_types()) {
    ranges.push_back(range_for(bounds, t));
    check_range(ranges.back(), "'" + t + "'");
  }
  ranges.push_back(bounds.effect);
  check_range(bounds.effect, "the effect carrier");

  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  for (const auto& r : ranges) cur.push_back(r.min);
  while (true) {
    out.push_back(cur);
    std::size_t k = ranges.size();
    while (k > 0) {
      --k;
      if (cur[k] < ranges[k].max) {
        ++cur[k];
        break;
      }
      cur[k] = ranges[k].min;
      if (k == 0) return out;
    }
  }
}

FiniteModel skeleton(const Theory& theory, const std::vector<std::size_t>& sizes) {
  FiniteModel m(theory);
  for (std::size_t i = 0; i < theory.base_types().size(); ++i)
    m.set_carrier(theory.base_types()[i], FiniteSet::numbered(sizes[i]));
  m.set_effect_carrier(FiniteSet::numbered(
      sizes.back(), theory.effect() == Effect::exceptions ? "e" : "s"));
  return m;
}

OperationTable blank_table(const Theory& theory, const FiniteModel& m,
                           std::size_t op_index) {
  const OpDecl& op = theory.ops()[op_index];
  OperationTable t;
  t.effect = theory.effect();
  t.rank = op.decoration;
  t.dom_size = m.size_of(op.dom);
  t.cod_size = m.size_of(op.cod);
  t.effect_size = m.effect_carrier().size();
  t.out.assign(t.input_count(), 0);
  return t;
}

// Advances a table to its lexicographic successor; false after the last one.
bool next_table(OperationTable& t) {
  const auto limit = static_cast<std::uint32_t>(t.output_count());
  for (std::size_t k = t.out.size(); k > 0; --k) {
    if (t.out[k - 1] + 1 < limit) {
      ++t.out[k - 1];
      return true;
    }
    t.out[k - 1] = 0;
  }
  return false;
}

void collect_ops(const Term& t, std::vector<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::op: out.push_back(t.name()); break;
    case Term::Kind::pair:
      collect_ops(t.left(), out);
      collect_ops(t.right(), out);
      break;
    case Term::Kind::comp:
      for (const auto& f : t.factors()) collect_ops(f, out);
      break;
    default: break;
  }
}

// Work is split into units: one unit per (carrier sizes, table of the first
// operation). Within a unit the remaining tables are searched depth-first
// with axioms checked as soon as all their symbols are interpreted.
class Search {
 public:
  Search(const Theory& theory, const Bounds& bounds)
      : theory_(theory), sizes_(size_vectors(theory, bounds)) {
    u64 raw = 0;
    for (const auto& sv : sizes_) {
      FiniteModel m = skeleton(theory, sv);
      u64 count = 1;
      u64 first = 1;
      for (std::size_t i = 0; i < theory.ops().size(); ++i) {
        OperationTable t = blank_table(theory, m, i);
        u64 n = sat_pow(t.output_count(), t.input_count());
        count = sat_mul(count, n);
        if (i == 0) first = n;
      }
      raw = sat_add(raw, count);
      unit_offsets_.push_back(units_);
      units_ = sat_add(units_, first);
    }
    if (raw > bounds.ceiling)
      throw Error(Errc::bounds_too_large,
                  "bounds admit " +
                      (raw == kSaturated ? std::string("more than 2^64")
                                         : std::to_string(raw)) +
                      " raw interpretations, above the ceiling of " +
                      std::to_string(bounds.ceiling));
    raw_ = raw;

    axioms_by_depth_.resize(theory.ops().size() + 1);
    for (const auto& ax : theory.axioms()) {
      std::vector<std::string> names;
      collect_ops(ax.equation.lhs, names);
      collect_ops(ax.equation.rhs, names);
      std::size_t depth = 0;
      for (const auto& n : names) depth = std::max(depth, *theory.op_index(n) + 1);
      axioms_by_depth_[depth].emplace_back(theory, ax.equation);
    }
  }

  u64 raw() const { return raw_; }
  u64 units() const { return units_; }

  template <class Visit>
  bool run_unit(u64 unit, Visit&& visit) const {
    const auto it =
        std::upper_bound(unit_offsets_.begin(), unit_offsets_.end(), unit);
    const std::size_t sv = static_cast<std::size_t>(it - unit_offsets_.begin()) - 1;
    u64 first = unit - unit_offsets_[sv];
    FiniteModel m = skeleton(theory_, sizes_[sv]);
    if (!satisfied(0, m)) return true;
    if (theory_.ops().empty()) return visit(m);
    OperationTable t = blank_table(theory_, m, 0);
    for (std::size_t k = t.out.size(); k > 0 && first > 0; --k) {
      const u64 radix = t.output_count();
      t.out[k - 1] = static_cast<std::uint32_t>(first % radix);
      first /= radix;
    }
    m.set_table(0, std::move(t));
    if (!satisfied(1, m)) return true;
    return descend(1, m, visit);
  }

 private:
  bool satisfied(std::size_t depth, const FiniteModel& m) const {
    for (const auto& ax : axioms_by_depth_[depth])
      if (!ax.holds(m)) return false;
    return true;
  }

  template <class Visit>
  bool descend(std::size_t k, FiniteModel& m, Visit& visit) const {
    if (k == theory_.ops().size()) return visit(m);
    OperationTable t = blank_table(theory_, m, k);
    do {
      m.set_table(k, t);
      if (satisfied(k + 1, m) && !descend(k + 1, m, visit)) return false;
    } while (next_table(t));
    return true;
  }

  const Theory& theory_;
  std::vector<std::vector<std::size_t>> sizes_;
  std::vector<u64> unit_offsets_;
  u64 units_ = 0;
  u64 raw_ = 0;
  std::vector<std::vector<CompiledEquation>> axioms_by_depth_;
};

}  // namespace

u64 raw_model_count(const Theory& theory, const Bounds& bounds) {
  Bounds unlimited = bounds;
  unlimited.ceiling = kSaturated;
  return Search(theory, unlimited).raw();
}

u64 enumerate_models(const Theory& theory, const Bounds& bounds,
                     const std::function<bool(const FiniteModel&)>& visit) {
  Search search(theory, bounds);
  u64 visited = 0;
  for (u64 u = 0; u < search.units(); ++u) {
    const bool go_on = search.run_unit(u, [&](const FiniteModel& m) {
      ++visited;
      return visit(m);
    });
    if (!go_on) break;
  }
  return visited;
}

std::vector<FiniteModel> collect_models(const Theory& theory,
                                        const Bounds& bounds) {
  std::vector<FiniteModel> out;
  enumerate_models(theory, bounds, [&](const FiniteModel& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::optional<Counterexample> find_counterexample(const Theory& theory,
                                                  const Equation& eq,
                                                  const Bounds& bounds,
                                                  unsigned threads) {
  const CompiledEquation goal(theory, eq);
  const Search search(theory, bounds);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<u64>(threads, std::max<u64>(1, search.units())));

  std::atomic<u64> next_unit{0};
  std::atomic<u64> best_unit{kSaturated};
  std::mutex mu;
  std::optional<Counterexample> best;

  auto worker = [&] {
    while (true) {
      const u64 u = next_unit.fetch_add(1);
      if (u >= search.units() || u > best_unit.load()) return;
      std::optional<Counterexample> found;
      search.run_unit(u, [&](const FiniteModel& m) {
        if (auto w = goal.witness(m)) {
          found = Counterexample{m, *w};
          return false;
        }
        return u < best_unit.load();
      });
      if (found) {
        std::lock_guard lock(mu);
        if (u < best_unit.load()) {
          best_unit.store(u);
          best = std::move(found);
        }
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return best;
}

}  // namespace decolog
