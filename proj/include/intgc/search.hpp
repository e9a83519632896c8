// Exhaustive frame enumeration, bounded countermodel search and random
// model generation.
//
// Frames on n labelled worlds are produced preorder by preorder. For a fixed
// preorder the admissible relations R are exactly the up-sets of the pair
// preorder (x, y) <= (x', y') iff x <= x' and y' <= y, so they are enumerated
// directly instead of closing all 2^(n*n) seeds.
#pragma once

#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "intgc/closure.hpp"
#include "intgc/filtration.hpp"
#include "intgc/formula.hpp"
#include "intgc/kripke.hpp"
#include "intgc/world_set.hpp"

namespace intgc {

/// Largest carrier for which the pair space fits in a Mask64.
inline constexpr std::size_t kMaxEnumeratedWorlds = 8;

/// a, b, ..., z, then w26, w27, ...
inline std::vector<std::string> default_world_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "w" + std::to_string(i));
  return names;
}

inline KripkeFrame to_frame(const FrameView<Mask64>& v) {
  KripkeFrame f{default_world_names(v.n), BitMatrix(v.n), BitMatrix(v.n)};
  for (std::size_t x = 0; x < v.n; ++x)
    for (std::size_t y = 0; y < v.n; ++y) {
      f.leq.set(x, y, v.up[x].test(y));
      f.r.set(x, y, v.succ[x].test(y));
    }
  return f;
}

/// Calls `emit(rows)` for every preorder on n labelled points until it
/// returns false; rows[x] = { y : x <= y }. Deterministic order.
template <class Emit>
bool for_each_preorder(std::size_t n, Emit&& emit) {
  if (n == 0 || n > 64) throw std::invalid_argument("preorder size must be in 1..64");
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) cells.emplace_back(i, j);
  std::vector<Mask64> rel(n), decided(n);
  for (std::size_t i = 0; i < n; ++i) {
    rel[i].set(i);
    decided[i].set(i);
  }
  auto known = [&](std::size_t a, std::size_t b) { return decided[a].test(b); };
  auto holds = [&](std::size_t a, std::size_t b) { return rel[a].test(b); };
  // Would the decided part already force a transitivity failure?
  auto consistent = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (holds(i, j)) {
        if (known(j, k) && holds(j, k) && known(i, k) && !holds(i, k)) return false;
        if (known(k, i) && holds(k, i) && known(k, j) && !holds(k, j)) return false;
      } else if (known(i, k) && holds(i, k) && known(k, j) && holds(k, j)) {
        return false;
      }
    }
    return true;
  };
  auto rec = [&](auto& self, std::size_t c) -> bool {
    if (c == cells.size()) return emit(std::span<const Mask64>(rel));
    const auto [i, j] = cells[c];
    decided[i].set(j);
    for (bool v : {false, true}) {
      rel[i].set(j, v);
      if (consistent(i, j) && !self(self, c + 1)) {
        decided[i].set(j, false);
        rel[i].set(j, false);
        return false;
      }
    }
    decided[i].set(j, false);
    rel[i].set(j, false);
    return true;
  };
  return rec(rec, 0);
}

inline std::vector<BitMatrix> enumerate_preorders(std::size_t n) {
  std::vector<BitMatrix> out;
  for_each_preorder(n, [&](std::span<const Mask64> rows) {
    BitMatrix m(n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) m.set(x, y, rows[x].test(y));
    out.push_back(std::move(m));
    return true;
  });
  return out;
}

/// Calls `emit(view)` for every relation R satisfying the frame condition
/// over the given preorder rows, until it returns false.
template <class Emit>
bool for_each_relation(std::size_t n, std::span<const Mask64> up_rows, Emit&& emit) {
  if (n > kMaxEnumeratedWorlds) throw std::invalid_argument("relation enumeration supports at most 8 worlds");
  std::vector<Mask64> down_rows(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (up_rows[x].test(y)) down_rows[y].set(x);
  const std::size_t m = n * n;
  std::vector<Mask64> pair_up(m), pair_down(m);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t p = x * n + y;
      for (std::size_t x2 = 0; x2 < n; ++x2)
        for (std::size_t y2 = 0; y2 < n; ++y2) {
          if (up_rows[x].test(x2) && up_rows[y2].test(y)) pair_up[p].set(x2 * n + y2);
          if (up_rows[x2].test(x) && up_rows[y].test(y2)) pair_down[p].set(x2 * n + y2);
        }
    }
  FrameView<Mask64> view;
  view.n = n;
  view.up.assign(up_rows.begin(), up_rows.end());
  view.succ.assign(n, Mask64{});
  view.pred.assign(n, Mask64{});
  return for_each_up_set(m, pair_up, pair_down, [&](Mask64 r) {
    for (std::size_t x = 0; x < n; ++x) {
      view.succ[x] = Mask64{(r.bits >> (x * n)) & Mask64::full(n).bits};
      view.pred[x] = Mask64{};
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (view.succ[x].test(y)) view.pred[y].set(x);
    return emit(static_cast<const FrameView<Mask64>&>(view));
  });
}

/// Calls `emit(view)` for every frame on n labelled worlds.
template <class Emit>
bool for_each_frame(std::size_t n, Emit&& emit) {
  return for_each_preorder(n, [&](std::span<const Mask64> rows) { return for_each_relation(n, rows, emit); });
}

inline std::vector<KripkeFrame> enumerate_frames(std::size_t n) {
  std::vector<KripkeFrame> out;
  for_each_frame(n, [&](const FrameView<Mask64>& v) {
    out.push_back(to_frame(v));
    return true;
  });
  return out;
}

/// Up-sets of a small preorder given by rows.
inline std::vector<Mask64> up_sets_of(std::size_t n, std::span<const Mask64> up_rows) {
  std::vector<Mask64> down(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (up_rows[x].test(y)) down[y].set(x);
  std::vector<Mask64> out;
  for_each_up_set(n, up_rows, down, [&](Mask64 s) {
    out.push_back(s);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Countermodel search

struct SearchBudget {
  std::size_t max_worlds = 3;
  std::uint64_t max_models = 50'000'000;
  std::uint64_t max_millis = 60'000;
  std::uint64_t seed = 1;  // reserved for randomized strategies

  void validate() const {
    if (max_worlds == 0 || max_models == 0 || max_millis == 0 || seed == 0)
      throw std::invalid_argument("search budget fields must be positive");
    if (max_worlds > kMaxEnumeratedWorlds) throw std::invalid_argument("max_worlds must be at most 8");
  }
};

struct SearchStats {
  std::uint64_t frames = 0;
  std::uint64_t models = 0;
  std::size_t sizes_completed = 0;  // every frame of size <= this was searched
};

struct SearchOutcome {
  enum class Verdict { CountermodelFound, NoCountermodelUpTo, BudgetExhausted };
  Verdict verdict = Verdict::NoCountermodelUpTo;
  std::optional<KripkeModel> model;  // set iff CountermodelFound
  std::size_t world = 0;             // refuting world of `model`
  std::size_t bound = 0;             // max_worlds searched (NoCountermodelUpTo)
  std::string exhausted;             // which budget ran out (BudgetExhausted)
  SearchStats stats;
};

inline const char* to_string(SearchOutcome::Verdict v) {
  switch (v) {
    case SearchOutcome::Verdict::CountermodelFound: return "countermodel_found";
    case SearchOutcome::Verdict::NoCountermodelUpTo: return "no_countermodel_up_to";
    case SearchOutcome::Verdict::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

/// Searches frames of 1..max_worlds worlds and every up-set valuation of
/// the formula's variables. The first refutation in enumeration order is
/// returned after re-checking it with the general model checker. The clock
/// is consulted between frames only.
inline SearchOutcome find_countermodel(const Formula& a, const SearchBudget& budget) {
  budget.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::milliseconds(budget.max_millis);

  const EvalPlan plan(a);
  const std::size_t nvars = plan.variables.size();
  SearchOutcome out;

  for (std::size_t n = 1; n <= budget.max_worlds; ++n) {
    const Mask64 all = Mask64::full(n);
    bool stop = false;
    for_each_preorder(n, [&](std::span<const Mask64> rows) {
      const auto ups = up_sets_of(n, rows);
      std::vector<std::size_t> choice(nvars);
      std::vector<Mask64> vars(nvars);
      for_each_relation(n, rows, [&](const FrameView<Mask64>& view) {
        if (Clock::now() >= deadline) {
          out.verdict = SearchOutcome::Verdict::BudgetExhausted;
          out.exhausted = "max_millis";
          stop = true;
          return false;
        }
        ++out.stats.frames;
        std::fill(choice.begin(), choice.end(), 0);
        for (;;) {
          if (out.stats.models >= budget.max_models) {
            out.verdict = SearchOutcome::Verdict::BudgetExhausted;
            out.exhausted = "max_models";
            stop = true;
            return false;
          }
          ++out.stats.models;
          for (std::size_t i = 0; i < nvars; ++i) vars[i] = ups[choice[i]];
          const auto ext = evaluate<Mask64>(plan, view, vars);
          const Mask64 sat = ext[plan.roots[0]];
          if (!(sat == all)) {
            KripkeModel m{to_frame(view), {}};
            for (std::size_t i = 0; i < nvars; ++i) {
              WorldSet s(n);
              for (std::size_t x = 0; x < n; ++x)
                if (vars[i].test(x)) s.set(x);
              m.valuation.emplace(plan.variables[i], std::move(s));
            }
            const std::size_t w = static_cast<std::size_t>(std::countr_zero(and_not(all, sat).bits));
            if (satisfies(m, w, a)) throw std::logic_error("search evaluator disagrees with the model checker");
            out.verdict = SearchOutcome::Verdict::CountermodelFound;
            out.model = std::move(m);
            out.world = w;
            stop = true;
            return false;
          }
          std::size_t k = 0;
          while (k < nvars && ++choice[k] == ups.size()) choice[k++] = 0;
          if (k == nvars) break;
        }
        return true;
      });
      return !stop;
    });
    if (stop) return out;
    out.stats.sizes_completed = n;
  }
  out.verdict = SearchOutcome::Verdict::NoCountermodelUpTo;
  out.bound = budget.max_worlds;
  return out;
}

struct Decision {
  SearchOutcome outcome;
  std::size_t gamma_size = 0;  // classes of any filtration are <= 2^gamma_size
  std::optional<Filtration> certificate;
  std::optional<FiltrationReport> report;
  bool certificate_refutes = false;  // quotient refutes A at the class of the world
};

/// find_countermodel plus, on success, a verified filtration of the
/// countermodel through the closure set of A. A NoCountermodelUpTo(n)
/// outcome only proves validity when n reaches 2^|Gamma|.
inline Decision decide_bounded(const Formula& a, const SearchBudget& budget) {
  Decision d;
  d.outcome = find_countermodel(a, budget);
  d.gamma_size = closure_basis(a).gamma.size();
  if (d.outcome.model) {
    Filtration f = build_filtration(*d.outcome.model, a);
    d.report = verify_filtration(f);
    d.certificate_refutes = !satisfies(f.quotient(), f.class_of[d.outcome.world], a);
    d.certificate = std::move(f);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Random models

struct RandomModelParams {
  std::size_t min_worlds = 1;
  std::size_t max_worlds = 6;
  double leq_density = 0.2;  // probability of each off-diagonal seed pair
  double r_density = 0.2;    // probability of each R seed pair
  double val_density = 0.3;  // probability of each world in a valuation seed
  std::vector<std::string> variables{"p", "q"};
};

namespace detail {
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
}  // namespace detail

/// Random preorder, relation and persistent valuation, each obtained by
/// closing a random seed. Uses only raw engine output, so the result for a
/// given engine state is the same on every platform.
inline KripkeModel random_model(const RandomModelParams& p, std::mt19937_64& rng) {
  if (p.min_worlds == 0 || p.min_worlds > p.max_worlds) throw std::invalid_argument("bad world-count range");
  const std::size_t n = p.min_worlds + detail::below(rng, p.max_worlds - p.min_worlds + 1);
  BitMatrix leq_seed(n), r_seed(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x != y && detail::unit(rng) < p.leq_density) leq_seed.set(x, y);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (detail::unit(rng) < p.r_density) r_seed.set(x, y);
  KripkeModel m{close_frame(default_world_names(n), leq_seed, r_seed), {}};
  for (const auto& v : p.variables) {
    WorldSet s(n);
    for (std::size_t x = 0; x < n; ++x)
      if (detail::unit(rng) < p.val_density) s.set(x);
    m.valuation.emplace(v, up_closure(m.frame, s));
  }
  return m;
}

inline KripkeModel random_model(const RandomModelParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_model(p, rng);
}

}  // namespace intgc
