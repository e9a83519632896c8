// Kripke frames and models for IntGC, and the model checker.
//
// A frame is (X, <=, R) with <= a preorder and R closed under
//   x <= x',  x R y,  y' <= y   =>   x' R y'
// Satisfaction:
//   x |= A -> B   iff  every y >= x satisfying A satisfies B
//   x |= !A       iff  no y >= x satisfies A
//   x |= <>A      iff  some y with x R y satisfies A
//   x |= []A      iff  every y with y R x satisfies A
#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "intgc/formula.hpp"
#include "intgc/world_set.hpp"

namespace intgc {

class UnknownWorld : public std::out_of_range {
public:
  explicit UnknownWorld(const std::string& w) : std::out_of_range("unknown world: " + w) {}
};

/// Malformed model input: bad frame, non-persistent valuation, size mismatch.
class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct KripkeFrame {
  std::vector<std::string> worlds;
  BitMatrix leq;  // leq.test(x, y) iff x <= y
  BitMatrix r;    // r.test(x, y) iff x R y

  std::size_t size() const { return worlds.size(); }

  std::size_t index_of(const std::string& w) const {
    for (std::size_t i = 0; i < worlds.size(); ++i)
      if (worlds[i] == w) return i;
    throw UnknownWorld(w);
  }

  friend bool operator==(const KripkeFrame&, const KripkeFrame&) = default;
};

struct FrameViolation {
  enum class Kind { Reflexivity, Transitivity, Star };
  Kind kind;
  /// Reflexivity: {x}. Transitivity: {x, y, z} with x<=y<=z, not x<=z.
  /// Star: {x, x', y, y'} with x<=x', x R y, y'<=y, not x' R y'.
  std::vector<std::size_t> witness;
};

inline std::string describe(const KripkeFrame& frame, const FrameViolation& v) {
  auto w = [&](std::size_t i) { return frame.worlds[v.witness[i]]; };
  std::ostringstream os;
  switch (v.kind) {
    case FrameViolation::Kind::Reflexivity: os << "reflexivity: missing " << w(0) << " <= " << w(0); break;
    case FrameViolation::Kind::Transitivity:
      os << "transitivity: " << w(0) << " <= " << w(1) << " <= " << w(2) << " but not " << w(0) << " <= " << w(2);
      break;
    case FrameViolation::Kind::Star:
      os << "frame condition: " << w(1) << " >= " << w(0) << ", " << w(0) << " R " << w(2) << ", " << w(2)
         << " >= " << w(3) << " but not " << w(1) << " R " << w(3);
      break;
  }
  return os.str();
}

/// Every violation of reflexivity, transitivity and the R closure condition.
inline std::vector<FrameViolation> check_frame(const KripkeFrame& frame) {
  std::vector<FrameViolation> out;
  const std::size_t n = frame.size();
  if (frame.leq.size() != n || frame.r.size() != n) throw ModelError("relation size does not match world count");
  for (std::size_t x = 0; x < n; ++x)
    if (!frame.leq.test(x, x)) out.push_back({FrameViolation::Kind::Reflexivity, {x}});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y : frame.leq.row(x).members())
      for (std::size_t z : frame.leq.row(y).members())
        if (!frame.leq.test(x, z)) out.push_back({FrameViolation::Kind::Transitivity, {x, y, z}});
  const BitMatrix geq = frame.leq.transposed();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y : frame.r.row(x).members())
      for (std::size_t x2 : frame.leq.row(x).members())
        for (std::size_t y2 : geq.row(y).members())
          if (!frame.r.test(x2, y2)) out.push_back({FrameViolation::Kind::Star, {x, x2, y, y2}});
  return out;
}

inline BitMatrix reflexive_transitive_closure(BitMatrix m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  // Warshall
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (m.test(i, k)) m.row(i) |= WorldSet(m.row(k));
  return m;
}

/// Smallest relation containing `r_seed` that satisfies the frame condition
/// over the preorder `leq`.
inline BitMatrix close_relation(const BitMatrix& leq, const BitMatrix& r_seed) {
  const std::size_t n = leq.size();
  const BitMatrix geq = leq.transposed();
  BitMatrix r(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y : r_seed.row(x).members())
      for (std::size_t x2 : leq.row(x).members()) r.row(x2) |= geq.row(y);
  return r;
}

inline KripkeFrame close_frame(std::vector<std::string> worlds, const BitMatrix& leq_seed, const BitMatrix& r_seed) {
  KripkeFrame f;
  f.leq = reflexive_transitive_closure(leq_seed);
  f.r = close_relation(f.leq, r_seed);
  f.worlds = std::move(worlds);
  return f;
}

inline bool is_up_closed(const KripkeFrame& frame, const WorldSet& s) {
  for (std::size_t x : s.members())
    if (!frame.leq.row(x).is_subset_of(s)) return false;
  return true;
}

inline WorldSet up_closure(const KripkeFrame& frame, const WorldSet& s) {
  WorldSet out(frame.size());
  for (std::size_t x : s.members()) out |= frame.leq.row(x);
  return out;
}

struct KripkeModel {
  KripkeFrame frame;
  /// Variables missing from the map denote the empty set.
  std::map<std::string, WorldSet> valuation;

  std::size_t size() const { return frame.size(); }
};

/// Throws ModelError unless the frame is valid and every valuation set is
/// upward closed.
inline void validate_model(const KripkeModel& m) {
  auto violations = check_frame(m.frame);
  if (!violations.empty()) throw ModelError("not a frame: " + describe(m.frame, violations.front()));
  for (const auto& [name, set] : m.valuation) {
    if (set.size() != m.size()) throw ModelError("valuation of '" + name + "' has wrong size");
    if (!is_up_closed(m.frame, set)) throw ModelError("valuation of '" + name + "' is not upward closed");
  }
}

// ---------------------------------------------------------------------------
// Evaluation

/// A set of formulas flattened into a topologically ordered node list with
/// shared subformulas evaluated once.
struct EvalPlan {
  struct Node {
    Op op;
    std::size_t a = 0;  // child / left operand, or variable slot for Var
    std::size_t b = 0;  // right operand
  };
  std::vector<Node> nodes;
  FormulaList formulas;                // node i evaluates formulas[i]
  std::vector<std::string> variables;  // sorted; Var nodes refer to slots here
  std::vector<std::size_t> roots;      // node index per compiled formula

  explicit EvalPlan(const std::vector<Formula>& fs) {
    formulas = subformulas(fs);
    variables = intgc::variables(fs);
    nodes.reserve(formulas.size());
    for (const auto& f : formulas) {
      Node n{f.op()};
      if (f.is(Op::Var)) {
        n.a = static_cast<std::size_t>(std::lower_bound(variables.begin(), variables.end(), f.name()) -
                                       variables.begin());
      } else if (is_unary(f.op())) {
        n.a = formulas.index_of(f.child());
      } else if (is_binary(f.op())) {
        n.a = formulas.index_of(f.left());
        n.b = formulas.index_of(f.right());
      }
      nodes.push_back(n);
    }
    for (const auto& f : fs) roots.push_back(formulas.index_of(f));
  }
  explicit EvalPlan(const Formula& f) : EvalPlan(std::vector<Formula>{f}) {}
};

/// Relations of a frame in the row layout the evaluator needs.
template <class Set>
struct FrameView {
  std::size_t n = 0;
  std::vector<Set> up;    // up[x]   = { y : x <= y }
  std::vector<Set> succ;  // succ[x] = { y : x R y }
  std::vector<Set> pred;  // pred[x] = { y : y R x }
};

template <class Set>
Set convert_set(const WorldSet& s) {
  if constexpr (std::is_same_v<Set, WorldSet>) {
    return s;
  } else {
    Set out = Set::empty(s.size());
    for (std::size_t i : s.members()) out.set(i);
    return out;
  }
}

template <class Set>
FrameView<Set> make_view(const KripkeFrame& frame) {
  FrameView<Set> v;
  v.n = frame.size();
  const BitMatrix rt = frame.r.transposed();
  for (std::size_t x = 0; x < v.n; ++x) {
    v.up.push_back(convert_set<Set>(frame.leq.row(x)));
    v.succ.push_back(convert_set<Set>(frame.r.row(x)));
    v.pred.push_back(convert_set<Set>(rt.row(x)));
  }
  return v;
}

/// Extension of every plan node. `vars[i]` is the extension of
/// plan.variables[i].
template <class Set>
std::vector<Set> evaluate(const EvalPlan& plan, const FrameView<Set>& view, std::span<const Set> vars) {
  const std::size_t n = view.n;
  std::vector<Set> ext;
  ext.reserve(plan.nodes.size());
  for (const auto& node : plan.nodes) {
    Set s = Set::empty(n);
    switch (node.op) {
      case Op::Var: s = vars[node.a]; break;
      case Op::Top: s = Set::full(n); break;
      case Op::Bot: break;
      case Op::And: s = ext[node.a] & ext[node.b]; break;
      case Op::Or: s = ext[node.a] | ext[node.b]; break;
      case Op::Imp: {
        const Set bad = and_not(ext[node.a], ext[node.b]);
        for (std::size_t x = 0; x < n; ++x)
          if (!view.up[x].intersects(bad)) s.set(x);
        break;
      }
      case Op::Not:
        for (std::size_t x = 0; x < n; ++x)
          if (!view.up[x].intersects(ext[node.a])) s.set(x);
        break;
      case Op::Up:
        for (std::size_t x = 0; x < n; ++x)
          if (view.succ[x].intersects(ext[node.a])) s.set(x);
        break;
      case Op::Down:
        for (std::size_t x = 0; x < n; ++x)
          if (view.pred[x].is_subset_of(ext[node.a])) s.set(x);
        break;
    }
    ext.push_back(std::move(s));
  }
  return ext;
}

template <class Set>
std::vector<Set> valuation_slots(const EvalPlan& plan, const KripkeModel& m) {
  std::vector<Set> vars;
  for (const auto& name : plan.variables) {
    auto it = m.valuation.find(name);
    vars.push_back(it == m.valuation.end() ? Set::empty(m.size()) : convert_set<Set>(it->second));
  }
  return vars;
}

/// Extension of every formula in `fs`, in order.
inline std::vector<WorldSet> extensions(const KripkeModel& m, const std::vector<Formula>& fs) {
  const EvalPlan plan(fs);
  const auto view = make_view<WorldSet>(m.frame);
  const auto vars = valuation_slots<WorldSet>(plan, m);
  auto ext = evaluate<WorldSet>(plan, view, vars);
  std::vector<WorldSet> out;
  for (std::size_t r : plan.roots) out.push_back(ext[r]);
  return out;
}

inline WorldSet extension(const KripkeModel& m, const Formula& f) { return extensions(m, {f}).front(); }

inline bool satisfies(const KripkeModel& m, std::size_t world, const Formula& f) {
  if (world >= m.size()) throw UnknownWorld(std::to_string(world));
  return extension(m, f).test(world);
}

inline bool satisfies(const KripkeModel& m, const std::string& world, const Formula& f) {
  return satisfies(m, m.frame.index_of(world), f);
}

inline bool valid_in_model(const KripkeModel& m, const Formula& f) { return extension(m, f).all(); }

/// First world refuting f, if any.
inline std::optional<std::size_t> failing_world(const KripkeModel& m, const Formula& f) {
  const WorldSet e = extension(m, f);
  for (std::size_t x = 0; x < m.size(); ++x)
    if (!e.test(x)) return x;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Up-set enumeration

/// Calls `emit` once for every up-set of a preorder on m <= 64 elements
/// until it returns false. `up[i]` / `down[i]` hold the elements above /
/// below i (both reflexive). Backtracking over the first undecided element;
/// every leaf is a distinct up-set. The empty set comes first. Returns false
/// if `emit` stopped the enumeration.
template <class Emit>
bool for_each_up_set(std::size_t m, std::span<const Mask64> up, std::span<const Mask64> down, Emit&& emit) {
  const Mask64 all = Mask64::full(m);
  auto rec = [&](auto& self, Mask64 in, Mask64 out) -> bool {
    const Mask64 undecided = and_not(all, in | out);
    if (undecided.none()) return emit(in);
    const std::size_t e = static_cast<std::size_t>(std::countr_zero(undecided.bits));
    return self(self, in, out | down[e]) && self(self, in | up[e], out);
  };
  return rec(rec, Mask64{}, Mask64{});
}

/// Up-sets of the frame's preorder. Requires at most 64 worlds.
inline std::vector<WorldSet> up_sets(const KripkeFrame& frame) {
  const std::size_t n = frame.size();
  if (n > 64) throw BudgetExceeded("up-set enumeration supports at most 64 worlds");
  std::vector<Mask64> up, down;
  const BitMatrix geq = frame.leq.transposed();
  for (std::size_t x = 0; x < n; ++x) {
    up.push_back(convert_set<Mask64>(frame.leq.row(x)));
    down.push_back(convert_set<Mask64>(geq.row(x)));
  }
  std::vector<WorldSet> out;
  for_each_up_set(n, up, down, [&](Mask64 m) {
    WorldSet s(n);
    for (std::size_t i = 0; i < n; ++i)
      if (m.test(i)) s.set(i);
    out.push_back(std::move(s));
    return true;
  });
  return out;
}

/// Upper bound on model checks valid_in_frame will perform.
inline constexpr std::uint64_t kDefaultFrameBudget = 1'000'000;

/// True iff f holds in every model on `frame` that assigns up-sets to
/// `vars`. Throws BudgetExceeded when (#up-sets)^|vars| exceeds `budget`.
inline bool valid_in_frame(const KripkeFrame& frame, const Formula& f, const std::vector<std::string>& vars,
                           std::uint64_t budget = kDefaultFrameBudget) {
  for (const auto& v : variables(f))
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw std::invalid_argument("variable '" + v + "' missing from the variable list");
  const auto ups = up_sets(frame);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (total > budget / ups.size()) throw BudgetExceeded("valid_in_frame: too many valuations");
    total *= ups.size();
  }
  if (total > budget) throw BudgetExceeded("valid_in_frame: too many valuations");

  const EvalPlan plan(f);
  const std::size_t n = frame.size();
  const auto view = make_view<Mask64>(frame);
  std::vector<Mask64> ups64;
  for (const auto& u : ups) ups64.push_back(convert_set<Mask64>(u));
  // Slot of each plan variable inside `vars`; extra entries of vars are
  // enumerated too, matching the definition of validity over them.
  std::vector<std::size_t> slot;
  for (const auto& v : plan.variables)
    slot.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin()));

  std::vector<std::size_t> choice(vars.size(), 0);
  std::vector<Mask64> assigned(plan.variables.size());
  const Mask64 all = Mask64::full(n);
  for (;;) {
    for (std::size_t i = 0; i < slot.size(); ++i) assigned[i] = ups64[choice[slot[i]]];
    const auto ext = evaluate<Mask64>(plan, view, assigned);
    if (!(ext[plan.roots[0]] == all)) return false;
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == ups64.size()) choice[k++] = 0;
    if (k == choice.size()) return true;
  }
}

}  // namespace intgc
