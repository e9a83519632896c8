// Finite algebraic semantics: bounded distributive lattices (hence Heyting
// algebras) with an operator pair f, g forming a Galois connection
//   f(a) <= b  iff  a <= g(b)
// Formulas evaluate homomorphically with <> as f and [] as g.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "intgc/formula.hpp"
#include "intgc/kripke.hpp"

namespace intgc {

class AlgebraError : public std::runtime_error {
public:
  enum class Kind { NotAPartialOrder, NotALattice, NotDistributive, BadTable };

  AlgebraError(Kind kind, std::vector<std::size_t> witness, const std::string& what)
      : std::runtime_error(what), kind_(kind), witness_(std::move(witness)) {}

  Kind kind() const { return kind_; }
  const std::vector<std::size_t>& witness() const { return witness_; }

private:
  Kind kind_;
  std::vector<std::size_t> witness_;
};

class UnassignedVariable : public std::invalid_argument {
public:
  explicit UnassignedVariable(const std::string& v) : std::invalid_argument("unassigned variable: " + v) {}
};

using OrderMatrix = std::vector<std::vector<bool>>;

struct FiniteDistLattice {
  std::size_t n = 0;
  OrderMatrix leq;
  std::vector<std::size_t> meet_table, join_table, imp_table;  // row-major n*n
  std::size_t bottom = 0;
  std::size_t top = 0;

  bool le(std::size_t a, std::size_t b) const { return leq[a][b]; }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_table[a * n + b]; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_table[a * n + b]; }
  std::size_t imp(std::size_t a, std::size_t b) const { return imp_table[a * n + b]; }
  std::size_t neg(std::size_t a) const { return imp(a, bottom); }
};

namespace detail {
inline std::string witness_text(const char* what, std::initializer_list<std::size_t> w) {
  std::ostringstream os;
  os << what << " (";
  bool first = true;
  for (auto x : w) {
    os << (first ? "" : ", ") << x;
    first = false;
  }
  os << ")";
  return os.str();
}
}  // namespace detail

/// Builds meet, join and Heyting implication tables for a finite partial
/// order, or throws AlgebraError naming the failing axiom and a witness.
inline FiniteDistLattice lattice_from_order(const OrderMatrix& leq) {
  using K = AlgebraError::Kind;
  const std::size_t n = leq.size();
  if (n == 0) throw AlgebraError(K::NotALattice, {}, "empty carrier");
  for (const auto& row : leq)
    if (row.size() != n) throw AlgebraError(K::BadTable, {}, "order matrix is not square");

  for (std::size_t a = 0; a < n; ++a) {
    if (!leq[a][a]) throw AlgebraError(K::NotAPartialOrder, {a}, detail::witness_text("not reflexive at", {a}));
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && leq[a][b] && leq[b][a])
        throw AlgebraError(K::NotAPartialOrder, {a, b}, detail::witness_text("not antisymmetric at", {a, b}));
      for (std::size_t c = 0; c < n; ++c)
        if (leq[a][b] && leq[b][c] && !leq[a][c])
          throw AlgebraError(K::NotAPartialOrder, {a, b, c}, detail::witness_text("not transitive at", {a, b, c}));
    }
  }

  FiniteDistLattice L;
  L.n = n;
  L.leq = leq;
  L.meet_table.assign(n * n, 0);
  L.join_table.assign(n * n, 0);
  L.imp_table.assign(n * n, 0);

  // Greatest lower bound (or least upper bound when `upper`), if it exists.
  auto bound = [&](std::size_t a, std::size_t b, bool upper) -> std::size_t {
    auto below = [&](std::size_t x, std::size_t y) { return upper ? leq[y][x] : leq[x][y]; };
    for (std::size_t c = 0; c < n; ++c) {
      if (!below(c, a) || !below(c, b)) continue;
      bool best = true;
      for (std::size_t d = 0; d < n && best; ++d)
        if (below(d, a) && below(d, b) && !below(d, c)) best = false;
      if (best) return c;
    }
    throw AlgebraError(K::NotALattice, {a, b},
                       detail::witness_text(upper ? "no least upper bound for" : "no greatest lower bound for", {a, b}));
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      L.meet_table[a * n + b] = bound(a, b, false);
      L.join_table[a * n + b] = bound(a, b, true);
    }

  L.bottom = 0;
  L.top = 0;
  for (std::size_t a = 1; a < n; ++a) {
    L.bottom = L.meet(L.bottom, a);
    L.top = L.join(L.top, a);
  }

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c)))
          throw AlgebraError(K::NotDistributive, {a, b, c}, detail::witness_text("distributivity fails at", {a, b, c}));

  // imp(a, b) = greatest c with a & c <= b; the candidates are closed under
  // joins in a distributive lattice, so their join is the maximum.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t best = L.bottom;
      for (std::size_t c = 0; c < n; ++c)
        if (leq[L.meet(a, c)][b]) best = L.join(best, c);
      L.imp_table[a * n + b] = best;
    }
  return L;
}

struct GCAlgebra {
  FiniteDistLattice lattice;
  std::vector<std::size_t> f;  // lower adjoint, interprets <>
  std::vector<std::size_t> g;  // upper adjoint, interprets []

  std::size_t size() const { return lattice.n; }
};

inline GCAlgebra make_gc_algebra(const OrderMatrix& leq, std::vector<std::size_t> f, std::vector<std::size_t> g) {
  GCAlgebra alg{lattice_from_order(leq), std::move(f), std::move(g)};
  const std::size_t n = alg.size();
  if (alg.f.size() != n || alg.g.size() != n)
    throw AlgebraError(AlgebraError::Kind::BadTable, {}, "operator table size does not match the carrier");
  for (std::size_t a = 0; a < n; ++a)
    if (alg.f[a] >= n || alg.g[a] >= n)
      throw AlgebraError(AlgebraError::Kind::BadTable, {a}, detail::witness_text("operator value out of range at", {a}));
  return alg;
}

struct GcViolation {
  enum class Kind { FNormal, FAdditive, GConormal, GMultiplicative, Galois };
  Kind kind;
  std::vector<std::size_t> witness;
};

inline const char* to_string(GcViolation::Kind k) {
  switch (k) {
    case GcViolation::Kind::FNormal: return "f_normal";
    case GcViolation::Kind::FAdditive: return "f_additive";
    case GcViolation::Kind::GConormal: return "g_conormal";
    case GcViolation::Kind::GMultiplicative: return "g_multiplicative";
    case GcViolation::Kind::Galois: return "galois";
  }
  return "?";
}

/// Normality and additivity of f, co-normality and multiplicativity of g,
/// and the Galois property, each reported separately.
inline std::vector<GcViolation> check_gc_operators(const GCAlgebra& alg) {
  using K = GcViolation::Kind;
  const auto& L = alg.lattice;
  const std::size_t n = L.n;
  std::vector<GcViolation> out;
  if (alg.f[L.bottom] != L.bottom) out.push_back({K::FNormal, {L.bottom}});
  if (alg.g[L.top] != L.top) out.push_back({K::GConormal, {L.top}});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (alg.f[L.join(a, b)] != L.join(alg.f[a], alg.f[b])) out.push_back({K::FAdditive, {a, b}});
      if (alg.g[L.meet(a, b)] != L.meet(alg.g[a], alg.g[b])) out.push_back({K::GMultiplicative, {a, b}});
      if (L.le(alg.f[a], b) != L.le(a, alg.g[b])) out.push_back({K::Galois, {a, b}});
    }
  return out;
}

using Assignment = std::map<std::string, std::size_t>;

inline std::size_t eval_formula(const GCAlgebra& alg, const Assignment& asg, const Formula& f) {
  const auto& L = alg.lattice;
  switch (f.op()) {
    case Op::Var: {
      auto it = asg.find(f.name());
      if (it == asg.end()) throw UnassignedVariable(f.name());
      if (it->second >= L.n) throw std::out_of_range("assignment of '" + f.name() + "' is not an element");
      return it->second;
    }
    case Op::Top: return L.top;
    case Op::Bot: return L.bottom;
    case Op::Not: return L.neg(eval_formula(alg, asg, f.child()));
    case Op::And: return L.meet(eval_formula(alg, asg, f.left()), eval_formula(alg, asg, f.right()));
    case Op::Or: return L.join(eval_formula(alg, asg, f.left()), eval_formula(alg, asg, f.right()));
    case Op::Imp: return L.imp(eval_formula(alg, asg, f.left()), eval_formula(alg, asg, f.right()));
    case Op::Up: return alg.f[eval_formula(alg, asg, f.child())];
    case Op::Down: return alg.g[eval_formula(alg, asg, f.child())];
  }
  return L.bottom;
}

inline constexpr std::uint64_t kDefaultAlgebraBudget = 10'000'000;

/// True iff f evaluates to top under every assignment of its variables.
inline bool valid_in_algebra(const GCAlgebra& alg, const Formula& f, std::uint64_t budget = kDefaultAlgebraBudget) {
  const auto vars = variables(f);
  const std::size_t n = alg.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (total > budget / n) throw BudgetExceeded("valid_in_algebra: too many assignments");
    total *= n;
  }
  // Evaluate over a flattened plan so shared subterms are computed once.
  const EvalPlan plan(f);
  std::vector<std::size_t> choice(vars.size(), 0);
  std::vector<std::size_t> val(plan.nodes.size());
  const auto& L = alg.lattice;
  for (;;) {
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
      const auto& nd = plan.nodes[i];
      switch (nd.op) {
        case Op::Var: val[i] = choice[nd.a]; break;
        case Op::Top: val[i] = L.top; break;
        case Op::Bot: val[i] = L.bottom; break;
        case Op::Not: val[i] = L.neg(val[nd.a]); break;
        case Op::And: val[i] = L.meet(val[nd.a], val[nd.b]); break;
        case Op::Or: val[i] = L.join(val[nd.a], val[nd.b]); break;
        case Op::Imp: val[i] = L.imp(val[nd.a], val[nd.b]); break;
        case Op::Up: val[i] = alg.f[val[nd.a]]; break;
        case Op::Down: val[i] = alg.g[val[nd.a]]; break;
      }
    }
    if (val[plan.roots[0]] != L.top) return false;
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == n) choice[k++] = 0;
    if (k == choice.size()) return true;
  }
}

/// Up-sets of the frame ordered by inclusion, with
///   f(U) = { x : x R y for some y in U }
///   g(U) = { x : y R x implies y in U }
/// Elements are the up-sets sorted as binary numbers (world 0 least
/// significant); they are written to `elements` when requested.
inline GCAlgebra complex_algebra(const KripkeFrame& frame, std::vector<WorldSet>* elements = nullptr) {
  auto violations = check_frame(frame);
  if (!violations.empty()) throw ModelError("not a frame: " + describe(frame, violations.front()));
  auto ups = up_sets(frame);
  std::sort(ups.begin(), ups.end());
  const std::size_t m = ups.size();
  auto index = [&](const WorldSet& s) -> std::size_t {
    auto it = std::lower_bound(ups.begin(), ups.end(), s);
    if (it == ups.end() || !(*it == s)) throw std::logic_error("operator image is not an up-set");
    return static_cast<std::size_t>(it - ups.begin());
  };

  OrderMatrix leq(m, std::vector<bool>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) leq[i][j] = ups[i].is_subset_of(ups[j]);

  const std::size_t n = frame.size();
  const BitMatrix pred = frame.r.transposed();
  std::vector<std::size_t> f(m), g(m);
  for (std::size_t i = 0; i < m; ++i) {
    WorldSet fu(n), gu(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (frame.r.row(x).intersects(ups[i])) fu.set(x);
      if (pred.row(x).is_subset_of(ups[i])) gu.set(x);
    }
    f[i] = index(fu);
    g[i] = index(gu);
  }
  if (elements) *elements = ups;
  return make_gc_algebra(leq, std::move(f), std::move(g));
}

}  // namespace intgc
