// Filtration of a Kripke model through the closure set of a formula A.
//
// Worlds are identified when they satisfy the same members of Gamma. Since
// every member of Sigma is equivalent to its normal form in Gamma, agreement
// on Gamma is agreement on Sigma, and the quotient relations can be computed
// from Gamma-signatures alone:
//
//   [x] <=f [y]  iff  sig(x) is included in sig(y)
//   [x] Rf [y]   iff  for every ([]B, B) with []B in Sigma:
//                       y |= []B  implies  x |= B
//
// The pairs ([]B, B) range over an infinite set but have finitely many
// normal forms; rf_pair_basis lists them.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "intgc/closure.hpp"
#include "intgc/formula.hpp"
#include "intgc/kripke.hpp"

namespace intgc {

/// Entry i records whether a world satisfies basis.gamma[i].
using Signature = std::vector<bool>;

using FormulaPairs = std::vector<std::pair<Formula, Formula>>;

namespace detail {
inline void add_pair(FormulaPairs& out, Formula a, Formula b) {
  std::pair<Formula, Formula> p{normalize(a), normalize(b)};
  if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
}
}  // namespace detail

/// Normal forms of all pairs ([]B, B) with []B in Sigma.
inline FormulaPairs rf_pair_basis(const ClosureBasis& b) {
  FormulaPairs out;
  for (const auto& f : b.gamma) {
    if (f.is(Op::Down)) {
      detail::add_pair(out, f, f.child());
      detail::add_pair(out, f, Formula::up(f));
    } else if (f.is(Op::Up)) {
      detail::add_pair(out, Formula::down(f), f);
    }
  }
  return out;
}

/// Normal forms of all pairs (B, <>B) with <>B in Sigma.
inline FormulaPairs rf_pair_basis_alt(const ClosureBasis& b) {
  FormulaPairs out;
  for (const auto& f : b.gamma) {
    if (f.is(Op::Up)) {
      detail::add_pair(out, f.child(), f);
      detail::add_pair(out, Formula::down(f), f);
    } else if (f.is(Op::Down)) {
      detail::add_pair(out, f, Formula::up(f));
    }
  }
  return out;
}

/// Signatures of every world, indexed by world.
inline std::vector<Signature> signatures(const KripkeModel& m, const ClosureBasis& b) {
  const auto ext = extensions(m, b.gamma.items());
  std::vector<Signature> out(m.size(), Signature(b.gamma.size()));
  for (std::size_t i = 0; i < ext.size(); ++i)
    for (std::size_t x : ext[i].members()) out[x][i] = true;
  return out;
}

inline Signature signature(const KripkeModel& m, std::size_t world, const ClosureBasis& b) {
  if (world >= m.size()) throw UnknownWorld(std::to_string(world));
  Signature s(b.gamma.size());
  const auto ext = extensions(m, b.gamma.items());
  for (std::size_t i = 0; i < ext.size(); ++i) s[i] = ext[i].test(world);
  return s;
}

/// c R d iff for every (premise, conclusion): d |= premise implies
/// c |= conclusion. Both formulas of every pair must lie in Gamma.
inline BitMatrix relation_from_pairs(const ClosureBasis& b, const std::vector<Signature>& classes,
                                     const FormulaPairs& pairs) {
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (const auto& [premise, conclusion] : pairs) {
    const std::size_t i = b.gamma_index(premise);
    const std::size_t j = b.gamma_index(conclusion);
    if (i == FormulaList::npos) throw NormalFormOutsideGamma(premise);
    if (j == FormulaList::npos) throw NormalFormOutsideGamma(conclusion);
    idx.emplace_back(i, j);
  }
  const std::size_t k = classes.size();
  BitMatrix r(k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = 0; d < k; ++d) {
      bool related = true;
      for (auto [i, j] : idx)
        if (classes[d][i] && !classes[c][j]) {
          related = false;
          break;
        }
      r.set(c, d, related);
    }
  return r;
}

struct Filtration {
  ClosureBasis basis;
  KripkeModel source;
  /// One signature per class, sorted as binary numbers (entry 0 most
  /// significant).
  std::vector<Signature> classes;
  std::vector<std::size_t> class_of;  // world index -> class index
  BitMatrix leq_f;
  BitMatrix r_f;
  std::map<std::string, WorldSet> v_f;  // only variables occurring in Gamma

  static std::string class_name(std::size_t c) { return "c" + std::to_string(c); }

  /// The quotient as an ordinary model with worlds c0, c1, ...
  KripkeModel quotient() const {
    KripkeModel q;
    for (std::size_t c = 0; c < classes.size(); ++c) q.frame.worlds.push_back(class_name(c));
    q.frame.leq = leq_f;
    q.frame.r = r_f;
    q.valuation = v_f;
    return q;
  }
};

inline Filtration build_filtration(const KripkeModel& m, const Formula& a) {
  validate_model(m);
  Filtration f{closure_basis(a), m, {}, {}, {}, {}, {}};
  const auto sigs = signatures(m, f.basis);
  f.classes = sigs;
  std::sort(f.classes.begin(), f.classes.end());
  f.classes.erase(std::unique(f.classes.begin(), f.classes.end()), f.classes.end());
  for (const auto& s : sigs)
    f.class_of.push_back(static_cast<std::size_t>(
        std::lower_bound(f.classes.begin(), f.classes.end(), s) - f.classes.begin()));

  const std::size_t k = f.classes.size();
  f.leq_f = BitMatrix(k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = 0; d < k; ++d) {
      bool included = true;
      for (std::size_t i = 0; i < f.basis.gamma.size() && included; ++i)
        if (f.classes[c][i] && !f.classes[d][i]) included = false;
      f.leq_f.set(c, d, included);
    }
  f.r_f = relation_from_pairs(f.basis, f.classes, rf_pair_basis(f.basis));

  for (std::size_t i = 0; i < f.basis.gamma.size(); ++i) {
    const Formula& g = f.basis.gamma[i];
    if (!g.is(Op::Var)) continue;
    WorldSet s(k);
    for (std::size_t c = 0; c < k; ++c)
      if (f.classes[c][i]) s.set(c);
    f.v_f.emplace(g.name(), std::move(s));
  }
  return f;
}

struct FiltrationCheck {
  explicit FiltrationCheck(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  bool passed = true;
  std::size_t violations = 0;
  std::vector<std::string> witnesses;  // first few violations

  void fail(const std::string& w) {
    passed = false;
    if (++violations <= kMaxWitnesses) witnesses.push_back(w);
  }
  static constexpr std::size_t kMaxWitnesses = 16;
};

struct FiltrationReport {
  std::vector<FiltrationCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

inline FiltrationReport verify_filtration(const Filtration& f) {
  const KripkeModel& m = f.source;
  const KripkeModel q = f.quotient();
  const std::size_t n = m.size();
  const std::size_t k = f.classes.size();
  auto wname = [&](std::size_t x) { return m.frame.worlds[x]; };
  auto cname = [&](std::size_t x) { return "[" + m.frame.worlds[x] + "]"; };

  FiltrationReport report;

  FiltrationCheck preserve{"relation_preservation"};
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t cx = f.class_of[x], cy = f.class_of[y];
      if (m.frame.leq.test(x, y) && !f.leq_f.test(cx, cy))
        preserve.fail(wname(x) + " <= " + wname(y) + " but not " + cname(x) + " <=f " + cname(y));
      if (m.frame.r.test(x, y) && !f.r_f.test(cx, cy))
        preserve.fail(wname(x) + " R " + wname(y) + " but not " + cname(x) + " Rf " + cname(y));
    }
  report.checks.push_back(std::move(preserve));

  FiltrationCheck frame{"quotient_is_frame"};
  for (const auto& v : check_frame(q.frame)) frame.fail(describe(q.frame, v));
  for (const auto& [name, set] : q.valuation)
    if (!is_up_closed(q.frame, set)) frame.fail("valuation of " + name + " is not upward closed");
  report.checks.push_back(std::move(frame));

  FiltrationCheck agree{"filtration_lemma"};
  const auto src = extensions(m, f.basis.gamma.items());
  const auto dst = extensions(q, f.basis.gamma.items());
  for (std::size_t i = 0; i < f.basis.gamma.size(); ++i)
    for (std::size_t x = 0; x < n; ++x)
      if (src[i].test(x) != dst[i].test(f.class_of[x]))
        agree.fail(wname(x) + (src[i].test(x) ? " satisfies " : " refutes ") + render(f.basis.gamma[i]) +
                   " but " + cname(x) + " does not agree");
  report.checks.push_back(std::move(agree));

  FiltrationCheck bound{"class_bound"};
  const std::size_t g = f.basis.gamma.size();
  if (k > n || (g < 64 && k > (std::size_t{1} << g)))
    bound.fail(std::to_string(k) + " classes exceed min(" + std::to_string(n) + ", 2^" + std::to_string(g) + ")");
  report.checks.push_back(std::move(bound));

  FiltrationCheck alt{"alternative_rf"};
  const BitMatrix r_alt = relation_from_pairs(f.basis, f.classes, rf_pair_basis_alt(f.basis));
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = 0; d < k; ++d)
      if (r_alt.test(c, d) != f.r_f.test(c, d))
        alt.fail(Filtration::class_name(c) + ", " + Filtration::class_name(d) + ": Rf=" +
                 (f.r_f.test(c, d) ? "1" : "0") + " alt=" + (r_alt.test(c, d) ? "1" : "0"));
  report.checks.push_back(std::move(alt));

  return report;
}

}  // namespace intgc
