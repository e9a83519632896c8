// Closure sets of a root formula A.
//
//   Sub(A)  subformulas of A
//   Gamma   Sub(A) + { []<>B : <>B in Sub(A) } + { <>[]B : []B in Sub(A) }
//   Sigma   Sub(A) plus the four alternating-prefix families
//             ([]<>)^n []B,  <>([]<>)^n []B   for []B in Gamma
//             (<>[])^n <>B,  [](<>[])^n <>B   for <>B in Gamma
//
// Sigma is infinite, but every member collapses onto a member of Gamma
// under the equivalences <>[]<>X == <>X and []<>[]X == []X.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "intgc/formula.hpp"

namespace intgc {

struct ClosureBasis {
  Formula root;
  FormulaList sub;
  /// Sub(root) first, then the added modal pairs; index in this list is the
  /// signature position used by the filtration.
  FormulaList gamma;

  std::size_t gamma_index(const Formula& f) const { return gamma.index_of(f); }
};

inline ClosureBasis closure_basis(const Formula& root) {
  ClosureBasis b{root, subformulas(root), {}};
  for (const auto& f : b.sub) b.gamma.insert(f);
  for (const auto& f : b.sub) {
    if (f.is(Op::Up))
      b.gamma.insert(Formula::down(f));
    else if (f.is(Op::Down))
      b.gamma.insert(Formula::up(f));
  }
  return b;
}

namespace detail {
// ([]<>)^n []C with []C in Gamma
inline bool in_down_family(const ClosureBasis& b, const Formula& f) {
  Formula cur = f;
  while (cur.is(Op::Down)) {
    if (b.gamma.contains(cur)) return true;
    const Formula inner = cur.child();
    if (!inner.is(Op::Up)) return false;
    cur = inner.child();
  }
  return false;
}

// (<>[])^n <>C with <>C in Gamma
inline bool in_up_family(const ClosureBasis& b, const Formula& f) {
  Formula cur = f;
  while (cur.is(Op::Up)) {
    if (b.gamma.contains(cur)) return true;
    const Formula inner = cur.child();
    if (!inner.is(Op::Down)) return false;
    cur = inner.child();
  }
  return false;
}
}  // namespace detail

/// Membership in the (infinite) set Sigma of the basis root.
inline bool in_sigma(const ClosureBasis& b, const Formula& f) {
  if (b.sub.contains(f)) return true;
  if (detail::in_down_family(b, f) || detail::in_up_family(b, f)) return true;
  if (f.is(Op::Up)) return detail::in_down_family(b, f.child());
  if (f.is(Op::Down)) return detail::in_up_family(b, f.child());
  return false;
}

/// Rewrites a leading <>[]<>X to <>X and []<>[]X to []X until neither
/// applies. Only the head of the formula is rewritten.
inline Formula normalize(const Formula& f) {
  Formula cur = f;
  for (;;) {
    const Op head = cur.op();
    if (head != Op::Up && head != Op::Down) return cur;
    const Op mid = head == Op::Up ? Op::Down : Op::Up;
    const Formula a = cur.child();
    if (!a.is(mid)) return cur;
    const Formula b = a.child();
    if (!b.is(head)) return cur;
    cur = b;
  }
}

class NotInSigma : public std::invalid_argument {
public:
  explicit NotInSigma(const Formula& f) : std::invalid_argument("formula not in Sigma: " + render(f)) {}
};

class NormalFormOutsideGamma : public std::logic_error {
public:
  explicit NormalFormOutsideGamma(const Formula& f)
      : std::logic_error("normal form lies outside Gamma: " + render(f)) {}
};

/// The Gamma representative of a Sigma member.
inline Formula star(const ClosureBasis& b, const Formula& f) {
  if (!in_sigma(b, f)) throw NotInSigma(f);
  Formula n = normalize(f);
  if (!b.gamma.contains(n)) throw NormalFormOutsideGamma(n);
  return n;
}

}  // namespace intgc
