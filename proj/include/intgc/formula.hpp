// Formula AST for intuitionistic propositional logic with the adjoint
// modalities <> (lower adjoint, existential over R-successors) and []
// (upper adjoint, universal over R-predecessors).
#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace intgc {

enum class Op : std::uint8_t { Var, Top, Bot, Not, And, Or, Imp, Up, Down };

inline bool is_unary(Op op) { return op == Op::Not || op == Op::Up || op == Op::Down; }
inline bool is_binary(Op op) { return op == Op::And || op == Op::Or || op == Op::Imp; }

/// Immutable formula tree with value semantics. Copies share structure.
/// Equality and ordering are structural.
class Formula {
  struct Node {
    Op op;
    std::string name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    std::size_t hash;
    std::size_t size;
    std::size_t depth;
  };

public:
  /// Defaults to `true`.
  Formula() : node_(top().node_) {}

  static Formula var(std::string name) {
    if (name.empty()) throw std::invalid_argument("empty variable name");
    const std::size_t h = std::hash<std::string>{}(name) ^ 0x9e3779b97f4a7c15ULL;
    return Formula(std::make_shared<const Node>(Node{Op::Var, std::move(name), nullptr, nullptr, h, 1, 0}));
  }
  static Formula top() {
    static const Formula t(std::make_shared<const Node>(Node{Op::Top, {}, nullptr, nullptr, 0x1234567ULL, 1, 0}));
    return t;
  }
  static Formula bot() {
    static const Formula b(std::make_shared<const Node>(Node{Op::Bot, {}, nullptr, nullptr, 0x7654321ULL, 1, 0}));
    return b;
  }
  static Formula neg(const Formula& a) { return unary(Op::Not, a); }
  static Formula up(const Formula& a) { return unary(Op::Up, a); }
  static Formula down(const Formula& a) { return unary(Op::Down, a); }
  static Formula conj(const Formula& a, const Formula& b) { return binary(Op::And, a, b); }
  static Formula disj(const Formula& a, const Formula& b) { return binary(Op::Or, a, b); }
  static Formula imp(const Formula& a, const Formula& b) { return binary(Op::Imp, a, b); }
  /// (a -> b) & (b -> a)
  static Formula iff(const Formula& a, const Formula& b) { return conj(imp(a, b), imp(b, a)); }

  Op op() const { return node_->op; }
  bool is(Op o) const { return node_->op == o; }
  const std::string& name() const { return node_->name; }

  /// Operand of a unary node; left operand of a binary node.
  Formula child() const { return Formula(node_->lhs); }
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }

  std::size_t hash() const { return node_->hash; }
  /// Number of nodes in the tree.
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }

  friend bool operator==(const Formula& a, const Formula& b) { return compare(a.node_.get(), b.node_.get()) == 0; }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    const int c = compare(a.node_.get(), b.node_.get());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula unary(Op op, const Formula& a) {
    const std::size_t h = (a.hash() * 31 + static_cast<std::size_t>(op)) ^ (a.hash() >> 7);
    return Formula(std::make_shared<const Node>(
        Node{op, {}, a.node_, nullptr, h, a.size() + 1, a.depth() + 1}));
  }
  static Formula binary(Op op, const Formula& a, const Formula& b) {
    std::size_t h = a.hash() * 1000003ULL;
    h ^= b.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h = h * 31 + static_cast<std::size_t>(op);
    return Formula(std::make_shared<const Node>(
        Node{op, {}, a.node_, b.node_, h, a.size() + b.size() + 1, std::max(a.depth(), b.depth()) + 1}));
  }

  static int compare(const Node* a, const Node* b) {
    if (a == b) return 0;
    if (a->op != b->op) return a->op < b->op ? -1 : 1;
    if (a->op == Op::Var) {
      const int c = a->name.compare(b->name);
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    if (a->lhs == nullptr) return 0;
    if (a->size != b->size) return a->size < b->size ? -1 : 1;
    if (int c = compare(a->lhs.get(), b->lhs.get())) return c;
    if (a->rhs == nullptr) return 0;
    return compare(a->rhs.get(), b->rhs.get());
  }

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Insertion-ordered set of formulas keyed by structural equality.
class FormulaList {
public:
  FormulaList() = default;
  FormulaList(std::initializer_list<Formula> init) {
    for (const auto& f : init) insert(f);
  }

  /// Returns true if `f` was not already present.
  bool insert(const Formula& f) {
    auto [it, inserted] = index_.try_emplace(f, items_.size());
    if (inserted) items_.push_back(f);
    return inserted;
  }
  bool contains(const Formula& f) const { return index_.count(f) != 0; }
  /// Position of `f`, or npos.
  std::size_t index_of(const Formula& f) const {
    auto it = index_.find(f);
    return it == index_.end() ? npos : it->second;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Formula& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<Formula>& items() const { return items_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  std::vector<Formula> items_;
  std::unordered_map<Formula, std::size_t, FormulaHash> index_;
};

namespace detail {
inline void collect_subformulas(const Formula& f, FormulaList& out) {
  if (is_unary(f.op())) {
    collect_subformulas(f.child(), out);
  } else if (is_binary(f.op())) {
    collect_subformulas(f.left(), out);
    collect_subformulas(f.right(), out);
  }
  out.insert(f);
}
}  // namespace detail

/// Sub(f) in post-order of first occurrence; f itself comes last.
inline FormulaList subformulas(const Formula& f) {
  FormulaList out;
  detail::collect_subformulas(f, out);
  return out;
}

/// Union of the subformulas of several formulas, children before parents.
inline FormulaList subformulas(const std::vector<Formula>& fs) {
  FormulaList out;
  for (const auto& f : fs) detail::collect_subformulas(f, out);
  return out;
}

/// Variable names occurring in f, sorted.
inline std::vector<std::string> variables(const Formula& f) {
  std::set<std::string> names;
  for (const auto& s : subformulas(f))
    if (s.is(Op::Var)) names.insert(s.name());
  return {names.begin(), names.end()};
}

inline std::vector<std::string> variables(const std::vector<Formula>& fs) {
  std::set<std::string> names;
  for (const auto& f : fs)
    for (auto& v : variables(f)) names.insert(std::move(v));
  return {names.begin(), names.end()};
}

namespace detail {
// Binding strength used by the renderer: higher binds tighter.
inline int precedence(Op op) {
  switch (op) {
    case Op::Imp: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not:
    case Op::Up:
    case Op::Down: return 4;
    default: return 5;
  }
}

inline void render_into(const Formula& f, std::string& out) {
  auto operand = [&out](const Formula& g, bool parens) {
    if (parens) out += '(';
    render_into(g, out);
    if (parens) out += ')';
  };
  const int p = precedence(f.op());
  switch (f.op()) {
    case Op::Var: out += f.name(); return;
    case Op::Top: out += "true"; return;
    case Op::Bot: out += "false"; return;
    case Op::Not: out += '!'; break;
    case Op::Up: out += "<>"; break;
    case Op::Down: out += "[]"; break;
    default: break;
  }
  if (is_unary(f.op())) {
    operand(f.child(), precedence(f.child().op()) < p);
    return;
  }
  const char* sym = f.is(Op::And) ? " & " : f.is(Op::Or) ? " | " : " -> ";
  // & and | associate to the left, -> to the right.
  const bool right_assoc = f.is(Op::Imp);
  const int lp = precedence(f.left().op());
  const int rp = precedence(f.right().op());
  operand(f.left(), right_assoc ? lp <= p : lp < p);
  out += sym;
  operand(f.right(), right_assoc ? rp < p : rp <= p);
}
}  // namespace detail

/// Minimally parenthesised ASCII rendering; parse(render(f)) == f.
inline std::string render(const Formula& f) {
  std::string out;
  detail::render_into(f, out);
  return out;
}

}  // namespace intgc

template <>
struct std::hash<intgc::Formula> {
  std::size_t operator()(const intgc::Formula& f) const { return f.hash(); }
};
