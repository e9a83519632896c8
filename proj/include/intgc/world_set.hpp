// Dense bit sets over world indices, plus a row-major bit matrix for
// binary relations. Two set types share one interface so that the model
// checker can be instantiated for arbitrary carriers (WorldSet) and for the
// small carriers produced by exhaustive enumeration (Mask64).
#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace intgc {

/// Dynamic bit set of world indices 0..size()-1.
class WorldSet {
public:
  WorldSet() = default;
  explicit WorldSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static WorldSet empty(std::size_t n) { return WorldSet(n); }
  static WorldSet full(std::size_t n) {
    WorldSet s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i);
    return s;
  }

  std::size_t size() const { return n_; }

  bool test(std::size_t i) const {
    assert(i < n_);
    return (words_[i / 64] >> (i % 64)) & 1U;
  }
  void set(std::size_t i, bool value = true) {
    assert(i < n_);
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    if (value)
      words_[i / 64] |= bit;
    else
      words_[i / 64] &= ~bit;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const { return !none(); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool all() const { return count() == n_; }

  bool is_subset_of(const WorldSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const WorldSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  WorldSet& operator&=(const WorldSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  WorldSet& operator|=(const WorldSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend WorldSet operator&(WorldSet a, const WorldSet& b) { return a &= b; }
  friend WorldSet operator|(WorldSet a, const WorldSet& b) { return a |= b; }

  /// a \ b
  friend WorldSet and_not(WorldSet a, const WorldSet& b) {
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] &= ~b.words_[i];
    return a;
  }

  /// Indices of members in increasing order.
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const WorldSet&, const WorldSet&) = default;

  /// Numeric order with index 0 as the least significant bit.
  friend bool operator<(const WorldSet& a, const WorldSet& b) {
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    return false;
  }

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Fixed-width set for carriers of at most 64 worlds.
struct Mask64 {
  std::uint64_t bits = 0;

  static Mask64 empty(std::size_t) { return {}; }
  static Mask64 full(std::size_t n) {
    return {n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
  }

  bool test(std::size_t i) const { return (bits >> i) & 1U; }
  void set(std::size_t i, bool value = true) {
    if (value)
      bits |= std::uint64_t{1} << i;
    else
      bits &= ~(std::uint64_t{1} << i);
  }
  bool none() const { return bits == 0; }
  bool any() const { return bits != 0; }
  bool is_subset_of(Mask64 o) const { return (bits & ~o.bits) == 0; }
  bool intersects(Mask64 o) const { return (bits & o.bits) != 0; }

  Mask64& operator&=(Mask64 o) {
    bits &= o.bits;
    return *this;
  }
  Mask64& operator|=(Mask64 o) {
    bits |= o.bits;
    return *this;
  }
  friend Mask64 operator&(Mask64 a, Mask64 b) { return {a.bits & b.bits}; }
  friend Mask64 operator|(Mask64 a, Mask64 b) { return {a.bits | b.bits}; }
  friend Mask64 and_not(Mask64 a, Mask64 b) { return {a.bits & ~b.bits}; }
  friend bool operator==(Mask64, Mask64) = default;
};

/// Square boolean matrix stored as one WorldSet per row.
class BitMatrix {
public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : rows_(n, WorldSet(n)) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  std::size_t size() const { return rows_.size(); }
  bool test(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
  void set(std::size_t i, std::size_t j, bool v = true) { rows_[i].set(j, v); }
  const WorldSet& row(std::size_t i) const { return rows_[i]; }
  WorldSet& row(std::size_t i) { return rows_[i]; }

  BitMatrix transposed() const {
    BitMatrix t(size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j : rows_[i].members()) t.set(j, i);
    return t;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (const auto& r : rows_) c += r.count();
    return c;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
  std::vector<WorldSet> rows_;
};

}  // namespace intgc
