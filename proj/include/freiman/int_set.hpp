#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace freiman {

/// A finite set of integers kept as a strictly increasing sequence.
class IntSet {
 public:
  IntSet() = default;
  /// Takes ownership of values that must already be strictly increasing.
  explicit IntSet(std::vector<std::int64_t> sorted_values);
  IntSet(std::initializer_list<std::int64_t> values);

  static IntSet from_unsorted(std::vector<std::int64_t> values);
  /// {lo, lo+1, ..., hi}; empty when hi < lo.
  static IntSet interval(std::int64_t lo, std::int64_t hi);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<const std::int64_t> elements() const& { return values_; }
  const std::vector<std::int64_t>& values() const& { return values_; }
  std::vector<std::int64_t> values() && { return std::move(values_); }
  std::int64_t operator[](std::size_t i) const { return values_[i]; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  std::int64_t min() const;
  std::int64_t max() const;
  bool contains(std::int64_t x) const;
  std::optional<std::size_t> index_of(std::int64_t x) const;

  IntSet translated(std::int64_t shift) const;
  IntSet dilated(std::int64_t factor) const;
  IntSet negated() const;
  /// Elements satisfying the predicate, order preserved.
  template <class Pred>
  IntSet filtered(Pred pred) const {
    std::vector<std::int64_t> out;
    for (auto v : values_) {
      if (pred(v)) out.push_back(v);
    }
    return IntSet(std::move(out));
  }

  friend bool operator==(const IntSet&, const IntSet&) = default;

 private:
  std::vector<std::int64_t> values_;
};

/// Bit-vector image of a set over the window [offset, offset + width).
struct DenseBits {
  std::int64_t offset = 0;
  std::size_t width = 0;
  std::vector<std::uint64_t> words;

  static DenseBits of(const IntSet& s);
  bool test(std::int64_t x) const;
  std::size_t count() const;
};

/// {start + k*difference : 0 <= k < count}, difference >= 1, count >= 1.
class ArithProgression {
 public:
  ArithProgression(std::int64_t start, std::int64_t difference, std::int64_t count);

  std::int64_t start() const { return start_; }
  std::int64_t difference() const { return difference_; }
  std::int64_t count() const { return count_; }
  std::int64_t last() const { return start_ + (count_ - 1) * difference_; }

  bool contains(std::int64_t x) const;
  /// Symmetric about 0 with 0 as a term.
  bool is_centred() const;
  IntSet terms() const;
  std::size_t intersection_size(const IntSet& s) const;

  friend bool operator==(const ArithProgression&, const ArithProgression&) = default;

 private:
  std::int64_t start_;
  std::int64_t difference_;
  std::int64_t count_;
};

enum class Side { a, b };

/// x -> (x - shift) / scale applied per side; inverse is y -> y * scale + shift.
struct NormalizationMap {
  std::int64_t shift_a = 0;
  std::int64_t shift_b = 0;
  std::int64_t scale = 1;

  std::int64_t apply(Side side, std::int64_t x) const;
  std::int64_t invert(Side side, std::int64_t y) const;
  IntSet apply(Side side, const IntSet& s) const;
  IntSet invert(Side side, const IntSet& s) const;

  friend bool operator==(const NormalizationMap&, const NormalizationMap&) = default;
};

struct NormalizedPair {
  IntSet a;
  IntSet b;
  NormalizationMap map;
  std::int64_t ell = 0;
};

/// Translates both sets to start at 0 and divides by the gcd of all offsets.
/// Throws EmptyInput for an empty set, DegenerateSet when every offset is 0.
NormalizedPair normalize_pair(const IntSet& a, const IntSet& b);

/// gcd of the differences from the minimum; 0 for sets with at most one element.
std::int64_t offset_gcd(const IntSet& s);

/// #{(a, b) in A x B : a + b = x}.
std::int64_t rep_function(const IntSet& a, const IntSet& b, std::int64_t x);

ArithProgression denormalize_ap(const ArithProgression& p, const NormalizationMap& map, Side side);

}  // namespace freiman
