#include "freiman/int_set.hpp"

#include "freiman/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace freiman {

IntSet::IntSet(std::vector<std::int64_t> sorted_values) : values_(std::move(sorted_values)) {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i - 1] >= values_[i]) throw InputError("IntSet elements must be strictly increasing");
  }
}

IntSet::IntSet(std::initializer_list<std::int64_t> values) : IntSet(std::vector<std::int64_t>(values)) {}

IntSet IntSet::from_unsorted(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return IntSet(std::move(values));
}

IntSet IntSet::interval(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  if (hi >= lo) {
    v.resize(static_cast<std::size_t>(hi - lo + 1));
    std::iota(v.begin(), v.end(), lo);
  }
  return IntSet(std::move(v));
}

std::int64_t IntSet::min() const {
  if (values_.empty()) throw EmptySet("min of empty IntSet");
  return values_.front();
}

std::int64_t IntSet::max() const {
  if (values_.empty()) throw EmptySet("max of empty IntSet");
  return values_.back();
}

bool IntSet::contains(std::int64_t x) const { return std::binary_search(values_.begin(), values_.end(), x); }

std::optional<std::size_t> IntSet::index_of(std::int64_t x) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  if (it == values_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - values_.begin());
}

IntSet IntSet::translated(std::int64_t shift) const {
  auto v = values_;
  for (auto& x : v) x += shift;
  return IntSet(std::move(v));
}

IntSet IntSet::dilated(std::int64_t factor) const {
  if (factor <= 0) throw PreconditionViolated("dilation factor must be positive");
  auto v = values_;
  for (auto& x : v) x *= factor;
  return IntSet(std::move(v));
}

IntSet IntSet::negated() const {
  std::vector<std::int64_t> v(values_.rbegin(), values_.rend());
  for (auto& x : v) x = -x;
  return IntSet(std::move(v));
}

DenseBits DenseBits::of(const IntSet& s) {
  DenseBits bits;
  if (s.empty()) return bits;
  bits.offset = s.min();
  bits.width = static_cast<std::size_t>(s.max() - s.min() + 1);
  bits.words.assign((bits.width + 63) / 64, 0);
  for (auto x : s) {
    auto i = static_cast<std::size_t>(x - bits.offset);
    bits.words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return bits;
}

bool DenseBits::test(std::int64_t x) const {
  if (x < offset || x >= offset + static_cast<std::int64_t>(width)) return false;
  auto i = static_cast<std::size_t>(x - offset);
  return (words[i / 64] >> (i % 64)) & 1U;
}

std::size_t DenseBits::count() const {
  std::size_t c = 0;
  for (auto w : words) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

ArithProgression::ArithProgression(std::int64_t start, std::int64_t difference, std::int64_t count)
    : start_(start), difference_(difference), count_(count) {
  if (difference < 1) throw PreconditionViolated("progression difference must be >= 1");
  if (count < 1) throw PreconditionViolated("progression count must be >= 1");
}

bool ArithProgression::contains(std::int64_t x) const {
  if (x < start_ || x > last()) return false;
  return (x - start_) % difference_ == 0;
}

bool ArithProgression::is_centred() const {
  if (count_ % 2 == 0) return false;
  return start_ == -((count_ - 1) / 2) * difference_;
}

IntSet ArithProgression::terms() const {
  std::vector<std::int64_t> v(static_cast<std::size_t>(count_));
  for (std::int64_t k = 0; k < count_; ++k) v[static_cast<std::size_t>(k)] = start_ + k * difference_;
  return IntSet(std::move(v));
}

std::size_t ArithProgression::intersection_size(const IntSet& s) const {
  auto lo = std::lower_bound(s.begin(), s.end(), start_);
  auto hi = std::upper_bound(s.begin(), s.end(), last());
  return static_cast<std::size_t>(std::count_if(lo, hi, [&](std::int64_t x) { return (x - start_) % difference_ == 0; }));
}

std::int64_t NormalizationMap::apply(Side side, std::int64_t x) const {
  return (x - (side == Side::a ? shift_a : shift_b)) / scale;
}

std::int64_t NormalizationMap::invert(Side side, std::int64_t y) const {
  return y * scale + (side == Side::a ? shift_a : shift_b);
}

IntSet NormalizationMap::apply(Side side, const IntSet& s) const {
  std::vector<std::int64_t> v;
  v.reserve(s.size());
  for (auto x : s) v.push_back(apply(side, x));
  return IntSet(std::move(v));
}

IntSet NormalizationMap::invert(Side side, const IntSet& s) const {
  std::vector<std::int64_t> v;
  v.reserve(s.size());
  for (auto y : s) v.push_back(invert(side, y));
  return IntSet(std::move(v));
}

std::int64_t offset_gcd(const IntSet& s) {
  std::int64_t g = 0;
  if (s.empty()) return g;
  for (auto x : s) g = std::gcd(g, x - s.min());
  return g;
}

NormalizedPair normalize_pair(const IntSet& a, const IntSet& b) {
  if (a.empty() || b.empty()) throw EmptyInput("normalize_pair: empty set");
  const std::int64_t g = std::gcd(offset_gcd(a), offset_gcd(b));
  if (g == 0) throw DegenerateSet("normalize_pair: both sets are single points, gcd undefined");
  NormalizedPair out;
  out.map = NormalizationMap{a.min(), b.min(), g};
  out.a = out.map.apply(Side::a, a);
  out.b = out.map.apply(Side::b, b);
  out.ell = std::max(out.a.max(), out.b.max());
  return out;
}

std::int64_t rep_function(const IntSet& a, const IntSet& b, std::int64_t x) {
  const IntSet& small = a.size() <= b.size() ? a : b;
  const IntSet& large = a.size() <= b.size() ? b : a;
  std::int64_t count = 0;
  for (auto v : small) count += large.contains(x - v) ? 1 : 0;
  return count;
}

ArithProgression denormalize_ap(const ArithProgression& p, const NormalizationMap& map, Side side) {
  return ArithProgression(map.invert(side, p.start()), p.difference() * map.scale, p.count());
}

}  // namespace freiman
