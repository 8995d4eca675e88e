#include "freiman/sumset.hpp"

#include "freiman/errors.hpp"

#include <algorithm>
#include <limits>

namespace freiman {

namespace {

// Windows wider than this fall back to sorting pair sums.
constexpr std::int64_t kDenseWindowLimit = std::int64_t{1} << 26;

void require_nonempty(const IntSet& a, const IntSet& b, const char* what) {
  if (a.empty() || b.empty()) throw EmptyInput(std::string(what) + ": empty input set");
}

void require_shape(const IntSet& a, const IntSet& b, const PairRelation& gamma) {
  if (gamma.rows() != a.size() || gamma.cols() != b.size()) {
    throw IndexMismatch("relation shape " + std::to_string(gamma.rows()) + "x" + std::to_string(gamma.cols()) +
                        " does not match sets of sizes " + std::to_string(a.size()) + " and " +
                        std::to_string(b.size()));
  }
}

std::int64_t window_width(const IntSet& a, const IntSet& b) {
  return (a.max() - a.min()) + (b.max() - b.min()) + 1;
}

// dst |= src << shift, both over words of the same window.
void or_shifted(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src, std::size_t shift) {
  const std::size_t word_shift = shift / 64;
  const unsigned bit_shift = static_cast<unsigned>(shift % 64);
  for (std::size_t k = 0; k < src.size(); ++k) {
    const std::size_t w = k + word_shift;
    if (w >= dst.size()) break;
    dst[w] |= src[k] << bit_shift;
    if (bit_shift != 0 && w + 1 < dst.size()) dst[w + 1] |= src[k] >> (64 - bit_shift);
  }
}

IntSet set_from_words(const std::vector<std::uint64_t>& words, std::int64_t offset) {
  std::vector<std::int64_t> out;
  for (std::size_t w = 0; w < words.size(); ++w) {
    auto bits = words[w];
    while (bits != 0) {
      const int b = __builtin_ctzll(bits);
      out.push_back(offset + static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(b)));
      bits &= bits - 1;
    }
  }
  return IntSet(std::move(out));
}

std::vector<RepHistogram::Entry> sparse_histogram(std::vector<std::int64_t> sums) {
  std::sort(sums.begin(), sums.end());
  std::vector<RepHistogram::Entry> entries;
  for (auto x : sums) {
    if (!entries.empty() && entries.back().x == x) {
      ++entries.back().r;
    } else {
      entries.push_back({x, 1});
    }
  }
  return entries;
}

}  // namespace

std::uint32_t RepHistogram::at(std::int64_t x) const {
  auto p = position(x);
  return p ? entries_[*p].r : 0;
}

std::optional<std::size_t> RepHistogram::position(std::int64_t x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const Entry& e, std::int64_t v) { return e.x < v; });
  if (it == entries_.end() || it->x != x) return std::nullopt;
  return static_cast<std::size_t>(it - entries_.begin());
}

std::uint64_t RepHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& e : entries_) t += e.r;
  return t;
}

IntSet RepHistogram::support() const {
  std::vector<std::int64_t> xs;
  xs.reserve(entries_.size());
  for (const auto& e : entries_) xs.push_back(e.x);
  return IntSet(std::move(xs));
}

RepHistogram rep_histogram(const IntSet& a, const IntSet& b) {
  require_nonempty(a, b, "rep_histogram");
  if (std::min(a.size(), b.size()) > std::numeric_limits<std::uint32_t>::max()) {
    throw CounterOverflow("rep_histogram: representation counts exceed 32 bits");
  }
  const std::int64_t width = window_width(a, b);
  if (width > kDenseWindowLimit) {
    std::vector<std::int64_t> sums;
    sums.reserve(a.size() * b.size());
    for (auto x : a) {
      for (auto y : b) sums.push_back(x + y);
    }
    return RepHistogram(sparse_histogram(std::move(sums)));
  }
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(width), 0);
  const auto b_min = b.min();
  std::vector<std::uint32_t> b_offsets;
  b_offsets.reserve(b.size());
  for (auto y : b) b_offsets.push_back(static_cast<std::uint32_t>(y - b_min));
  for (auto x : a) {
    std::uint32_t* row = counts.data() + (x - a.min());
    for (auto off : b_offsets) ++row[off];
  }
  std::vector<RepHistogram::Entry> entries;
  const std::int64_t offset = a.min() + b.min();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] != 0) entries.push_back({offset + static_cast<std::int64_t>(k), counts[k]});
  }
  return RepHistogram(std::move(entries));
}

SumsetStats sumset_stats(const IntSet& a, const IntSet& b) {
  SumsetStats stats;
  stats.histogram = rep_histogram(a, b);
  stats.sumset = stats.histogram.support();
  stats.doubling = static_cast<double>(stats.sumset.size()) / static_cast<double>(a.size());
  return stats;
}

IntSet complete_sumset(const IntSet& a, const IntSet& b) {
  require_nonempty(a, b, "complete_sumset");
  const std::int64_t width = window_width(a, b);
  if (width > kDenseWindowLimit) return rep_histogram(a, b).support();
  const IntSet& outer = a.size() <= b.size() ? a : b;
  const IntSet& inner = a.size() <= b.size() ? b : a;
  auto inner_bits = DenseBits::of(inner);
  std::vector<std::uint64_t> acc((static_cast<std::size_t>(width) + 63) / 64, 0);
  inner_bits.words.resize(acc.size(), 0);
  for (auto x : outer) or_shifted(acc, inner_bits.words, static_cast<std::size_t>(x - outer.min()));
  return set_from_words(acc, a.min() + b.min());
}

IntSet restricted_sumset(const IntSet& a, const IntSet& b, const PairRelation& gamma) {
  require_shape(a, b, gamma);
  if (gamma.size() == 0) return IntSet{};
  if (gamma.is_full()) return complete_sumset(a, b);
  if (gamma.encoding() == PairRelation::Encoding::explicit_pairs) {
    std::vector<std::int64_t> sums;
    sums.reserve(gamma.stored_pairs().size());
    for (auto [i, j] : gamma.stored_pairs()) sums.push_back(a[i] + b[j]);
    return IntSet::from_unsorted(std::move(sums));
  }
  // Complement encoding: a sum survives iff some representation is not excluded.
  auto hist = rep_histogram(a, b);
  std::vector<std::uint32_t> remaining;
  remaining.reserve(hist.support_size());
  for (const auto& e : hist.entries()) remaining.push_back(e.r);
  for (auto [i, j] : gamma.stored_pairs()) --remaining[*hist.position(a[i] + b[j])];
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < remaining.size(); ++k) {
    if (remaining[k] > 0) out.push_back(hist.entries()[k].x);
  }
  return IntSet(std::move(out));
}

PairRelation as_sum_relation_with_negation(const PairRelation& gamma) {
  std::vector<std::uint32_t> perm(gamma.cols());
  for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = static_cast<std::uint32_t>(perm.size() - 1 - j);
  return gamma.with_columns_permuted(perm);
}

IntSet restricted_difference(const IntSet& a, const PairRelation& gamma) {
  require_shape(a, a, gamma);
  return restricted_sumset(a, a.negated(), as_sum_relation_with_negation(gamma));
}

TripleCount triple_count(const IntSet& a) {
  if (a.empty()) throw EmptyInput("triple_count: empty set");
  auto hist = rep_histogram(a, a);
  std::int64_t count = 0;
  for (const auto& e : hist.entries()) {
    if (a.contains(e.x)) count += e.r;
  }
  const auto n = static_cast<std::int64_t>(a.size());
  return {count, Rational(count, n * n)};
}

std::int64_t pollard_partial_sum(const RepHistogram& h, std::int64_t t) {
  if (t < 0) throw PreconditionViolated("pollard_partial_sum: t must be non-negative");
  std::int64_t sum = 0;
  for (const auto& e : h.entries()) sum += std::min<std::int64_t>(e.r, t);
  return sum;
}

std::int64_t pollard_partial_sum(const IntSet& a, const IntSet& b, std::int64_t t) {
  if (t < 0) throw PreconditionViolated("pollard_partial_sum: t must be non-negative");
  if (t == 0 || a.empty() || b.empty()) return 0;
  return pollard_partial_sum(rep_histogram(a, b), t);
}

std::int64_t popular_support(const IntSet& a, const IntSet& b, const Rational& threshold) {
  if (threshold <= 0) throw PreconditionViolated("popular_support: threshold must be positive");
  std::int64_t count = 0;
  for (const auto& e : rep_histogram(a, b).entries()) {
    if (at_least(e.r, threshold)) ++count;
  }
  return count;
}

IntSet reduce_residues(const IntSet& s, std::int64_t m) {
  if (m < 1) throw PreconditionViolated("modulus must be positive");
  std::vector<std::int64_t> out;
  out.reserve(s.size());
  for (auto x : s) out.push_back(((x % m) + m) % m);
  return IntSet::from_unsorted(std::move(out));
}

IntSet cyclic_sumset(const IntSet& s, const IntSet& t, std::int64_t m) {
  return reduce_residues(complete_sumset(s, t), m);
}

RepHistogram cyclic_rep_histogram(const IntSet& s, const IntSet& t, std::int64_t m) {
  require_nonempty(s, t, "cyclic_rep_histogram");
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(m), 0);
  for (const auto& e : rep_histogram(s, t).entries()) counts[static_cast<std::size_t>(((e.x % m) + m) % m)] += e.r;
  std::vector<RepHistogram::Entry> entries;
  for (std::int64_t x = 0; x < m; ++x) {
    if (counts[static_cast<std::size_t>(x)] != 0) entries.push_back({x, counts[static_cast<std::size_t>(x)]});
  }
  return RepHistogram(std::move(entries));
}

IntSet cyclic_restricted_sumset(const IntSet& s, const IntSet& t, const PairRelation& gamma, std::int64_t m) {
  return reduce_residues(restricted_sumset(s, t, gamma), m);
}

CyclicNegation cyclic_negation(const IntSet& s, std::int64_t m) {
  CyclicNegation out;
  std::vector<std::int64_t> neg;
  neg.reserve(s.size());
  for (auto x : s) neg.push_back((m - x % m) % m);
  out.set = IntSet::from_unsorted(neg);
  out.index_map.reserve(s.size());
  for (auto v : neg) out.index_map.push_back(static_cast<std::uint32_t>(*out.set.index_of(v)));
  return out;
}

}  // namespace freiman
