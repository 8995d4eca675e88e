#pragma once

#include "freiman/int_set.hpp"
#include "freiman/pair_relation.hpp"
#include "freiman/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace freiman {

/// Representation counts r_{A+B}(x) on the support of A + B, sorted by x.
class RepHistogram {
 public:
  struct Entry {
    std::int64_t x;
    std::uint32_t r;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  RepHistogram() = default;
  explicit RepHistogram(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::span<const Entry> entries() const& { return entries_; }
  /// By value on temporaries, so range-for over rep_histogram(...).entries() stays valid.
  std::vector<Entry> entries() && { return std::move(entries_); }
  std::size_t support_size() const { return entries_.size(); }
  std::uint32_t at(std::int64_t x) const;
  std::optional<std::size_t> position(std::int64_t x) const;
  std::uint64_t total() const;
  IntSet support() const;

 private:
  std::vector<Entry> entries_;
};

struct SumsetStats {
  IntSet sumset;
  RepHistogram histogram;
  /// |A + B| / |A|.
  double doubling = 0.0;
};

/// Throws EmptyInput for empty A or B.
RepHistogram rep_histogram(const IntSet& a, const IntSet& b);
SumsetStats sumset_stats(const IntSet& a, const IntSet& b);

/// A + B. Throws EmptyInput.
IntSet complete_sumset(const IntSet& a, const IntSet& b);

/// {a_i + b_j : (i, j) in Gamma}. Throws IndexMismatch on shape mismatch.
IntSet restricted_sumset(const IntSet& a, const IntSet& b, const PairRelation& gamma);

/// {a_i - a_j : (i, j) in Gamma} for Gamma over A x A.
IntSet restricted_difference(const IntSet& a, const PairRelation& gamma);

/// Re-indexes Gamma over A x A as a relation over A x (-A) so that
/// A -_Gamma A equals A +_Gamma' (-A).
PairRelation as_sum_relation_with_negation(const PairRelation& gamma);

struct TripleCount {
  std::int64_t count = 0;
  /// count / |A|^2.
  Rational c;
};

/// #{(a, a') in A x A : a + a' in A} and C(A). Throws EmptyInput.
TripleCount triple_count(const IntSet& a);

/// sum over x of min(r_{A+B}(x), t). Throws PreconditionViolated for t < 0.
std::int64_t pollard_partial_sum(const IntSet& a, const IntSet& b, std::int64_t t);
std::int64_t pollard_partial_sum(const RepHistogram& h, std::int64_t t);

/// #{x in A + B : r_{A+B}(x) >= threshold}.
std::int64_t popular_support(const IntSet& a, const IntSet& b, const Rational& threshold);

// Cyclic group Z/mZ. Sets hold residues in [0, m).

/// Reduces every element mod m (result in [0, m)).
IntSet reduce_residues(const IntSet& s, std::int64_t m);
IntSet cyclic_sumset(const IntSet& s, const IntSet& t, std::int64_t m);
RepHistogram cyclic_rep_histogram(const IntSet& s, const IntSet& t, std::int64_t m);
IntSet cyclic_restricted_sumset(const IntSet& s, const IntSet& t, const PairRelation& gamma, std::int64_t m);
/// -S mod m, together with the column permutation j -> index of -s_j in -S.
struct CyclicNegation {
  IntSet set;
  std::vector<std::uint32_t> index_map;
};
CyclicNegation cyclic_negation(const IntSet& s, std::int64_t m);

}  // namespace freiman
