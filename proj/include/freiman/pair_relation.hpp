#pragma once

#include "freiman/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace freiman {

/// A relation Gamma on index pairs (i, j) of A x B.
///
/// Stored sparsely: either as the sorted list of excluded pairs (complement
/// encoding, used when Gamma is dense) or as the sorted list of included pairs.
/// Row and column defects are cached at construction.
class PairRelation {
 public:
  using IndexPair = std::pair<std::uint32_t, std::uint32_t>;
  enum class Encoding { complement, explicit_pairs };

  PairRelation() = default;

  static PairRelation full(std::size_t rows, std::size_t cols);
  static PairRelation empty(std::size_t rows, std::size_t cols);
  static PairRelation excluding(std::size_t rows, std::size_t cols, std::vector<IndexPair> excluded);
  static PairRelation including(std::size_t rows, std::size_t cols, std::vector<IndexPair> included);

  /// Evaluates pred(i, j) on every cell and keeps the shorter encoding.
  template <class Pred>
  static PairRelation from_predicate(std::size_t rows, std::size_t cols, Pred pred) {
    std::vector<IndexPair> in;
    std::vector<IndexPair> out;
    const std::size_t half = rows * cols / 2;
    bool keep_in = true;
    bool keep_out = true;
    for (std::uint32_t i = 0; i < rows; ++i) {
      for (std::uint32_t j = 0; j < cols; ++j) {
        if (pred(i, j)) {
          if (keep_in) in.emplace_back(i, j);
        } else if (keep_out) {
          out.emplace_back(i, j);
        }
      }
      if (keep_in && in.size() > half) {
        keep_in = false;
        std::vector<IndexPair>().swap(in);
      }
      if (keep_out && out.size() > half) {
        keep_out = false;
        std::vector<IndexPair>().swap(out);
      }
    }
    if (!keep_in || (keep_out && out.size() <= in.size())) return excluding(rows, cols, std::move(out));
    return including(rows, cols, std::move(in));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Encoding encoding() const { return encoding_; }
  /// Excluded pairs in complement encoding, included pairs otherwise.
  const std::vector<IndexPair>& stored_pairs() const { return pairs_; }

  bool contains(std::size_t i, std::size_t j) const;
  bool is_full() const;
  /// |Gamma|.
  std::uint64_t size() const;
  /// |A x B \ Gamma|.
  std::uint64_t missing() const { return static_cast<std::uint64_t>(rows_) * cols_ - size(); }
  std::uint32_t row_defect(std::size_t i) const { return row_defect_[i]; }
  std::uint32_t col_defect(std::size_t j) const { return col_defect_[j]; }
  std::uint32_t max_defect() const;
  /// 1 - |Gamma| / (|A||B|); 0 for an empty domain.
  Rational density_defect() const;

  std::vector<IndexPair> excluded_pairs() const;
  std::vector<IndexPair> included_pairs() const;

  template <class F>
  void for_each_member(F f) const {
    if (encoding_ == Encoding::explicit_pairs) {
      for (auto [i, j] : pairs_) f(i, j);
      return;
    }
    std::size_t k = 0;
    for (std::uint32_t i = 0; i < rows_; ++i) {
      for (std::uint32_t j = 0; j < cols_; ++j) {
        if (k < pairs_.size() && pairs_[k] == IndexPair{i, j}) {
          ++k;
          continue;
        }
        f(i, j);
      }
    }
  }

  /// Relation with column index j replaced by perm[j]; perm must be a permutation.
  PairRelation with_columns_permuted(const std::vector<std::uint32_t>& perm) const;
  /// Gamma union other (same shape).
  PairRelation united(const PairRelation& other) const;
  /// Relation restricted to the kept rows and columns, reindexed in order.
  PairRelation restricted(const std::vector<std::uint32_t>& kept_rows, const std::vector<std::uint32_t>& kept_cols) const;

  friend bool operator==(const PairRelation& x, const PairRelation& y);

 private:
  PairRelation(std::size_t rows, std::size_t cols, Encoding enc, std::vector<IndexPair> pairs);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Encoding encoding_ = Encoding::complement;
  std::vector<IndexPair> pairs_;
  std::vector<std::uint32_t> row_defect_;
  std::vector<std::uint32_t> col_defect_;
};

}  // namespace freiman
