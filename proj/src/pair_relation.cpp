#include "freiman/pair_relation.hpp"

#include "freiman/errors.hpp"

#include <algorithm>

namespace freiman {

PairRelation::PairRelation(std::size_t rows, std::size_t cols, Encoding enc, std::vector<IndexPair> pairs)
    : rows_(rows), cols_(cols), encoding_(enc), pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  for (auto [i, j] : pairs_) {
    if (i >= rows_ || j >= cols_) throw IndexMismatch("pair index outside relation domain");
  }
  if (encoding_ == Encoding::complement) {
    row_defect_.assign(rows_, 0);
    col_defect_.assign(cols_, 0);
    for (auto [i, j] : pairs_) {
      ++row_defect_[i];
      ++col_defect_[j];
    }
  } else {
    row_defect_.assign(rows_, static_cast<std::uint32_t>(cols_));
    col_defect_.assign(cols_, static_cast<std::uint32_t>(rows_));
    for (auto [i, j] : pairs_) {
      --row_defect_[i];
      --col_defect_[j];
    }
  }
}

PairRelation PairRelation::full(std::size_t rows, std::size_t cols) {
  return PairRelation(rows, cols, Encoding::complement, {});
}

PairRelation PairRelation::empty(std::size_t rows, std::size_t cols) {
  return PairRelation(rows, cols, Encoding::explicit_pairs, {});
}

PairRelation PairRelation::excluding(std::size_t rows, std::size_t cols, std::vector<IndexPair> excluded) {
  return PairRelation(rows, cols, Encoding::complement, std::move(excluded));
}

PairRelation PairRelation::including(std::size_t rows, std::size_t cols, std::vector<IndexPair> included) {
  return PairRelation(rows, cols, Encoding::explicit_pairs, std::move(included));
}

bool PairRelation::contains(std::size_t i, std::size_t j) const {
  IndexPair key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
  bool stored = std::binary_search(pairs_.begin(), pairs_.end(), key);
  return encoding_ == Encoding::complement ? !stored : stored;
}

bool PairRelation::is_full() const { return missing() == 0; }

std::uint64_t PairRelation::size() const {
  const std::uint64_t total = static_cast<std::uint64_t>(rows_) * cols_;
  return encoding_ == Encoding::complement ? total - pairs_.size() : pairs_.size();
}

std::uint32_t PairRelation::max_defect() const {
  std::uint32_t m = 0;
  for (auto d : row_defect_) m = std::max(m, d);
  for (auto d : col_defect_) m = std::max(m, d);
  return m;
}

Rational PairRelation::density_defect() const {
  const auto total = static_cast<std::int64_t>(rows_ * cols_);
  if (total == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(missing()), total);
}

std::vector<PairRelation::IndexPair> PairRelation::excluded_pairs() const {
  if (encoding_ == Encoding::complement) return pairs_;
  std::vector<IndexPair> out;
  std::size_t k = 0;
  for (std::uint32_t i = 0; i < rows_; ++i) {
    for (std::uint32_t j = 0; j < cols_; ++j) {
      if (k < pairs_.size() && pairs_[k] == IndexPair{i, j}) {
        ++k;
      } else {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

std::vector<PairRelation::IndexPair> PairRelation::included_pairs() const {
  if (encoding_ == Encoding::explicit_pairs) return pairs_;
  std::vector<IndexPair> out;
  for_each_member([&](std::uint32_t i, std::uint32_t j) { out.emplace_back(i, j); });
  return out;
}

PairRelation PairRelation::with_columns_permuted(const std::vector<std::uint32_t>& perm) const {
  if (perm.size() != cols_) throw IndexMismatch("column permutation has wrong length");
  auto pairs = pairs_;
  for (auto& p : pairs) p.second = perm[p.second];
  return PairRelation(rows_, cols_, encoding_, std::move(pairs));
}

PairRelation PairRelation::united(const PairRelation& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw IndexMismatch("united: relation shapes differ");
  std::vector<IndexPair> out;
  if (encoding_ == Encoding::complement) {
    for (auto [i, j] : pairs_) {
      if (!other.contains(i, j)) out.emplace_back(i, j);
    }
    return excluding(rows_, cols_, std::move(out));
  }
  if (other.encoding_ == Encoding::complement) return other.united(*this);
  std::set_union(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(), std::back_inserter(out));
  return including(rows_, cols_, std::move(out));
}

PairRelation PairRelation::restricted(const std::vector<std::uint32_t>& kept_rows,
                                      const std::vector<std::uint32_t>& kept_cols) const {
  constexpr auto kDropped = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> row_map(rows_, kDropped);
  std::vector<std::uint32_t> col_map(cols_, kDropped);
  for (std::uint32_t k = 0; k < kept_rows.size(); ++k) row_map.at(kept_rows[k]) = k;
  for (std::uint32_t k = 0; k < kept_cols.size(); ++k) col_map.at(kept_cols[k]) = k;
  std::vector<IndexPair> out;
  for (auto [i, j] : pairs_) {
    if (row_map[i] != kDropped && col_map[j] != kDropped) out.emplace_back(row_map[i], col_map[j]);
  }
  return PairRelation(kept_rows.size(), kept_cols.size(), encoding_, std::move(out));
}

bool operator==(const PairRelation& x, const PairRelation& y) {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
  if (x.encoding_ == y.encoding_) return x.pairs_ == y.pairs_;
  return x.excluded_pairs() == y.excluded_pairs();
}

}  // namespace freiman
