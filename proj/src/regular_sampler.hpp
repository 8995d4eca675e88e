#pragma once

// Seeded (K, s)-regular relation sampler shared by the public API and the
// lab's mask kernels, so that both produce identical relations for one seed.

#include "freiman/pair_relation.hpp"
#include "freiman/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <boost/random/taus88.hpp>
#include <vector>

namespace freiman::detail {

struct SamplerScratch {
  std::vector<PairRelation::IndexPair> removed;
  std::vector<std::uint32_t> col_defect;
  /// Per sum index: representations left in Gamma.
  std::vector<std::int64_t> remaining;
};

/// Smallest integer count meeting r >= k, at least 1 (sums outside the support never count).
inline std::int64_t popular_cutoff(const Rational& k) { return std::max<std::int64_t>(1, ceil(k)); }

/// Ctx provides rows(), cols(), sum_range(), sum_index(i, j), rep(x) and
/// partner(i, x) (column index with sum_index(i, j) == x, or -1). Sum indices
/// must be ordered like the sums they stand for.
template <class Ctx>
void sample_excluded(const Ctx& ctx, const Rational& k, std::int64_t s, std::uint64_t seed, SamplerScratch& sc) {
  const std::uint32_t rows = ctx.rows();
  const std::uint32_t cols = ctx.cols();
  sc.removed.clear();
  sc.col_defect.assign(cols, 0);
  if (s > 0 && cols > 0) {
    // taus88 keeps three words of state, so reseeding per sample stays cheap.
    const std::uint32_t words[3] = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                    static_cast<std::uint32_t>((seed ^ (seed >> 17)) * 0x9E3779B9U)};
    const std::uint32_t* first = words;
    boost::random::taus88 rng;
    rng.seed(first, words + 3);
    const std::int64_t max_attempts = 4 * s + 8;
    for (std::uint32_t i = 0; i < rows; ++i) {
      const std::size_t row_begin = sc.removed.size();
      std::int64_t taken = 0;
      for (std::int64_t attempt = 0; attempt < max_attempts && taken < s; ++attempt) {
        const auto j = static_cast<std::uint32_t>(rng() % cols);
        if (sc.col_defect[j] >= s) continue;
        bool seen = false;
        for (std::size_t q = row_begin; q < sc.removed.size(); ++q) seen = seen || sc.removed[q].second == j;
        if (seen) continue;
        sc.removed.emplace_back(i, j);
        ++sc.col_defect[j];
        ++taken;
      }
    }
  }
  const std::size_t range = ctx.sum_range();
  sc.remaining.assign(range, 0);
  for (std::size_t x = 0; x < range; ++x) sc.remaining[x] = ctx.rep(x);
  for (auto [i, j] : sc.removed) --sc.remaining[ctx.sum_index(i, j)];

  const std::int64_t cutoff = popular_cutoff(k);
  bool restored = false;
  for (std::size_t x = 0; x < range; ++x) {
    if (sc.remaining[x] != 0 || ctx.rep(x) < cutoff) continue;
    for (std::uint32_t i = 0; i < rows; ++i) {
      const std::int64_t j = ctx.partner(i, x);
      if (j < 0) continue;
      auto it = std::find(sc.removed.begin(), sc.removed.end(),
                          PairRelation::IndexPair{i, static_cast<std::uint32_t>(j)});
      if (it != sc.removed.end()) {
        it->first = rows;  // tombstone
        restored = true;
      }
      sc.remaining[x] = 1;
      break;
    }
  }
  if (restored) {
    std::erase_if(sc.removed, [rows](const PairRelation::IndexPair& p) { return p.first == rows; });
  }
}

}  // namespace freiman::detail
