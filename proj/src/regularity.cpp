#include "freiman/regularity.hpp"

#include "freiman/errors.hpp"
#include "freiman/sumset.hpp"

#include <algorithm>
#include <numeric>

namespace freiman {

namespace {

RegularityResult check_defects(const PairRelation& gamma, std::int64_t s) {
  for (std::size_t i = 0; i < gamma.rows(); ++i) {
    if (gamma.row_defect(i) > s) {
      return {false, {RegularityWitness::Kind::row, static_cast<std::int64_t>(i), gamma.row_defect(i)}};
    }
  }
  for (std::size_t j = 0; j < gamma.cols(); ++j) {
    if (gamma.col_defect(j) > s) {
      return {false, {RegularityWitness::Kind::column, static_cast<std::int64_t>(j), gamma.col_defect(j)}};
    }
  }
  return {};
}

RegularityResult check_popular_covered(const RepHistogram& hist, const IntSet& covered, const Rational& k) {
  for (const auto& e : hist.entries()) {
    if (at_least(e.r, k) && !covered.contains(e.x)) {
      return {false, {RegularityWitness::Kind::sum, e.x, e.r}};
    }
  }
  return {};
}

void require_shape(const IntSet& a, const IntSet& b, const PairRelation& gamma) {
  if (gamma.rows() != a.size() || gamma.cols() != b.size()) throw IndexMismatch("relation shape mismatch");
}

// Indices of the larger side ranked for removal: largest defect first, then larger value.
void trim_to(std::vector<std::uint32_t>& kept, const std::vector<std::uint32_t>& defects, std::size_t target) {
  if (kept.size() <= target) return;
  std::vector<std::size_t> order(kept.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (defects[x] != defects[y]) return defects[x] > defects[y];
    return kept[x] > kept[y];
  });
  std::vector<bool> drop(kept.size(), false);
  for (std::size_t r = 0; r < kept.size() - target; ++r) drop[order[r]] = true;
  std::vector<std::uint32_t> out;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (!drop[k]) out.push_back(kept[k]);
  }
  kept = std::move(out);
}

IntSet pick(const IntSet& s, const std::vector<std::uint32_t>& idx) {
  std::vector<std::int64_t> v;
  v.reserve(idx.size());
  for (auto i : idx) v.push_back(s[i]);
  return IntSet(std::move(v));
}

}  // namespace

RegularityResult check_regular(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& k,
                               std::int64_t s) {
  require_shape(a, b, gamma);
  if (auto r = check_defects(gamma, s); !r.regular) return r;
  if (a.empty() || b.empty()) return {};
  return check_popular_covered(rep_histogram(a, b), restricted_sumset(a, b, gamma), k);
}

RegularityResult check_regular_difference(const IntSet& a, const PairRelation& gamma, const Rational& k,
                                          std::int64_t s) {
  require_shape(a, a, gamma);
  if (auto r = check_defects(gamma, s); !r.regular) return r;
  if (a.empty()) return {};
  return check_popular_covered(rep_histogram(a, a.negated()), restricted_difference(a, gamma), k);
}

RegularityResult check_regular_cyclic(const IntSet& s_set, const IntSet& t_set, const PairRelation& gamma,
                                      std::int64_t m, const Rational& k, std::int64_t s) {
  require_shape(s_set, t_set, gamma);
  if (auto r = check_defects(gamma, s); !r.regular) return r;
  if (s_set.empty() || t_set.empty()) return {};
  return check_popular_covered(cyclic_rep_histogram(s_set, t_set, m),
                               cyclic_restricted_sumset(s_set, t_set, gamma, m), k);
}

DenseCore dense_core_unchecked(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& eps) {
  require_shape(a, b, gamma);
  if (a.size() != b.size()) throw PreconditionViolated("dense core requires |A| = |B|");
  DenseCore core;
  const auto n = static_cast<std::int64_t>(a.size());
  core.threshold = floor_sqrt_times(eps, n);
  std::vector<std::uint32_t> rows;
  std::vector<std::uint32_t> cols;
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    if (gamma.row_defect(i) <= core.threshold) rows.push_back(i);
  }
  for (std::uint32_t j = 0; j < b.size(); ++j) {
    if (gamma.col_defect(j) <= core.threshold) cols.push_back(j);
  }
  if (rows.size() != cols.size()) {
    auto inner = gamma.restricted(rows, cols);
    std::vector<std::uint32_t> defects;
    if (rows.size() > cols.size()) {
      for (std::size_t i = 0; i < rows.size(); ++i) defects.push_back(inner.row_defect(i));
      trim_to(rows, defects, cols.size());
    } else {
      for (std::size_t j = 0; j < cols.size(); ++j) defects.push_back(inner.col_defect(j));
      trim_to(cols, defects, rows.size());
    }
  }
  core.a = pick(a, rows);
  core.b = pick(b, cols);
  core.a_indices = std::move(rows);
  core.b_indices = std::move(cols);
  return core;
}

DenseCore extract_dense_core(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& eps) {
  require_shape(a, b, gamma);
  if (a.size() != b.size()) throw PreconditionViolated("extract_dense_core requires |A| = |B|");
  if (eps < 0) throw PreconditionViolated("extract_dense_core requires eps >= 0");
  if (gamma.density_defect() > eps) {
    throw HypothesisViolated("extract_dense_core: |Gamma| < (1 - eps)|A||B| (density defect " +
                             to_string(gamma.density_defect()) + " > " + to_string(eps) + ")");
  }
  return dense_core_unchecked(a, b, gamma, eps);
}

PairRelation augment_relation(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& k) {
  require_shape(a, b, gamma);
  if (a.empty() || b.empty()) return gamma;
  auto hist = rep_histogram(a, b);
  auto popular = [&](std::uint32_t i, std::uint32_t j) { return at_least(hist.at(a[i] + b[j]), k); };
  if (gamma.encoding() == PairRelation::Encoding::complement) {
    std::vector<PairRelation::IndexPair> still_missing;
    for (auto [i, j] : gamma.stored_pairs()) {
      if (!popular(i, j)) still_missing.emplace_back(i, j);
    }
    return PairRelation::excluding(a.size(), b.size(), std::move(still_missing));
  }
  return PairRelation::from_predicate(a.size(), b.size(), [&](std::uint32_t i, std::uint32_t j) {
    return gamma.contains(i, j) || popular(i, j);
  });
}

ModularScene reduce_mod(const IntSet& a, const IntSet& b, const PairRelation& gamma, std::int64_t ell) {
  require_shape(a, b, gamma);
  if (ell < 1) throw PreconditionViolated("reduce_mod: ell must be positive");
  if (a.empty() || b.empty()) throw PreconditionViolated("reduce_mod: empty set");
  if (a.min() != 0 || a.max() != ell) throw PreconditionViolated("reduce_mod: need 0 and ell in A, A within {0..ell}");
  if (b.min() != 0 || b.max() > ell) throw PreconditionViolated("reduce_mod: need 0 in B, B within {0..ell}");

  ModularScene scene;
  scene.modulus = ell;
  scene.a_reduced = reduce_residues(a, ell);
  scene.b_reduced = reduce_residues(b, ell);
  const std::size_t rows = scene.a_reduced.size();
  const std::size_t cols = scene.b_reduced.size();
  std::vector<std::uint8_t> hit(rows * cols, 0);
  gamma.for_each_member([&](std::uint32_t i, std::uint32_t j) {
    auto ri = *scene.a_reduced.index_of(a[i] % ell);
    auto rj = *scene.b_reduced.index_of(b[j] % ell);
    hit[ri * cols + rj] = 1;
  });
  scene.gamma_reduced =
      PairRelation::from_predicate(rows, cols, [&](std::uint32_t i, std::uint32_t j) { return hit[i * cols + j] != 0; });
  scene.stabilizer = stabilizer(cyclic_sumset(scene.a_reduced, scene.b_reduced, ell), ell);
  scene.n = static_cast<std::int64_t>(a.size());
  scene.s = gamma.max_defect();
  scene.restricted_size = static_cast<std::int64_t>(restricted_sumset(a, b, gamma).size());
  scene.reduced_restricted_size = static_cast<std::int64_t>(
      cyclic_restricted_sumset(scene.a_reduced, scene.b_reduced, scene.gamma_reduced, ell).size());
  return scene;
}

namespace {

bool invariant_under_shift(const IntSet& s, std::int64_t h, std::int64_t m) {
  for (auto x : s) {
    if (!s.contains((x + h) % m)) return false;
  }
  return true;
}

void require_cyclic_set(const IntSet& s, std::int64_t m) {
  if (m < 1) throw PreconditionViolated("modulus must be positive");
  if (s.empty()) throw EmptySet("stabilizer of an empty set");
  if (s.min() < 0 || s.max() >= m) throw PreconditionViolated("residues must lie in [0, m)");
}

}  // namespace

IntSet stabilizer(const IntSet& s, std::int64_t m) {
  require_cyclic_set(s, m);
  // Subgroups of Z/mZ are dZ/mZ for d | m; the period is the one with the smallest such d.
  for (std::int64_t d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    if (invariant_under_shift(s, d, m)) {
      std::vector<std::int64_t> h;
      for (std::int64_t x = 0; x < m; x += d) h.push_back(x);
      return IntSet(std::move(h));
    }
  }
  return IntSet{0};
}

IntSet stabilizer_by_shifts(const IntSet& s, std::int64_t m) {
  require_cyclic_set(s, m);
  std::vector<std::int64_t> h;
  for (std::int64_t x = 0; x < m; ++x) {
    if (invariant_under_shift(s, x, m)) h.push_back(x);
  }
  return IntSet(std::move(h));
}

IntSet coset_closure(const IntSet& s, const IntSet& h, std::int64_t m) {
  std::vector<std::int64_t> out;
  for (auto x : s) {
    for (auto y : h) out.push_back((x + y) % m);
  }
  return IntSet::from_unsorted(std::move(out));
}

}  // namespace freiman
