#pragma once

#include "freiman/int_set.hpp"
#include "freiman/pair_relation.hpp"
#include "freiman/rational.hpp"

#include <cstdint>
#include <vector>

namespace freiman {

/// Popularity threshold K (compared with >=) and defect bound s.
struct RegularityParams {
  Rational k{2};
  std::int64_t s = 0;
};

struct RegularityWitness {
  enum class Kind { none, row, column, sum };
  Kind kind = Kind::none;
  /// Row or column index, or the uncovered sum x.
  std::int64_t value = 0;
  /// Defect of the offending row/column, or r(x) for an uncovered sum.
  std::int64_t measure = 0;
};

struct RegularityResult {
  bool regular = true;
  RegularityWitness witness;
};

/// (K, s)-regularity of A +_Gamma B: every row/column defect <= s and every x
/// with r_{A+B}(x) >= K lies in A +_Gamma B. The witness is the first failure
/// found, checking rows, then columns, then sums in increasing order.
RegularityResult check_regular(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& k,
                               std::int64_t s);
/// Same for A -_Gamma A with Gamma over A x A.
RegularityResult check_regular_difference(const IntSet& a, const PairRelation& gamma, const Rational& k,
                                          std::int64_t s);
/// Same in Z/mZ for residue sets S, T.
RegularityResult check_regular_cyclic(const IntSet& s_set, const IntSet& t_set, const PairRelation& gamma,
                                      std::int64_t m, const Rational& k, std::int64_t s);

struct DenseCore {
  IntSet a;
  IntSet b;
  std::vector<std::uint32_t> a_indices;
  std::vector<std::uint32_t> b_indices;
  /// floor(eps^{1/2} n): the admitted defect per element.
  std::int64_t threshold = 0;
};

/// Equal-size cores A' of A and B' of B whose elements miss at most
/// floor(eps^{1/2} n) partners on the other side. Requires |A| = |B| and
/// |Gamma| >= (1 - eps)n^2, else throws PreconditionViolated / HypothesisViolated.
DenseCore extract_dense_core(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& eps);

/// The same construction without the density check; used by the recovery
/// pipelines, which report rather than reject.
DenseCore dense_core_unchecked(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& eps);

/// Gamma union {(a, b) : r_{A+B}(a + b) >= K}.
PairRelation augment_relation(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& k);

/// Images of A, B, Gamma in Z/ell Z together with the Kneser period of the reduced sumset.
struct ModularScene {
  std::int64_t modulus = 0;
  IntSet a_reduced;
  IntSet b_reduced;
  PairRelation gamma_reduced;
  /// H = {h : (A~ + B~) + h = A~ + B~}.
  IntSet stabilizer;
  std::int64_t n = 0;
  /// Largest row/column defect of Gamma.
  std::int64_t s = 0;
  std::int64_t restricted_size = 0;
  std::int64_t reduced_restricted_size = 0;

  /// |A +_G B| >= |A~ +_G~ B~| + n - 2s.
  bool counting_inequality_holds() const { return restricted_size >= reduced_restricted_size + n - 2 * s; }
};

/// Requires ell >= 1, A, B within {0..ell}, 0 and ell in A, 0 in B; else PreconditionViolated.
ModularScene reduce_mod(const IntSet& a, const IntSet& b, const PairRelation& gamma, std::int64_t ell);

/// Period of S in Z/mZ via the divisor-generated subgroups. Throws EmptySet.
IntSet stabilizer(const IntSet& s, std::int64_t m);
/// Period of S by testing every shift; reference path for stabilizer().
IntSet stabilizer_by_shifts(const IntSet& s, std::int64_t m);

/// S + H mod m.
IntSet coset_closure(const IntSet& s, const IntSet& h, std::int64_t m);

}  // namespace freiman
