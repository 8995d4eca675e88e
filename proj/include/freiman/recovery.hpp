#pragma once

#include "freiman/int_set.hpp"
#include "freiman/pair_relation.hpp"
#include "freiman/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace freiman {

enum class Comparison { less, less_equal, greater_equal, equal };

/// One evaluated inequality: measured <cmp> bound.
struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  Comparison cmp = Comparison::less_equal;
  bool holds = false;
};

struct Quantity {
  std::string name;
  double value = 0.0;
};

/// Output of a structure-recovery pipeline. Certification flags are the
/// conjunction of the listed checks; every input to them is recorded.
struct RecoveryReport {
  std::string kind;
  Rational epsilon;
  ArithProgression p{0, 1, 1};
  std::optional<ArithProgression> q;
  std::int64_t coverage_a = 0;
  std::optional<std::int64_t> coverage_b;
  bool hypothesis_certified = false;
  bool conclusion_certified = false;
  std::vector<Check> hypothesis;
  std::vector<Check> conclusion;
  std::vector<Quantity> diagnostics;
  /// Reports of sub-pipelines (positive / negative parts).
  std::vector<RecoveryReport> parts;

  std::optional<double> diagnostic(const std::string& name) const;
};

/// Two progressions with one common difference covering dense cores of A and B.
/// Requires |A| = |B| >= 1 and eps > 0 (PreconditionViolated).
RecoveryReport recover_additive(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& eps);

/// One progression covering a dense core of A, judged against |A -_Gamma A|.
RecoveryReport recover_difference(const IntSet& a, const PairRelation& gamma, const Rational& eps);

/// {(a, b) : r_{A+B}(a + b) >= t}. Requires t >= 1.
PairRelation gamma_from_pollard(const IntSet& a, const IntSet& b, std::int64_t t);

struct PopularRelation {
  PairRelation gamma;
  /// eta n^2 / |A + B|.
  Rational k;
};

/// Pairs whose sum has at least eta n^2 / |A + B| representations. Requires eta > 0, |A| = |B|.
PopularRelation gamma_from_popular(const IntSet& a, const IntSet& b, const Rational& eta);

/// Covers a set of positive integers by a progression through 0, built from
/// Gamma = {(a, a') : |a - a'| in A}. Throws NonPositiveElement.
RecoveryReport recover_positive_part(const IntSet& a, const Rational& eps);

struct BadPairCount {
  std::int64_t count = 0;
  /// min(l1^2, l2^2)/4 - (l1 - l2)^2/2 - l1 - l2.
  Rational lower_bound;
};

/// Pairs (a1, a2) in P1 x P2 with a1 + a2 outside P1 u P2, for P1 = {0, d1, ..}
/// and P2 = {.., -d2, 0}. Throws ShapeViolation for other shapes.
BadPairCount bad_pair_count(const ArithProgression& p1, const ArithProgression& p2);

/// A progression centred at 0 built from the positive and negative parts of A.
RecoveryReport recover_centred(const IntSet& a, const Rational& eps);

}  // namespace freiman
