#pragma once

#include "freiman/int_set.hpp"
#include "freiman/rational.hpp"
#include "freiman/recovery.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <span>
#include <string>
#include <vector>

namespace freiman {

/// Arbitrary-precision rational for interval endpoints and measures.
using Exact = boost::multiprecision::mpq_rational;

Exact to_exact(const Rational& r);
std::string to_string(const Exact& x);

struct Interval {
  Exact lo;
  Exact hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of open intervals, stored sorted with positive gaps. Touching
/// or overlapping spans are merged and empty spans dropped on construction.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> spans);
  static IntervalUnion single(Exact lo, Exact hi);

  std::span<const Interval> intervals() const& { return spans_; }
  std::vector<Interval> intervals() && { return std::move(spans_); }
  std::size_t size() const { return spans_.size(); }
  bool empty() const { return spans_.empty(); }

  Exact measure() const;
  IntervalUnion intersect(const IntervalUnion& other) const;
  IntervalUnion unite(const IntervalUnion& other) const;
  IntervalUnion translated(const Exact& shift) const;
  /// Scales every endpoint by c > 0.
  IntervalUnion dilated(const Exact& c) const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  std::vector<Interval> spans_;
};

Exact measure(const IntervalUnion& a);
Exact symmetric_difference_measure(const IntervalUnion& a, const IntervalUnion& b);

/// Exact value of the double integral of 1_A(y) 1_B(x - y) 1_C(x).
Exact triple_correlation(const IntervalUnion& a, const IntervalUnion& b, const IntervalUnion& c);

struct DiscretizationResult {
  Exact eta;
  Exact delta;
  /// Indices n of the cells (eta n, eta (n + 1)) that A fills to at least (1 - delta) eta.
  IntSet cells;
  /// Union of the selected cells.
  IntervalUnion approximation;
  /// Measure of A symmetric-difference approximation.
  Exact symmetric_difference;
};

/// Throws PreconditionViolated unless eta > 0 and 0 <= delta < 1.
DiscretizationResult discretize(const IntervalUnion& a, const Exact& eta, const Exact& delta);

/// The smallest centred interval containing the cells of every element of p.
IntervalUnion centred_cover(const ArithProgression& p, const Exact& eta);

struct IntervalRecovery {
  /// Centred interval built from the recovered progression.
  IntervalUnion j;
  /// lambda(J) / lambda(A).
  Exact length_ratio;
  /// lambda(A n J) / lambda(A).
  Exact coverage_ratio;
  DiscretizationResult discretization;
  /// Parts hold the centred recoveries of the cell set and of its shift by -1.
  RecoveryReport report;
};

/// Discretizes A, recovers centred progressions for the cell set and its shift
/// by -1 at 2 eps, and turns the first into a centred interval.
/// Throws PreconditionViolated for non-positive parameters or lambda(A) = 0,
/// DiscretizationTooCoarse when no cell is selected.
IntervalRecovery recover_interval(const IntervalUnion& a, const Rational& eps, const Exact& eta, const Exact& delta);

}  // namespace freiman
