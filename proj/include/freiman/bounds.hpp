#pragma once

#include "freiman/rational.hpp"

#include <cstdint>

namespace freiman {

/// The golden ratio (1 + sqrt 5) / 2.
inline constexpr double kTheta = 1.6180339887498948482;

/// A bound counts as violated only when missed by more than this.
inline constexpr double kVerifierSlack = 1e-9;

/// Which case of a two-branch proposition bound applied.
enum class BoundBranch { short_range, long_range };

struct BoundValue {
  double value = 0.0;
  BoundBranch branch = BoundBranch::long_range;
};

/// Lower bound on |A +_G B| for A, B in {0..ell}, 0, ell in A, 0 in B, gcd 1, (K, s)-regular.
/// ell + n - 2s when ell < 2n - 2K - 2, else (theta + 1)n - 4s - 2K - theta.
BoundValue main_prop_sum_bound(std::int64_t ell, std::int64_t n, const Rational& k, std::int64_t s);

/// Difference form: ell + n - 2s when ell < 2n - 2K - 2, else 3n - 4s - 2K - 2.
BoundValue main_prop_difference_bound(std::int64_t ell, std::int64_t n, const Rational& k, std::int64_t s);

/// Strict bound theta*n - K - 2s for restricted sums in a group.
double kneser_theta_bound(std::int64_t n, const Rational& k, std::int64_t s);

/// Strict bound 2n - K - 2s for restricted differences in a group, exact.
Rational kneser_three_bound(std::int64_t n, const Rational& k, std::int64_t s);

/// Smallest integer strictly above r: the integer form of "count > r".
std::int64_t strict_integer_floor(const Rational& r);

/// t(2n - t).
std::int64_t pollard_bound(std::int64_t n, std::int64_t t);

/// measured <= bound up to the verifier slack.
inline bool le_with_slack(double measured, double bound) { return measured <= bound + kVerifierSlack; }
/// measured >= bound up to the verifier slack.
inline bool ge_with_slack(double measured, double bound) { return measured >= bound - kVerifierSlack; }
/// measured < bound with the slack counted against the claim.
inline bool lt_strictly(double measured, double bound) { return measured + kVerifierSlack < bound; }

}  // namespace freiman
