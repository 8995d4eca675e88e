#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace freiman {

/// Exact rational used for thresholds and statistics (K, C(A), epsilon).
using Rational = boost::rational<std::int64_t>;

/// Parses "3/4", "0.005", "1e-4", "-2" into an exact rational.
/// Throws InputError on malformed text or when the value does not fit.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// floor(sqrt(eps) * n) computed exactly; eps must be non-negative.
std::int64_t floor_sqrt_times(const Rational& eps, std::int64_t n);

/// Smallest integer >= r.
std::int64_t ceil(const Rational& r);
/// Largest integer <= r.
std::int64_t floor(const Rational& r);

/// Exact comparison of an integer count against a rational threshold: count >= threshold.
inline bool at_least(std::int64_t count, const Rational& threshold) {
  return Rational(count) >= threshold;
}

}  // namespace freiman
