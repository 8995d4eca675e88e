#include "freiman/bounds.hpp"

namespace freiman {

namespace {

bool short_range(std::int64_t ell, std::int64_t n, const Rational& k) {
  return Rational(ell) < Rational(2 * n - 2) - 2 * k;
}

}  // namespace

BoundValue main_prop_sum_bound(std::int64_t ell, std::int64_t n, const Rational& k, std::int64_t s) {
  if (short_range(ell, n, k)) {
    return {static_cast<double>(ell + n - 2 * s), BoundBranch::short_range};
  }
  return {(kTheta + 1.0) * static_cast<double>(n) - 4.0 * static_cast<double>(s) - 2.0 * to_double(k) - kTheta,
          BoundBranch::long_range};
}

BoundValue main_prop_difference_bound(std::int64_t ell, std::int64_t n, const Rational& k, std::int64_t s) {
  if (short_range(ell, n, k)) {
    return {static_cast<double>(ell + n - 2 * s), BoundBranch::short_range};
  }
  return {to_double(Rational(3 * n - 4 * s - 2) - 2 * k), BoundBranch::long_range};
}

double kneser_theta_bound(std::int64_t n, const Rational& k, std::int64_t s) {
  return kTheta * static_cast<double>(n) - to_double(k) - 2.0 * static_cast<double>(s);
}

Rational kneser_three_bound(std::int64_t n, const Rational& k, std::int64_t s) {
  return Rational(2 * n - 2 * s) - k;
}

std::int64_t strict_integer_floor(const Rational& r) { return floor(r) + 1; }

std::int64_t pollard_bound(std::int64_t n, std::int64_t t) { return t * (2 * n - t); }

}  // namespace freiman
