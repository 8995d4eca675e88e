#include "freiman/rational.hpp"

#include "freiman/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace freiman {

namespace {

constexpr std::int64_t kMaxDenominatorDigits = 18;

std::int64_t parse_digits(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw InputError("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

std::int64_t pow10(std::int64_t exp, std::string_view whole) {
  if (exp > kMaxDenominatorDigits) throw InputError("rational '" + std::string(whole) + "' out of range");
  std::int64_t p = 1;
  for (std::int64_t i = 0; i < exp; ++i) p *= 10;
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty()) throw InputError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_digits(text.substr(0, slash), whole);
    auto den = parse_digits(text.substr(slash + 1), whole);
    if (den == 0) throw InputError("zero denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::int64_t exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    exponent = parse_digits(exp_text, whole);
    text = text.substr(0, e);
  }
  std::string digits;
  std::int64_t frac_digits = 0;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    frac_digits = static_cast<std::int64_t>(text.size() - dot - 1);
  } else {
    digits = std::string(text);
  }
  if (digits.empty()) throw InputError("malformed rational '" + std::string(whole) + "'");
  std::int64_t mantissa = parse_digits(digits, whole);
  std::int64_t scale = frac_digits - exponent;
  Rational value = scale >= 0 ? Rational(mantissa, pow10(scale, whole))
                              : Rational(mantissa) * Rational(pow10(-scale, whole));
  return negative ? -value : value;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::int64_t floor_sqrt_times(const Rational& eps, std::int64_t n) {
  if (eps < 0) throw PreconditionViolated("floor_sqrt_times: negative epsilon");
  // Largest k with k^2 * q <= p * n^2.
  const __int128 p = eps.numerator();
  const __int128 q = eps.denominator();
  const __int128 target = p * n * n;
  auto fits = [&](__int128 k) { return k * k * q <= target; };
  auto k = static_cast<__int128>(std::sqrt(static_cast<long double>(target) / static_cast<long double>(q)));
  while (k > 0 && !fits(k)) --k;
  while (fits(k + 1)) ++k;
  return static_cast<std::int64_t>(k);
}

std::int64_t floor(const Rational& r) {
  auto q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::int64_t ceil(const Rational& r) {
  auto f = floor(r);
  return Rational(f) == r ? f : f + 1;
}

}  // namespace freiman
