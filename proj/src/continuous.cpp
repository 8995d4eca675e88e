#include "freiman/continuous.hpp"

#include "freiman/bounds.hpp"
#include "freiman/errors.hpp"
#include "freiman/sumset.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace freiman {

namespace {

using boost::multiprecision::mpz_int;

constexpr std::int64_t kMaxCells = 50'000'000;

std::int64_t floor_to_int(const Exact& x) {
  const mpz_int num = boost::multiprecision::numerator(x);
  const mpz_int den = boost::multiprecision::denominator(x);
  mpz_int q = num / den;
  if (q * den != num && num < 0) --q;
  if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min()) {
    throw PreconditionViolated("cell index outside the 64-bit range");
  }
  return q.convert_to<std::int64_t>();
}

std::int64_t ceil_to_int(const Exact& x) { return -floor_to_int(-x); }

Exact positive_square_half(const Exact& u) { return u > 0 ? Exact(u * u / 2) : Exact(0); }

// Integral over (e, f) of max(x - p, 0).
Exact ramp_integral(const Exact& e, const Exact& f, const Exact& p) {
  return positive_square_half(f - p) - positive_square_half(e - p);
}

// <1_[a,b] * 1_[c,d], 1_[e,f]>.
Exact interval_triple(const Interval& x, const Interval& y, const Interval& z) {
  if (x.lo + y.lo >= z.hi || x.hi + y.hi <= z.lo) return 0;
  return ramp_integral(z.lo, z.hi, x.lo + y.lo) - ramp_integral(z.lo, z.hi, x.lo + y.hi) -
         ramp_integral(z.lo, z.hi, x.hi + y.lo) + ramp_integral(z.lo, z.hi, x.hi + y.hi);
}

double fourth_root(const Rational& eps) { return std::pow(to_double(eps), 0.25); }

}  // namespace

Exact to_exact(const Rational& r) { return Exact(r.numerator()) / Exact(r.denominator()); }

std::string to_string(const Exact& x) { return x.str(); }

IntervalUnion::IntervalUnion(std::vector<Interval> spans) {
  std::erase_if(spans, [](const Interval& s) { return s.hi <= s.lo; });
  std::sort(spans.begin(), spans.end(), [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
  for (auto& s : spans) {
    if (!spans_.empty() && s.lo <= spans_.back().hi) {
      if (s.hi > spans_.back().hi) spans_.back().hi = s.hi;
    } else {
      spans_.push_back(std::move(s));
    }
  }
}

IntervalUnion IntervalUnion::single(Exact lo, Exact hi) { return IntervalUnion({{std::move(lo), std::move(hi)}}); }

Exact IntervalUnion::measure() const {
  Exact total = 0;
  for (const auto& s : spans_) total += s.hi - s.lo;
  return total;
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& other) const {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < spans_.size() && j < other.spans_.size()) {
    const auto& x = spans_[i];
    const auto& y = other.spans_[j];
    const Exact lo = std::max(x.lo, y.lo);
    const Exact hi = std::min(x.hi, y.hi);
    if (lo < hi) out.push_back({lo, hi});
    if (x.hi < y.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  std::vector<Interval> all(spans_.begin(), spans_.end());
  all.insert(all.end(), other.spans_.begin(), other.spans_.end());
  return IntervalUnion(std::move(all));
}

IntervalUnion IntervalUnion::translated(const Exact& shift) const {
  std::vector<Interval> out;
  out.reserve(spans_.size());
  for (const auto& s : spans_) out.push_back({s.lo + shift, s.hi + shift});
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::dilated(const Exact& c) const {
  if (c <= 0) throw PreconditionViolated("dilation factor must be positive");
  std::vector<Interval> out;
  out.reserve(spans_.size());
  for (const auto& s : spans_) out.push_back({s.lo * c, s.hi * c});
  return IntervalUnion(std::move(out));
}

Exact measure(const IntervalUnion& a) { return a.measure(); }

Exact symmetric_difference_measure(const IntervalUnion& a, const IntervalUnion& b) {
  return a.measure() + b.measure() - 2 * a.intersect(b).measure();
}

Exact triple_correlation(const IntervalUnion& a, const IntervalUnion& b, const IntervalUnion& c) {
  Exact total = 0;
  for (const auto& x : a.intervals()) {
    for (const auto& y : b.intervals()) {
      for (const auto& z : c.intervals()) total += interval_triple(x, y, z);
    }
  }
  return total;
}

DiscretizationResult discretize(const IntervalUnion& a, const Exact& eta, const Exact& delta) {
  if (eta <= 0) throw PreconditionViolated("discretize: eta must be positive");
  if (delta < 0 || delta >= 1) throw PreconditionViolated("discretize: delta must lie in [0, 1)");
  std::map<std::int64_t, Exact> filled;
  std::int64_t visited = 0;
  for (const auto& s : a.intervals()) {
    const auto first = floor_to_int(s.lo / eta);
    const auto last = ceil_to_int(s.hi / eta) - 1;
    visited += last - first + 1;
    if (visited > kMaxCells) throw BudgetExceeded("discretize: eta too small for the extent of A");
    for (auto n = first; n <= last; ++n) {
      const Exact lo = std::max(s.lo, Exact(eta * n));
      const Exact hi = std::min(s.hi, Exact(eta * (n + 1)));
      if (lo < hi) filled[n] += hi - lo;
    }
  }
  const Exact needed = (1 - delta) * eta;
  std::vector<std::int64_t> cells;
  std::vector<Interval> spans;
  Exact overlap = 0;
  for (const auto& [n, amount] : filled) {
    if (amount >= needed) {
      cells.push_back(n);
      spans.push_back({eta * n, eta * (n + 1)});
      overlap += amount;
    }
  }
  DiscretizationResult r;
  r.eta = eta;
  r.delta = delta;
  r.cells = IntSet(std::move(cells));
  r.approximation = IntervalUnion(std::move(spans));
  r.symmetric_difference = a.measure() + eta * static_cast<std::int64_t>(r.cells.size()) - 2 * overlap;
  return r;
}

IntervalUnion centred_cover(const ArithProgression& p, const Exact& eta) {
  const Exact left = eta * p.start();
  const Exact right = eta * (p.last() + 1);
  const Exact reach = std::max(Exact(-left), right);
  return IntervalUnion::single(-reach, reach);
}

IntervalRecovery recover_interval(const IntervalUnion& a, const Rational& eps, const Exact& eta, const Exact& delta) {
  if (eps <= 0) throw PreconditionViolated("recover_interval: epsilon must be positive");
  if (delta <= 0) throw PreconditionViolated("recover_interval: delta must be positive");
  const Exact total = a.measure();
  if (total <= 0) throw PreconditionViolated("recover_interval: A has zero measure");

  IntervalRecovery out;
  out.discretization = discretize(a, eta, delta);
  const IntSet& cells = out.discretization.cells;
  if (cells.empty()) throw DiscretizationTooCoarse("no cell reaches the fill threshold; decrease eta or increase delta");

  const Rational doubled = eps * 2;
  auto main = recover_centred(cells, doubled);
  main.kind = "cells";
  auto shifted = recover_centred(cells.translated(-1), doubled);
  shifted.kind = "shifted_cells";

  out.j = centred_cover(main.p, eta);
  out.length_ratio = out.j.measure() / total;
  out.coverage_ratio = a.intersect(out.j).measure() / total;

  RecoveryReport& r = out.report;
  r.kind = "interval";
  r.epsilon = eps;
  r.p = main.p;
  r.coverage_a = static_cast<std::int64_t>(main.p.intersection_size(cells));

  const Exact rs_value = triple_correlation(a, a, a);
  const Exact rs_ratio = rs_value / (Exact(3) / 4 * total * total);
  const auto c_cells = triple_count(cells).c;
  const auto c_shifted = triple_count(cells.translated(-1)).c;
  const Rational c_needed = Rational(3, 4) - doubled;
  const double tiny = std::ldexp(1.0, -100);
  r.hypothesis.push_back({"epsilon_below_2^-100", to_double(eps), tiny, Comparison::less, to_double(eps) < tiny});
  r.hypothesis.push_back({"rs_ratio", rs_ratio.convert_to<double>(), 1.0 - to_double(eps), Comparison::greater_equal,
                          rs_ratio >= 1 - to_exact(eps)});
  r.hypothesis.push_back({"c_cells", to_double(c_cells), to_double(c_needed), Comparison::greater_equal,
                          c_cells >= c_needed});
  r.hypothesis.push_back({"c_shifted_cells", to_double(c_shifted), to_double(c_needed), Comparison::greater_equal,
                          c_shifted >= c_needed});

  const double root = fourth_root(eps);
  const double length_bound = 1.0 + 561.0 * root;
  const double coverage_bound = 1.0 - 21.0 * root;
  const double length_ratio = out.length_ratio.convert_to<double>();
  const double coverage_ratio = out.coverage_ratio.convert_to<double>();
  const bool same_difference = main.p.difference() == shifted.p.difference();
  r.conclusion.push_back({"differences_agree", static_cast<double>(main.p.difference()),
                          static_cast<double>(shifted.p.difference()), Comparison::equal, same_difference});
  r.conclusion.push_back({"length_ratio", length_ratio, length_bound, Comparison::less_equal,
                          le_with_slack(length_ratio, length_bound)});
  r.conclusion.push_back({"coverage_ratio", coverage_ratio, coverage_bound, Comparison::greater_equal,
                          ge_with_slack(coverage_ratio, coverage_bound)});

  r.diagnostics = {{"eta", eta.convert_to<double>()},
                   {"delta", delta.convert_to<double>()},
                   {"cells", static_cast<double>(cells.size())},
                   {"symmetric_difference", out.discretization.symmetric_difference.convert_to<double>()},
                   {"measure_a", total.convert_to<double>()},
                   {"measure_j", out.j.measure().convert_to<double>()},
                   {"rs_ratio", rs_ratio.convert_to<double>()},
                   {"c_cells", to_double(c_cells)},
                   {"c_shifted_cells", to_double(c_shifted)}};

  r.hypothesis_certified = std::all_of(r.hypothesis.begin(), r.hypothesis.end(), [](const Check& c) { return c.holds; });
  r.conclusion_certified = std::all_of(r.conclusion.begin(), r.conclusion.end(), [](const Check& c) { return c.holds; });
  r.parts.push_back(std::move(main));
  r.parts.push_back(std::move(shifted));
  return out;
}

}  // namespace freiman
