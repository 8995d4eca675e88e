#include "freiman/recovery.hpp"

#include "freiman/bounds.hpp"
#include "freiman/errors.hpp"
#include "freiman/regularity.hpp"
#include "freiman/sumset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace freiman {

namespace {

Check exact_check(std::string name, const Rational& measured, const Rational& bound, Comparison cmp) {
  bool holds = false;
  switch (cmp) {
    case Comparison::less: holds = measured < bound; break;
    case Comparison::less_equal: holds = measured <= bound; break;
    case Comparison::greater_equal: holds = measured >= bound; break;
    case Comparison::equal: holds = measured == bound; break;
  }
  return {std::move(name), to_double(measured), to_double(bound), cmp, holds};
}

// Float comparisons use the verifier slack in the verifier's favour: hypotheses
// must hold strictly, conclusions may be missed by at most the slack.
Check hypothesis_lt(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, Comparison::less, lt_strictly(measured, bound)};
}

Check conclusion_le(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, Comparison::less_equal, le_with_slack(measured, bound)};
}

Check conclusion_ge(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, Comparison::greater_equal, ge_with_slack(measured, bound)};
}

Check flag(std::string name, bool holds) {
  return {std::move(name), holds ? 1.0 : 0.0, 1.0, Comparison::equal, holds};
}

bool all_hold(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds; });
}

void finalize(RecoveryReport& r) {
  r.hypothesis_certified = all_hold(r.hypothesis);
  r.conclusion_certified = all_hold(r.conclusion);
}

// n >= 2 eps^{-1/2}  <=>  eps n^2 >= 4.
Check size_threshold_check(std::int64_t n, const Rational& eps) {
  return exact_check("n_at_least_2_eps_pow_neg_half", Rational(n) * Rational(n) * eps, Rational(4),
                     Comparison::greater_equal);
}

struct CoreCover {
  ArithProgression p{0, 1, 1};
  ArithProgression q{0, 1, 1};
  DenseCore core;
  Rational eps_core;
  std::int64_t ell = 0;
  bool degenerate = false;
};

// Dense core, then copies of {0..ell} in normalized coordinates mapped back.
// The core threshold uses max(eps, measured density defect) so the core is
// guaranteed to be large even when eps understates the defect.
CoreCover cover_core(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& eps) {
  CoreCover out;
  out.eps_core = std::max(eps, gamma.density_defect());
  out.core = dense_core_unchecked(a, b, gamma, out.eps_core);
  if (out.core.a.empty()) {
    out.degenerate = true;
    out.p = ArithProgression(a.min(), 1, 1);
    out.q = ArithProgression(b.min(), 1, 1);
    return out;
  }
  if (offset_gcd(out.core.a) == 0 && offset_gcd(out.core.b) == 0) {
    out.degenerate = true;
    out.p = ArithProgression(out.core.a.min(), 1, 1);
    out.q = ArithProgression(out.core.b.min(), 1, 1);
    return out;
  }
  auto norm = normalize_pair(out.core.a, out.core.b);
  out.ell = norm.ell;
  const ArithProgression base(0, 1, norm.ell + 1);
  out.p = denormalize_ap(base, norm.map, Side::a);
  out.q = denormalize_ap(base, norm.map, Side::b);
  return out;
}

void add_core_diagnostics(RecoveryReport& r, const PairRelation& gamma, const CoreCover& cover) {
  r.diagnostics.push_back({"gamma_size", static_cast<double>(gamma.size())});
  r.diagnostics.push_back({"density_defect", to_double(gamma.density_defect())});
  r.diagnostics.push_back({"core_epsilon", to_double(cover.eps_core)});
  r.diagnostics.push_back({"core_threshold", static_cast<double>(cover.core.threshold)});
  r.diagnostics.push_back({"core_size", static_cast<double>(cover.core.a.size())});
  r.diagnostics.push_back({"ell", static_cast<double>(cover.ell)});
  r.diagnostics.push_back({"degenerate_core", cover.degenerate ? 1.0 : 0.0});
}

void require_recovery_inputs(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& eps) {
  if (a.empty() || b.empty()) throw PreconditionViolated("recovery requires nonempty sets");
  if (a.size() != b.size()) throw PreconditionViolated("recovery requires |A| = |B|");
  if (eps <= 0) throw PreconditionViolated("recovery requires eps > 0");
  if (gamma.rows() != a.size() || gamma.cols() != b.size()) throw IndexMismatch("relation shape mismatch");
}

// The difference pipeline shared by recover_difference and recover_positive_part.
struct DifferenceRun {
  CoreCover cover;
  std::int64_t difference_size = 0;
};

DifferenceRun run_difference(const IntSet& a, const PairRelation& gamma, const Rational& eps) {
  DifferenceRun run;
  run.cover = cover_core(a, a, gamma, eps);
  run.difference_size = static_cast<std::int64_t>(restricted_difference(a, gamma).size());
  return run;
}

}  // namespace

std::optional<double> RecoveryReport::diagnostic(const std::string& name) const {
  for (const auto& d : diagnostics) {
    if (d.name == name) return d.value;
  }
  return std::nullopt;
}

RecoveryReport recover_additive(const IntSet& a, const IntSet& b, const PairRelation& gamma, const Rational& eps) {
  require_recovery_inputs(a, b, gamma, eps);
  const auto n = static_cast<std::int64_t>(a.size());
  const double nd = static_cast<double>(n);
  const double root = std::sqrt(to_double(eps));

  RecoveryReport r;
  r.kind = "additive";
  r.epsilon = eps;
  auto cover = cover_core(a, b, gamma, eps);
  r.p = cover.p;
  r.q = cover.q;
  r.coverage_a = static_cast<std::int64_t>(r.p.intersection_size(a));
  r.coverage_b = static_cast<std::int64_t>(r.q->intersection_size(b));
  const auto restricted = static_cast<double>(restricted_sumset(a, b, gamma).size());

  r.hypothesis.push_back(exact_check("gamma_density", Rational(static_cast<std::int64_t>(gamma.size())),
                                     (Rational(1) - eps) * Rational(n * n), Comparison::greater_equal));
  r.hypothesis.push_back(exact_check("n_at_least_3", Rational(n), Rational(3), Comparison::greater_equal));
  r.hypothesis.push_back(size_threshold_check(n, eps));
  r.hypothesis.push_back(hypothesis_lt("restricted_sumset_size", restricted, (1.0 + kTheta - 11.0 * root) * nd));

  const double size_bound = restricted - (1.0 - 5.0 * root) * nd;
  r.conclusion.push_back(conclusion_le("size_P", static_cast<double>(r.p.count()), size_bound));
  r.conclusion.push_back(conclusion_le("size_Q", static_cast<double>(r.q->count()), size_bound));
  r.conclusion.push_back(conclusion_ge("coverage_A", static_cast<double>(r.coverage_a), (1.0 - root) * nd));
  r.conclusion.push_back(conclusion_ge("coverage_B", static_cast<double>(*r.coverage_b), (1.0 - root) * nd));
  r.conclusion.push_back(flag("common_difference", r.p.difference() == r.q->difference()));

  r.diagnostics.push_back({"n", nd});
  r.diagnostics.push_back({"restricted_sumset_size", restricted});
  add_core_diagnostics(r, gamma, cover);
  finalize(r);
  return r;
}

RecoveryReport recover_difference(const IntSet& a, const PairRelation& gamma, const Rational& eps) {
  require_recovery_inputs(a, a, gamma, eps);
  const auto n = static_cast<std::int64_t>(a.size());
  const double nd = static_cast<double>(n);
  const double root = std::sqrt(to_double(eps));

  RecoveryReport r;
  r.kind = "difference";
  r.epsilon = eps;
  auto run = run_difference(a, gamma, eps);
  r.p = run.cover.p;
  r.coverage_a = static_cast<std::int64_t>(r.p.intersection_size(a));
  const auto diff = static_cast<double>(run.difference_size);

  r.hypothesis.push_back(exact_check("gamma_density", Rational(static_cast<std::int64_t>(gamma.size())),
                                     (Rational(1) - eps) * Rational(n * n), Comparison::greater_equal));
  r.hypothesis.push_back(exact_check("n_at_least_3", Rational(n), Rational(3), Comparison::greater_equal));
  r.hypothesis.push_back(size_threshold_check(n, eps));
  r.hypothesis.push_back(hypothesis_lt("restricted_difference_size", diff, (3.0 - 11.0 * root) * nd));

  r.conclusion.push_back(conclusion_le("size_P", static_cast<double>(r.p.count()), diff - (1.0 - 5.0 * root) * nd));
  r.conclusion.push_back(conclusion_ge("coverage_A", static_cast<double>(r.coverage_a), (1.0 - root) * nd));

  r.diagnostics.push_back({"n", nd});
  r.diagnostics.push_back({"restricted_difference_size", diff});
  add_core_diagnostics(r, gamma, run.cover);
  finalize(r);
  return r;
}

PairRelation gamma_from_pollard(const IntSet& a, const IntSet& b, std::int64_t t) {
  if (t < 1) throw PreconditionViolated("gamma_from_pollard requires t >= 1");
  if (a.empty() || b.empty()) return PairRelation::empty(a.size(), b.size());
  auto hist = rep_histogram(a, b);
  return PairRelation::from_predicate(a.size(), b.size(), [&](std::uint32_t i, std::uint32_t j) {
    return static_cast<std::int64_t>(hist.at(a[i] + b[j])) >= t;
  });
}

PopularRelation gamma_from_popular(const IntSet& a, const IntSet& b, const Rational& eta) {
  if (eta <= 0) throw PreconditionViolated("gamma_from_popular requires eta > 0");
  if (a.size() != b.size()) throw PreconditionViolated("gamma_from_popular requires |A| = |B|");
  if (a.empty()) throw EmptyInput("gamma_from_popular: empty sets");
  auto hist = rep_histogram(a, b);
  const auto n = static_cast<std::int64_t>(a.size());
  const Rational k = eta * Rational(n * n, static_cast<std::int64_t>(hist.support_size()));
  auto gamma = PairRelation::from_predicate(
      a.size(), b.size(), [&](std::uint32_t i, std::uint32_t j) { return at_least(hist.at(a[i] + b[j]), k); });
  return {std::move(gamma), k};
}

RecoveryReport recover_positive_part(const IntSet& a, const Rational& eps) {
  if (a.empty()) throw PreconditionViolated("recover_positive_part requires a nonempty set");
  if (a.min() <= 0) throw NonPositiveElement("recover_positive_part: element " + std::to_string(a.min()) + " <= 0");
  if (eps <= 0) throw PreconditionViolated("recover_positive_part requires eps > 0");
  const auto n = static_cast<std::int64_t>(a.size());
  const double nd = static_cast<double>(n);
  const double root = std::sqrt(to_double(eps));

  const auto gamma = PairRelation::from_predicate(a.size(), a.size(), [&](std::uint32_t i, std::uint32_t j) {
    return a.contains(a[i] > a[j] ? a[i] - a[j] : a[j] - a[i]);
  });
  auto run = run_difference(a, gamma, eps);
  const ArithProgression inner = run.cover.p;

  // Extend downward to 0. A single term becomes {0, a}; an offset start not
  // divisible by d falls back to the difference gcd(d, start).
  std::int64_t d = inner.difference();
  bool difference_reduced = false;
  if (inner.count() == 1) {
    d = inner.start();
  } else if (inner.start() % d != 0) {
    d = std::gcd(d, inner.start());
    difference_reduced = true;
  }
  const ArithProgression extended(0, d, inner.last() / d + 1);
  const std::int64_t m = extended.count() - inner.count();

  RecoveryReport r;
  r.kind = "positive";
  r.epsilon = eps;
  r.p = extended;
  r.coverage_a = static_cast<std::int64_t>(extended.intersection_size(a));
  const auto triples = triple_count(a);

  r.hypothesis.push_back(exact_check("epsilon_below_2^-20", eps, Rational(1, std::int64_t{1} << 20), Comparison::less));
  r.hypothesis.push_back(size_threshold_check(n, eps));
  r.hypothesis.push_back(
      exact_check("C(A)", triples.c, (Rational(1) - eps) / Rational(2), Comparison::greater_equal));

  r.conclusion.push_back(flag("contains_zero", extended.contains(0)));
  r.conclusion.push_back(conclusion_le("size_P", static_cast<double>(extended.count()), (1.0 + 45.0 * root) * nd));
  r.conclusion.push_back(conclusion_ge("coverage_A", static_cast<double>(r.coverage_a), (1.0 - root) * nd));
  r.conclusion.push_back(conclusion_le("extension_m", static_cast<double>(m), 40.0 * root * nd));

  r.diagnostics.push_back({"n", nd});
  r.diagnostics.push_back({"restricted_difference_size", static_cast<double>(run.difference_size)});
  r.diagnostics.push_back({"triple_count", static_cast<double>(triples.count)});
  r.diagnostics.push_back({"C", to_double(triples.c)});
  r.diagnostics.push_back({"inner_start", static_cast<double>(inner.start())});
  r.diagnostics.push_back({"inner_difference", static_cast<double>(inner.difference())});
  r.diagnostics.push_back({"inner_count", static_cast<double>(inner.count())});
  r.diagnostics.push_back({"extension_m", static_cast<double>(m)});
  r.diagnostics.push_back({"difference_reduced", difference_reduced ? 1.0 : 0.0});
  add_core_diagnostics(r, gamma, run.cover);
  finalize(r);
  return r;
}

BadPairCount bad_pair_count(const ArithProgression& p1, const ArithProgression& p2) {
  if (p1.start() != 0) throw ShapeViolation("bad_pair_count: P1 must start at 0");
  if (p2.last() != 0) throw ShapeViolation("bad_pair_count: P2 must end at 0");
  BadPairCount out;
  for (std::int64_t x = 0; x < p1.count(); ++x) {
    for (std::int64_t y = 0; y < p2.count(); ++y) {
      const std::int64_t sum = x * p1.difference() + p2.start() + y * p2.difference();
      if (!p1.contains(sum) && !p2.contains(sum)) ++out.count;
    }
  }
  const std::int64_t l1 = p1.count();
  const std::int64_t l2 = p2.count();
  out.lower_bound = Rational(std::min(l1 * l1, l2 * l2), 4) - Rational((l1 - l2) * (l1 - l2), 2) - l1 - l2;
  return out;
}

RecoveryReport recover_centred(const IntSet& a, const Rational& eps) {
  if (a.empty()) throw PreconditionViolated("recover_centred requires a nonempty set");
  if (eps <= 0) throw PreconditionViolated("recover_centred requires eps > 0");
  const auto n = static_cast<std::int64_t>(a.size());
  const double nd = static_cast<double>(n);
  const double quarter = std::pow(to_double(eps), 0.25);

  RecoveryReport r;
  r.kind = "centred";
  r.epsilon = eps;
  const IntSet positive = a.filtered([](std::int64_t x) { return x > 0; });
  const IntSet negative_mirror = a.filtered([](std::int64_t x) { return x < 0; }).negated();

  std::optional<ArithProgression> p1;
  std::optional<ArithProgression> p2_mirror;
  if (!positive.empty()) {
    r.parts.push_back(recover_positive_part(positive, eps));
    p1 = r.parts.back().p;
  }
  if (!negative_mirror.empty()) {
    r.parts.push_back(recover_positive_part(negative_mirror, eps));
    r.parts.back().kind = "negative";
    p2_mirror = r.parts.back().p;
  }

  std::int64_t d = 1;
  std::int64_t reach = 0;
  bool differences_agree = true;
  if (p1 && p2_mirror) {
    differences_agree = p1->difference() == p2_mirror->difference();
    d = std::gcd(p1->difference(), p2_mirror->difference());
    reach = std::max(p1->last(), p2_mirror->last());
    const ArithProgression p2(-p2_mirror->last(), p2_mirror->difference(), p2_mirror->count());
    if (!differences_agree) {
      auto bad = bad_pair_count(*p1, p2);
      r.diagnostics.push_back({"bad_pair_count", static_cast<double>(bad.count)});
      r.diagnostics.push_back({"bad_pair_lower_bound", to_double(bad.lower_bound)});
    }
  } else if (p1 || p2_mirror) {
    const auto& only = p1 ? *p1 : *p2_mirror;
    d = only.difference();
    reach = only.last();
  }
  r.p = ArithProgression(-reach, d, 2 * (reach / d) + 1);
  r.coverage_a = static_cast<std::int64_t>(r.p.intersection_size(a));
  const auto triples = triple_count(a);

  r.hypothesis.push_back(exact_check("epsilon_below_2^-50", eps, Rational(1, std::int64_t{1} << 50), Comparison::less));
  r.hypothesis.push_back(exact_check("n_at_least_eps_inv", Rational(n) * eps, Rational(1), Comparison::greater_equal));
  r.hypothesis.push_back(exact_check("C(A)", triples.c, Rational(3, 4) - eps, Comparison::greater_equal));

  r.conclusion.push_back(flag("contains_zero", r.p.contains(0)));
  r.conclusion.push_back(flag("centred", r.p.is_centred()));
  r.conclusion.push_back(flag("differences_agree", differences_agree));
  r.conclusion.push_back(conclusion_le("size_P", static_cast<double>(r.p.count()), (1.0 + 280.0 * quarter) * nd));
  r.conclusion.push_back(conclusion_ge("coverage_A", static_cast<double>(r.coverage_a), (1.0 - 10.0 * quarter) * nd));

  r.diagnostics.push_back({"n", nd});
  r.diagnostics.push_back({"n_positive", static_cast<double>(positive.size())});
  r.diagnostics.push_back({"n_negative", static_cast<double>(negative_mirror.size())});
  r.diagnostics.push_back({"triple_count", static_cast<double>(triples.count)});
  r.diagnostics.push_back({"C", to_double(triples.c)});
  finalize(r);
  return r;
}

}  // namespace freiman
