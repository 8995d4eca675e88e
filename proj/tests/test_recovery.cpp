#include "freiman/bounds.hpp"
#include "freiman/errors.hpp"
#include "freiman/recovery.hpp"
#include "freiman/sumset.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace freiman;

namespace {

const Check& find_check(const std::vector<Check>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  return checks.front();
}

bool all_hold(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds; });
}

// Flags equal the conjunction of their checks, and stored coverage matches a recount.
void check_consistency(const RecoveryReport& r, const IntSet& a, const IntSet* b = nullptr) {
  CHECK(r.hypothesis_certified == all_hold(r.hypothesis));
  CHECK(r.conclusion_certified == all_hold(r.conclusion));
  CHECK(r.coverage_a == static_cast<std::int64_t>(r.p.intersection_size(a)));
  if (b != nullptr) {
    REQUIRE(r.q);
    REQUIRE(r.coverage_b);
    CHECK(*r.coverage_b == static_cast<std::int64_t>(r.q->intersection_size(*b)));
  }
}

// n elements of {0..span} with 0 and span included.
IntSet spread_set(std::mt19937_64& rng, std::int64_t n, std::int64_t span) {
  auto s = oracle::random_set(rng, 1, span - 1, static_cast<std::size_t>(n - 2)).values();
  s.push_back(0);
  s.push_back(span);
  return IntSet::from_unsorted(std::move(s));
}

}  // namespace

TEST_CASE("recover_additive on a long interval") {
  const auto a = IntSet::interval(0, 9999);
  const auto r = recover_additive(a, a, PairRelation::full(10000, 10000), Rational(1, 10000));
  CHECK(r.p == ArithProgression(0, 1, 10000));
  CHECK(*r.q == ArithProgression(0, 1, 10000));
  CHECK(r.hypothesis_certified);
  CHECK(r.conclusion_certified);
  CHECK(find_check(r.hypothesis, "restricted_sumset_size").measured == 19999.0);
  check_consistency(r, a, &a);
}

TEST_CASE("recover_additive on a dilated interval") {
  const auto a = IntSet::interval(0, 9999).dilated(3);
  const auto r = recover_additive(a, a, PairRelation::full(10000, 10000), Rational(1, 10000));
  CHECK(r.p == ArithProgression(0, 3, 10000));
  CHECK(*r.q == ArithProgression(0, 3, 10000));
  CHECK(r.hypothesis_certified);
  CHECK(r.conclusion_certified);
}

TEST_CASE("recover_additive with a large epsilon reports an uncertified hypothesis") {
  const IntSet a{0, 1, 2};
  const auto r = recover_additive(a, a, PairRelation::full(3, 3), Rational(1, 2));
  CHECK_FALSE(r.hypothesis_certified);
  CHECK(find_check(r.hypothesis, "n_at_least_2_eps_pow_neg_half").holds);
  CHECK_FALSE(find_check(r.hypothesis, "restricted_sumset_size").holds);
  CHECK(r.conclusion.size() == 5);
  check_consistency(r, a, &a);
  CHECK_THROWS_AS(recover_additive(a, IntSet{0, 1}, PairRelation::full(3, 2), Rational(1, 2)), PreconditionViolated);
  CHECK_THROWS_AS(recover_additive(a, a, PairRelation::full(3, 3), Rational(0)), PreconditionViolated);
}

TEST_CASE("recover_difference examples") {
  const auto a = IntSet::interval(0, 9999);
  const auto r = recover_difference(a, PairRelation::full(10000, 10000), Rational(1, 10000));
  CHECK(r.p == ArithProgression(0, 1, 10000));
  CHECK(r.hypothesis_certified);
  CHECK(r.conclusion_certified);
  CHECK_FALSE(r.q);

  const auto five = IntSet::interval(0, 99).dilated(5);
  const auto r5 = recover_difference(five, PairRelation::full(100, 100), Rational(1, 100));
  CHECK(r5.p.difference() == 5);
  check_consistency(r5, five);

  std::vector<PairRelation::IndexPair> diag;
  for (std::uint32_t i = 0; i < 10; ++i) diag.emplace_back(i, i);
  const auto small = IntSet::interval(0, 9);
  const auto rd = recover_difference(small, PairRelation::including(10, 10, diag), Rational(1, 4));
  CHECK(find_check(rd.hypothesis, "restricted_difference_size").measured == 1.0);
  check_consistency(rd, small);
}

TEST_CASE("recover_additive covariance under translation and dilation") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const std::int64_t n = 8 + static_cast<std::int64_t>(rng() % 30);
    const auto a = spread_set(rng, n, n + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n)));
    const auto b = spread_set(rng, n, n + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n)));
    const auto g = oracle::random_relation(rng, a.size(), b.size(), 0.95);
    const Rational eps(1, 20);
    const auto base = recover_additive(a, b, g, eps);
    CHECK(base.p.difference() == base.q->difference());
    check_consistency(base, a, &b);

    const std::int64_t u = static_cast<std::int64_t>(rng() % 1000) - 500;
    const std::int64_t v = static_cast<std::int64_t>(rng() % 1000) - 500;
    const auto moved = recover_additive(a.translated(u), b.translated(v), g, eps);
    CHECK(moved.p == ArithProgression(base.p.start() + u, base.p.difference(), base.p.count()));
    CHECK(*moved.q == ArithProgression(base.q->start() + v, base.q->difference(), base.q->count()));
    CHECK(moved.coverage_a == base.coverage_a);
    CHECK(*moved.coverage_b == *base.coverage_b);
    CHECK(moved.hypothesis_certified == base.hypothesis_certified);
    CHECK(moved.conclusion_certified == base.conclusion_certified);

    const std::int64_t c = 1 + static_cast<std::int64_t>(rng() % 6);
    const auto scaled = recover_additive(a.dilated(c), b.dilated(c), g, eps);
    CHECK(scaled.p == ArithProgression(base.p.start() * c, base.p.difference() * c, base.p.count()));
    CHECK(*scaled.q == ArithProgression(base.q->start() * c, base.q->difference() * c, base.q->count()));
    CHECK(scaled.coverage_a == base.coverage_a);
    CHECK(scaled.hypothesis_certified == base.hypothesis_certified);
    CHECK(scaled.conclusion_certified == base.conclusion_certified);
  }
}

TEST_CASE("certified hypotheses imply certified conclusions") {
  std::mt19937_64 rng(83);
  int certified = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::int64_t n = 200 + static_cast<std::int64_t>(rng() % 200);
    const std::int64_t span = n + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n / 5));
    const auto a = spread_set(rng, n, span);
    const auto b = spread_set(rng, n, span);
    const auto g = oracle::random_relation(rng, a.size(), b.size(), 0.99995);
    const Rational eps(1, 10000);
    const auto r = recover_additive(a, b, g, eps);
    check_consistency(r, a, &b);
    if (r.hypothesis_certified) {
      ++certified;
      CHECK(r.conclusion_certified);
    }
    std::vector<PairRelation::IndexPair> out;
    for (auto [i, j] : g.excluded_pairs()) out.emplace_back(i, j);
    const auto gd = PairRelation::excluding(a.size(), a.size(), out);
    const auto rd = recover_difference(a, gd, eps);
    check_consistency(rd, a);
    if (rd.hypothesis_certified) {
      ++certified;
      CHECK(rd.conclusion_certified);
    }
  }
  CHECK(certified > 50);
}

TEST_CASE("gamma_from_pollard") {
  const IntSet a{0, 1, 2};
  CHECK(gamma_from_pollard(a, a, 1).is_full());
  const auto g3 = gamma_from_pollard(a, a, 3);
  CHECK(g3.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(g3.contains(i, 2 - i));
  CHECK(gamma_from_pollard(a, a, 4).size() == 0);
  CHECK_THROWS_AS(gamma_from_pollard(a, a, 0), PreconditionViolated);

  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = oracle::random_set(rng, -30, 30, 1 + rng() % 15);
    const auto y = oracle::random_set(rng, -30, 30, 1 + rng() % 15);
    const std::int64_t t = 1 + static_cast<std::int64_t>(rng() % 6);
    const auto g = gamma_from_pollard(x, y, t);
    const auto lhs = pollard_partial_sum(x, y, t);
    const auto rhs = t * static_cast<std::int64_t>(restricted_sumset(x, y, g).size()) + static_cast<std::int64_t>(g.missing());
    CHECK(lhs == rhs);
  }
}

TEST_CASE("gamma_from_popular") {
  const IntSet a{0, 1, 2};
  const auto pop = gamma_from_popular(a, a, Rational(1));
  CHECK(pop.k == Rational(9, 5));
  CHECK(pop.gamma.size() == 7);
  CHECK(gamma_from_popular(IntSet::interval(0, 9), IntSet::interval(0, 9), Rational(1, 10)).gamma.is_full());
  CHECK(gamma_from_popular(a, a, Rational(1, 1000000)).gamma.is_full());
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + rng() % 15;
    const auto x = oracle::random_set(rng, -30, 30, n);
    const auto y = oracle::random_set(rng, -30, 30, n);
    const Rational eta(1 + static_cast<std::int64_t>(rng() % 9), 10);
    const auto p = gamma_from_popular(x, y, eta);
    const auto nn = static_cast<std::int64_t>(n);
    CHECK(Rational(static_cast<std::int64_t>(p.gamma.size())) >= (Rational(1) - eta) * nn * nn);
  }
}

TEST_CASE("recover_positive_part examples") {
  const auto a = IntSet::interval(1, 100);
  const auto r = recover_positive_part(a, Rational(1, 100));
  CHECK(r.p == ArithProgression(0, 1, 101));
  CHECK(r.coverage_a == 100);
  CHECK(find_check(r.conclusion, "contains_zero").holds);
  check_consistency(r, a);

  const auto d7 = IntSet::interval(1, 60).dilated(7);
  const auto r7 = recover_positive_part(d7, Rational(1, 100));
  CHECK(r7.p.difference() == 7);
  CHECK(r7.p.start() == 0);
  CHECK(r7.coverage_a == 60);

  const auto r1 = recover_positive_part({1}, Rational(1, 100));
  CHECK(r1.p == ArithProgression(0, 1, 2));
  CHECK_FALSE(r1.hypothesis_certified);

  CHECK_THROWS_AS(recover_positive_part({0, 1}, Rational(1, 100)), NonPositiveElement);
  CHECK_THROWS_AS(recover_positive_part({-3, 1}, Rational(1, 100)), NonPositiveElement);
}

TEST_CASE("recover_positive_part always yields a progression through 0") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_set(rng, 1, 80, 1 + rng() % 40);
    const auto r = recover_positive_part(a, Rational(1, 50));
    CHECK(r.p.start() == 0);
    CHECK(r.p.contains(0));
    check_consistency(r, a);
  }
}

TEST_CASE("bad_pair_count examples and bound") {
  CHECK(bad_pair_count(ArithProgression(0, 1, 3), ArithProgression(-2, 1, 3)).count == 0);
  const auto b = bad_pair_count(ArithProgression(0, 1, 4), ArithProgression(-6, 2, 4));
  CHECK(b.count == 5);
  CHECK(b.lower_bound == Rational(-4));
  CHECK(bad_pair_count(ArithProgression(0, 2, 2), ArithProgression(-1, 1, 2)).count == 1);
  CHECK_THROWS_AS(bad_pair_count(ArithProgression(1, 1, 3), ArithProgression(-2, 1, 3)), ShapeViolation);
  CHECK_THROWS_AS(bad_pair_count(ArithProgression(0, 1, 3), ArithProgression(-2, 1, 2)), ShapeViolation);
  for (std::int64_t d1 = 1; d1 <= 5; ++d1) {
    for (std::int64_t d2 = 1; d2 <= 5; ++d2) {
      if (d1 == d2) continue;
      for (std::int64_t l1 = 1; l1 <= 25; ++l1) {
        for (std::int64_t l2 = 1; l2 <= 25; ++l2) {
          const ArithProgression p1(0, d1, l1);
          const ArithProgression p2(-(l2 - 1) * d2, d2, l2);
          const auto bad = bad_pair_count(p1, p2);
          std::int64_t brute = 0;
          for (auto x : p1.terms()) {
            for (auto y : p2.terms()) brute += (!p1.contains(x + y) && !p2.contains(x + y)) ? 1 : 0;
          }
          CHECK(bad.count == brute);
          CHECK(Rational(bad.count) >= bad.lower_bound);
        }
      }
    }
  }
}

TEST_CASE("recover_centred examples") {
  const auto a = IntSet::interval(-1000, 1000);
  const auto r = recover_centred(a, Rational(1, 1000));
  CHECK(r.p == ArithProgression(-1000, 1, 2001));
  CHECK(r.coverage_a == 2001);
  CHECK(find_check(r.hypothesis, "C(A)").holds);
  CHECK(r.conclusion_certified);
  check_consistency(r, a);

  const IntSet pos{1, 2, 3};
  const auto rp = recover_centred(pos, Rational(1, 1000));
  CHECK(rp.p.is_centred());
  CHECK(rp.p.contains(3));
  CHECK(rp.coverage_a == 3);
  CHECK(rp.parts.size() == 1);

  const auto rz = recover_centred({0}, Rational(1, 1000));
  CHECK(rz.p == ArithProgression(0, 1, 1));
}

TEST_CASE("recover_centred on intervals with symmetric deletions") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::int64_t> kept{0};
    for (std::int64_t x = 1; x <= 400; ++x) {
      if (rng() % 100 != 0) {
        kept.push_back(x);
        kept.push_back(-x);
      }
    }
    const auto a = IntSet::from_unsorted(kept);
    const auto r = recover_centred(a, Rational(1, 1000));
    CHECK(r.p.is_centred());
    CHECK(static_cast<double>(r.coverage_a) >= 0.99 * static_cast<double>(a.size()));
    check_consistency(r, a);
  }
}

TEST_CASE("recover_centred output is always centred") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_set(rng, -40, 40, 1 + rng() % 30);
    const auto r = recover_centred(a, Rational(1, 100));
    CHECK(r.p.contains(0));
    CHECK(r.p.is_centred());
    CHECK(r.p.terms() == r.p.terms().negated());
    check_consistency(r, a);
    if (r.hypothesis_certified) CHECK(r.conclusion_certified);
  }
}
