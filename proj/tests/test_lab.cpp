#include "freiman/bounds.hpp"
#include "freiman/errors.hpp"
#include "freiman/lab.hpp"
#include "freiman/regularity.hpp"
#include "freiman/sumset.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace freiman;

namespace {

bool same(const std::vector<BoundResult>& x, const std::vector<BoundResult>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].instance_key != y[i].instance_key || x[i].measured != y[i].measured || x[i].bound != y[i].bound ||
        x[i].slack != y[i].slack || x[i].pass != y[i].pass) {
      return false;
    }
  }
  return true;
}

InstanceSpec line_spec(Proposition prop, std::int64_t lmax) {
  InstanceSpec spec;
  spec.prop = prop;
  spec.size_max = lmax;
  spec.k_values = {Rational(2)};
  return spec;
}

}  // namespace

TEST_CASE("proposition names round-trip") {
  for (auto p : {Proposition::main_prop_sum, Proposition::main_prop_difference, Proposition::kneser_theta,
                 Proposition::kneser_three, Proposition::pollard}) {
    CHECK(parse_proposition(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_proposition("main-prop"), InputError);
  CHECK(mode_of(Proposition::kneser_three) == InstanceMode::cyclic_group);
  CHECK(mode_of(Proposition::pollard) == InstanceMode::integer_line);
}

TEST_CASE("default K grid") {
  InstanceSpec spec;
  CHECK(k_grid(spec, 10) == std::vector<Rational>{Rational(2), Rational(3), Rational(5)});
  CHECK(k_grid(spec, 3) == std::vector<Rational>{Rational(2), Rational(3)});
  spec.prop = Proposition::kneser_theta;
  CHECK(k_grid(spec, 1) == std::vector<Rational>{Rational(1), Rational(2), Rational(3)});
}

TEST_CASE("sum form with full Gamma: every instance passes") {
  const auto spec = line_spec(Proposition::main_prop_sum, 9);
  const auto summary = enumerate_and_verify(spec, nullptr);
  CHECK(summary.violations == 0);
  CHECK(summary.checked == summary.instances);
  CHECK(summary.checked > 10000);
  REQUIRE(summary.worst);
  CHECK(summary.worst->slack >= 0.0);
}

TEST_CASE("canonical instances obey the enumeration constraints") {
  const auto results = enumerate_and_verify(line_spec(Proposition::main_prop_sum, 6));
  std::set<std::string> keys;
  for (const auto& r : results) {
    CHECK(keys.insert(r.instance_key).second);
    const auto inst = materialize_instance(r.instance_key);
    CHECK(inst.a.min() == 0);
    CHECK(inst.a.max() == inst.size);
    CHECK(inst.b.min() == 0);
    CHECK(inst.b.max() <= inst.size);
    CHECK(inst.a.size() == inst.b.size());
    CHECK(inst.a.size() >= 3);
    CHECK(std::gcd(offset_gcd(inst.a), offset_gcd(inst.b)) == 1);
    CHECK(inst.measured == r.measured);
    CHECK(inst.bound == r.bound);
  }
  // Count against a direct enumeration of all qualifying pairs.
  std::size_t expected = 0;
  for (std::int64_t ell = 1; ell <= 6; ++ell) {
    for (std::uint64_t am = 0; am < (1U << (ell + 1)); ++am) {
      for (std::uint64_t bm = 0; bm < (1U << (ell + 1)); ++bm) {
        const auto a = oracle::from_mask(am);
        const auto b = oracle::from_mask(bm);
        if (a.size() < 3 || a.size() != b.size() || !a.contains(0) || !a.contains(ell) || !b.contains(0)) continue;
        if (std::gcd(offset_gcd(a), offset_gcd(b)) != 1) continue;
        ++expected;
      }
    }
  }
  CHECK(results.size() == expected);
}

TEST_CASE("classical chain at s = 0, K = 2 against direct sumsets") {
  const auto results = enumerate_and_verify(line_spec(Proposition::main_prop_sum, 8));
  for (const auto& r : results) {
    const auto inst = materialize_instance(r.instance_key);
    const auto n = static_cast<std::int64_t>(inst.a.size());
    const auto direct = static_cast<double>(complete_sumset(inst.a, inst.b).size());
    CHECK(direct == r.measured);
    if (inst.size >= 2 * n - 6) CHECK(direct >= (kTheta + 1) * n - 4 - kTheta - kVerifierSlack);
  }
}

TEST_CASE("difference form reflects A") {
  const auto results = enumerate_and_verify(line_spec(Proposition::main_prop_difference, 8));
  CHECK(!results.empty());
  for (const auto& r : results) {
    CHECK(r.pass);
    const auto inst = materialize_instance(r.instance_key);
    const auto diff = restricted_difference(inst.a, PairRelation::full(inst.a.size(), inst.a.size()));
    CHECK(static_cast<double>(diff.size()) == r.measured);
  }
}

TEST_CASE("kneser-theta skips instances whose restricted sumset is complete") {
  InstanceSpec spec;
  spec.prop = Proposition::kneser_theta;
  spec.size_min = 6;
  spec.size_max = 6;
  const auto full = enumerate_and_verify(spec, nullptr);
  CHECK(full.checked == 0);
  CHECK(full.skipped > 0);
  spec.s_values = {1};
  spec.samples = 8;
  spec.n_min = 3;
  spec.n_max = 3;
  for (const auto& r : enumerate_and_verify(spec)) {
    CHECK(r.pass);
    const auto inst = materialize_instance(r.instance_key);
    CHECK(cyclic_restricted_sumset(inst.a, inst.b, inst.gamma, 6) != cyclic_sumset(inst.a, inst.b, 6));
  }
}

TEST_CASE("kneser-3 in Z/5Z with sampled defects passes") {
  InstanceSpec spec;
  spec.prop = Proposition::kneser_three;
  spec.size_min = 5;
  spec.size_max = 5;
  spec.s_values = {1};
  spec.k_values = {Rational(2)};
  spec.samples = 64;
  const auto summary = enumerate_and_verify(spec, nullptr);
  CHECK(summary.violations == 0);
  CHECK(summary.checked > 0);
  CHECK(summary.rejected_samples == 0);
}

TEST_CASE("lab kernels agree with the library on sampled instances") {
  InstanceSpec spec;
  spec.prop = Proposition::main_prop_sum;
  spec.size_max = 6;
  spec.s_values = {1, 2};
  spec.k_values = {Rational(2), Rational(3)};
  spec.samples = 16;
  spec.seed = 5;
  for (const auto& r : enumerate_and_verify(spec)) {
    const auto inst = materialize_instance(r.instance_key);
    REQUIRE(inst.sample_seed);
    CHECK(check_regular(inst.a, inst.b, inst.gamma, inst.k, inst.s).regular);
    CHECK(inst.measured == r.measured);
    CHECK(inst.bound == r.bound);
  }
  spec.prop = Proposition::kneser_theta;
  spec.size_max = 5;
  for (const auto& r : enumerate_and_verify(spec)) {
    const auto inst = materialize_instance(r.instance_key);
    CHECK(check_regular_cyclic(inst.a, inst.b, inst.gamma, inst.size, inst.k, inst.s).regular);
    CHECK(inst.measured == r.measured);
  }
}

TEST_CASE("results do not depend on the worker count") {
  InstanceSpec spec;
  spec.prop = Proposition::main_prop_sum;
  spec.size_max = 7;
  spec.s_values = {0, 1};
  spec.samples = 4;
  spec.seed = 99;
  const auto one = enumerate_and_verify(spec, 1);
  const auto three = enumerate_and_verify(spec, 3);
  CHECK(same(one, three));
  spec.seed = 100;
  CHECK_FALSE(same(one, enumerate_and_verify(spec, 2)));
}

TEST_CASE("budget is enforced") {
  auto spec = line_spec(Proposition::main_prop_sum, 12);
  CHECK(estimate_work(spec) > 1000);
  CHECK_THROWS_AS(enumerate_and_verify(spec, nullptr, 1, 1000), BudgetExceeded);
  spec.size_max = 40;
  CHECK_THROWS_AS(estimate_work(spec), BudgetExceeded);
}

TEST_CASE("sample_regular_relation") {
  const auto a = IntSet::interval(0, 9);
  CHECK(sample_regular_relation(a, a, Rational(3), 0, 1).is_full());
  const auto g1 = sample_regular_relation(a, a, Rational(3), 2, 1);
  CHECK(g1 == sample_regular_relation(a, a, Rational(3), 2, 1));
  CHECK(check_regular(a, a, g1, Rational(3), 2).regular);
  CHECK_FALSE(g1.is_full());
  CHECK_THROWS_AS(sample_regular_relation({0, 1}, {0, 1}, Rational(2), 3, 1), PreconditionViolated);

  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 400; ++trial) {
    const auto x = oracle::random_set(rng, -20, 20, 1 + rng() % 12);
    const auto y = oracle::random_set(rng, -20, 20, 1 + rng() % 12);
    const auto s = static_cast<std::int64_t>(rng() % (std::min(x.size(), y.size()) + 1));
    const Rational k(1 + static_cast<std::int64_t>(rng() % 6), 1 + static_cast<std::int64_t>(rng() % 2));
    const auto g = sample_regular_relation(x, y, k, s, rng());
    CHECK(g.max_defect() <= s);
    CHECK(check_regular(x, y, g, k, s).regular);
    const std::int64_t m = 3 + static_cast<std::int64_t>(rng() % 10);
    const auto sx = reduce_residues(x, m);
    const auto sy = reduce_residues(y, m);
    const auto sc = std::min<std::int64_t>(s, static_cast<std::int64_t>(std::min(sx.size(), sy.size())));
    const auto gc = sample_regular_relation_cyclic(sx, sy, m, k, sc, rng());
    CHECK(check_regular_cyclic(sx, sy, gc, m, k, sc).regular);
  }
}

TEST_CASE("extremal_search") {
  SUBCASE("exhaustive minimum slack is non-negative and sorted") {
    const auto ranked = extremal_search(line_spec(Proposition::main_prop_sum, 8), 10'000'000, 25);
    REQUIRE(ranked.size() == 25);
    CHECK(ranked.front().slack >= 0.0);
    for (std::size_t i = 1; i < ranked.size(); ++i) CHECK(ranked[i - 1].slack <= ranked[i].slack);
    const auto all = enumerate_and_verify(line_spec(Proposition::main_prop_sum, 8));
    double best = 1e300;
    for (const auto& r : all) best = std::min(best, r.slack);
    CHECK(ranked.front().slack == best);
  }
  SUBCASE("Pollard intervals meet the bound with equality") {
    InstanceSpec spec;
    spec.prop = Proposition::pollard;
    spec.family = InstanceFamily::intervals;
    spec.size_min = 1;
    spec.size_max = 20;
    spec.n_min = 1;
    const auto ranked = extremal_search(spec, 1'000'000, 10'000);
    CHECK(!ranked.empty());
    for (const auto& r : ranked) CHECK(r.slack == 0.0);
  }
  SUBCASE("empty range") {
    auto spec = line_spec(Proposition::main_prop_sum, 4);
    spec.size_min = 5;
    CHECK(extremal_search(spec, 1000).empty());
  }
  SUBCASE("random mode is deterministic") {
    auto spec = line_spec(Proposition::main_prop_sum, 20);
    spec.seed = 3;
    const auto x = extremal_search(spec, 2000, 10, 1);
    const auto y = extremal_search(spec, 2000, 10, 2);
    CHECK(x.size() == 10);
    CHECK(same(x, y));
    for (const auto& r : x) CHECK(r.pass);
  }
  CHECK_THROWS_AS(extremal_search(line_spec(Proposition::main_prop_sum, 4), 0), PreconditionViolated);
}

TEST_CASE("materialize_instance rejects malformed keys") {
  CHECK_THROWS_AS(materialize_instance("nonsense"), InputError);
  CHECK_THROWS_AS(materialize_instance("main-prop-a+b/l=x/A=0.1"), InputError);
  CHECK_THROWS_AS(materialize_instance("main-prop-a+b/l=3/A=0.1.3"), InputError);
  const auto inst = materialize_instance("pollard/l=2/A=0.1.2/B=0.1.2/t=2");
  CHECK(inst.measured == 8.0);
  CHECK(inst.bound == 8.0);
}
