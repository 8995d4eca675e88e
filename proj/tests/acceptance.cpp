// Acceptance runner: one PASS/FAIL line per criterion.
#include "freiman/bounds.hpp"
#include "freiman/cli.hpp"
#include "freiman/continuous.hpp"
#include "freiman/lab.hpp"
#include "freiman/recovery.hpp"
#include "freiman/regularity.hpp"
#include "freiman/sumset.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace freiman;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Runs one criterion; the time limit is part of the verdict.
bool criterion(int id, double limit_seconds, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = seconds_since(t0);
  const bool in_time = elapsed < limit_seconds;
  const bool pass = v.pass && in_time;
  std::printf("%s criterion %d (%.2fs, limit %.0fs): %s%s\n", pass ? "PASS" : "FAIL", id, elapsed, limit_seconds,
              v.detail.c_str(), in_time ? "" : " [over time limit]");
  std::fflush(stdout);
  return pass;
}

std::string summary_text(const VerifySummary& s) {
  std::ostringstream o;
  o << "instances=" << s.instances << " checked=" << s.checked << " skipped=" << s.skipped
    << " samples=" << s.samples << " rejected=" << s.rejected_samples << " violations=" << s.violations;
  if (s.worst) o << " worst_slack=" << s.worst->slack << " at " << s.worst->instance_key;
  return o.str();
}

Verdict exhaustive_line(Proposition prop) {
  InstanceSpec spec;
  spec.prop = prop;
  spec.size_max = 12;
  spec.k_values = {Rational(2)};
  spec.s_values = {0};
  const auto s = enumerate_and_verify(spec, nullptr);
  return {s.violations == 0 && s.rejected_samples == 0 && s.checked > 0, summary_text(s)};
}

Verdict sampled_line() {
  std::string detail;
  bool ok = true;
  for (auto prop : {Proposition::main_prop_sum, Proposition::main_prop_difference}) {
    InstanceSpec spec;
    spec.prop = prop;
    spec.size_max = 10;
    spec.k_values = {Rational(2), Rational(3)};
    spec.s_values = {1, 2};
    spec.samples = 256;
    spec.seed = 1;
    const auto s = enumerate_and_verify(spec, nullptr);
    ok = ok && s.violations == 0 && s.rejected_samples == 0 && s.checked > 0;
    detail += to_string(prop) + ": " + summary_text(s) + "; ";
  }
  return {ok, detail};
}

Verdict kneser() {
  std::string detail;
  bool ok = true;
  for (auto prop : {Proposition::kneser_theta, Proposition::kneser_three}) {
    InstanceSpec spec;
    spec.prop = prop;
    spec.size_min = 1;
    spec.size_max = 9;
    spec.k_values = {Rational(2), Rational(3)};
    spec.s_values = {0, 1};
    spec.samples = 64;
    spec.seed = 1;
    const auto s = enumerate_and_verify(spec, nullptr);
    ok = ok && s.violations == 0 && s.rejected_samples == 0 && s.checked > 0;
    detail += to_string(prop) + ": " + summary_text(s) + "; ";
  }
  return {ok, detail};
}

Verdict pollard_family() {
  std::int64_t equalities = 0;
  for (std::int64_t n = 1; n <= 50; ++n) {
    const auto a = IntSet::interval(0, n - 1);
    for (std::int64_t t = 0; t <= n; ++t) {
      if (pollard_partial_sum(a, a, t) != pollard_bound(n, t)) return {false, "equality fails at n=" + std::to_string(n)};
      ++equalities;
    }
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto n = 1 + static_cast<std::size_t>(rng() % 30);
    const auto span = static_cast<std::int64_t>(n + rng() % (3 * n + 1));
    const auto a = oracle::random_set(rng, 0, span, n);
    const auto b = oracle::random_set(rng, -span, span, n);
    const auto t = static_cast<std::int64_t>(rng() % (n + 1));
    const auto nn = static_cast<std::int64_t>(n);
    if (pollard_partial_sum(a, b, t) < pollard_bound(nn, t)) return {false, "random instance below t(2n - t)"};
    if (pollard_partial_sum(a, b, t) != oracle::pollard(a, b, t)) return {false, "oracle disagreement"};
  }
  return {true, std::to_string(equalities) + " interval equalities, 10000 random instances above t(2n - t)"};
}

// Independent Bernoulli exclusions drawn by geometric skipping.
PairRelation sparse_defects(std::size_t n, double rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::geometric_distribution<std::uint64_t> gap(rate);
  std::vector<PairRelation::IndexPair> out;
  const std::uint64_t cells = static_cast<std::uint64_t>(n) * n;
  for (std::uint64_t pos = gap(rng); pos < cells; pos += 1 + gap(rng)) {
    out.emplace_back(static_cast<std::uint32_t>(pos / n), static_cast<std::uint32_t>(pos % n));
  }
  return PairRelation::excluding(n, n, std::move(out));
}

Verdict additive_end_to_end() {
  const auto a = IntSet::interval(0, 9999);
  const Rational eps(1, 10000);
  const ArithProgression whole(0, 1, 10000);
  const auto clean = recover_additive(a, a, PairRelation::full(a.size(), a.size()), eps);
  if (!clean.hypothesis_certified || !clean.conclusion_certified || !(clean.p == whole) || !clean.q ||
      !(*clean.q == whole)) {
    return {false, "full Gamma run not certified with P = Q = {0..9999}"};
  }
  const auto defective = sparse_defects(a.size(), 0.005, 11);
  const auto augmented = augment_relation(a, a, defective, Rational(2));
  const auto noisy = recover_additive(a, a, augmented, eps);
  std::ostringstream o;
  o << "full: P=Q={0..9999} certified; defects: excluded " << defective.missing() << " pairs, "
    << augmented.missing() << " after augmentation, P=[" << noisy.p.start() << "," << noisy.p.last() << "]/"
    << noisy.p.difference() << " hypothesis=" << noisy.hypothesis_certified
    << " conclusion=" << noisy.conclusion_certified;
  return {noisy.conclusion_certified, o.str()};
}

Verdict maximality() {
  std::ostringstream o;
  for (std::size_t n = 1; n <= 7; ++n) {
    Rational best(-1);
    std::vector<IntSet> maximizers;
    for (std::uint32_t mask = 0; mask < (1U << 9); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != n) continue;
      const auto s = oracle::from_mask(mask).translated(-4);
      const Rational c(oracle::triple(s), static_cast<std::int64_t>(n * n));
      if (triple_count(s).c != c) return {false, "triple_count disagrees with brute force"};
      if (c > best) {
        best = c;
        maximizers.clear();
      }
      if (c == best) maximizers.push_back(s);
    }
    bool covered = false;
    for (const auto& s : maximizers) {
      const auto r = recover_centred(s, Rational(1, 100));
      if (r.p.is_centred() && r.coverage_a == static_cast<std::int64_t>(n)) {
        covered = true;
        break;
      }
    }
    if (!covered) return {false, "no maximizer covered for n=" + std::to_string(n)};
    o << "n=" << n << ":max C=" << to_string(best) << " ";
  }
  for (std::int64_t m = 0; m <= 100; ++m) {
    const Rational expected = Rational(3, 4) + Rational(1, 4 * (2 * m + 1) * (2 * m + 1));
    if (triple_count(IntSet::interval(-m, m)).c != expected) return {false, "closed form fails at m=" + std::to_string(m)};
  }
  o << "; closed form exact for m<=100";
  return {true, o.str()};
}

Verdict centred_deletions() {
  const auto full = IntSet::interval(-1000, 1000);
  std::ostringstream o;
  bool ok = true;
  double worst_seed_time = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> pool(1000);
    for (std::int64_t x = 1; x <= 1000; ++x) pool[static_cast<std::size_t>(x - 1)] = x;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::set<std::int64_t> removed;
    for (std::size_t k = 0; k < 10; ++k) {
      removed.insert(pool[k]);
      removed.insert(-pool[k]);
    }
    const auto a = full.filtered([&](std::int64_t x) { return removed.count(x) == 0; });
    const auto r = recover_centred(a, Rational(1, 1000));
    const double n = static_cast<double>(a.size());
    const bool seed_ok = r.p.is_centred() && static_cast<double>(r.coverage_a) >= 0.99 * n &&
                         static_cast<double>(r.p.count()) <= 1.05 * n;
    worst_seed_time = std::max(worst_seed_time, seconds_since(t0));
    ok = ok && seed_ok;
    o << "seed " << seed << ": |A|=" << a.size() << " |P|=" << r.p.count() << " cov=" << r.coverage_a
      << (seed_ok ? "" : " FAIL") << "; ";
  }
  ok = ok && worst_seed_time < 5.0;
  o << "slowest seed " << worst_seed_time << "s";
  return {ok, o.str()};
}

Verdict continuous_oracle() {
  const auto centred = IntervalUnion::single(Exact(-1, 2), Exact(1, 2));
  if (triple_correlation(centred, centred, centred) != Exact(3, 4)) return {false, "centred interval is not 3/4"};
  std::mt19937_64 rng(9);
  Exact closest(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_union(rng, 6, 1 + static_cast<std::int64_t>(rng() % 5));
    const auto lambda = measure(a);
    const auto t = triple_correlation(a, a, a);
    if (t > Exact(3, 4) * lambda * lambda) return {false, "Riesz-Sobolev bound exceeded"};
    closest = std::min(closest, Exact(3, 4) - t / (lambda * lambda));
  }
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_union(rng, 3, 4);
    const auto b = oracle::random_union(rng, 3, 4);
    const auto c = oracle::random_union(rng, 3, 4);
    // Grid aligned with the quarter lattice, where the convolution is linear per step.
    const double err = std::abs(triple_correlation(a, b, c).convert_to<double>() - oracle::quadrature_triple(a, b, c, 4000));
    worst = std::max(worst, err);
  }
  std::ostringstream o;
  o << "3/4 exact; 1000 unions within the bound (smallest normalized gap " << closest.convert_to<double>()
    << "); quadrature max error " << worst;
  return {worst <= 1e-6, o.str()};
}

Verdict interval_pipeline() {
  const auto a = IntervalUnion::single(Exact(-1, 2), Exact(1, 2));
  const auto r = recover_interval(a, Rational(1, 10000), Exact(1, 100), Exact(1, 100));
  const auto& j = r.j;
  const bool centred = j.size() == 1 && j.intervals()[0].lo == -j.intervals()[0].hi;
  std::ostringstream o;
  o << "J=" << (j.empty() ? std::string("{}") : "(" + to_string(j.intervals()[0].lo) + "," + to_string(j.intervals()[0].hi) + ")")
    << " length_ratio=" << to_string(r.length_ratio) << " coverage=" << to_string(r.coverage_ratio)
    << " symdiff=" << to_string(r.discretization.symmetric_difference);
  return {centred && r.length_ratio <= Exact(102, 100) && r.coverage_ratio >= Exact(98, 100) &&
              r.discretization.symmetric_difference == 0,
          o.str()};
}

std::string run_job(cli::JobConfig c, unsigned workers, bool stamped) {
  c.workers = workers;
  c.no_timestamp = !stamped;
  std::ostringstream out;
  std::ostringstream err;
  if (cli::run(c, out, err) != cli::kExitOk) throw std::runtime_error("job failed: " + err.str());
  if (!stamped) return out.str();
  // Drop the generated line.
  std::istringstream in(out.str());
  std::string kept;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("{\"generated\"", 0) == 0 || line.rfind("# generated=", 0) == 0) continue;
    kept += line + '\n';
  }
  return kept;
}

Verdict determinism() {
  std::vector<cli::JobConfig> jobs;
  cli::JobConfig v;
  v.command = "verify";
  v.prop = "main-prop-a+b";
  v.lmax = 9;
  v.k = {"2", "3"};
  v.s = {0, 1, 2};
  v.samples = 8;
  v.seed = 42;
  v.format = "csv";
  jobs.push_back(v);
  v.prop = "kneser-theta";
  v.lmax = 7;
  v.s = {1};
  v.format = "json";
  jobs.push_back(v);
  cli::JobConfig s;
  s.command = "search";
  s.prop = "main-prop-a-a";
  s.lmax = 24;
  s.budget = 3000;
  s.seed = 7;
  jobs.push_back(s);
  s.lmax = 9;
  s.budget = 10'000'000;
  s.format = "csv";
  jobs.push_back(s);
  std::size_t bytes = 0;
  for (const auto& job : jobs) {
    const auto reference = run_job(job, 1, false);
    bytes += reference.size();
    for (unsigned w : {1U, 2U, 4U, 8U}) {
      if (run_job(job, w, false) != reference) return {false, "bytes differ at " + std::to_string(w) + " workers"};
    }
    if (run_job(job, 3, true) != reference) return {false, "bytes differ once the timestamp line is removed"};
  }
  return {true, std::to_string(jobs.size()) + " jobs, " + std::to_string(bytes) +
                    " bytes in total, identical at 1/2/4/8 workers and with timestamps stripped"};
}

}  // namespace

int main() {
  int failures = 0;
  failures += !criterion(1, 60, [] { return exhaustive_line(Proposition::main_prop_sum); });
  failures += !criterion(2, 60, [] { return exhaustive_line(Proposition::main_prop_difference); });
  failures += !criterion(3, 600, sampled_line);
  failures += !criterion(4, 600, kneser);
  failures += !criterion(5, 30, pollard_family);
  failures += !criterion(6, 10, additive_end_to_end);
  failures += !criterion(7, 60, maximality);
  failures += !criterion(8, 50, centred_deletions);
  failures += !criterion(9, 120, continuous_oracle);
  failures += !criterion(10, 5, interval_pipeline);
  failures += !criterion(11, 600, determinism);
  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
