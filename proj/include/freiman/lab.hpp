#pragma once

#include "freiman/int_set.hpp"
#include "freiman/pair_relation.hpp"
#include "freiman/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace freiman {

enum class Proposition { main_prop_sum, main_prop_difference, kneser_theta, kneser_three, pollard };

/// "main-prop-a+b", "main-prop-a-a", "kneser-theta", "kneser-3", "pollard".
std::string to_string(Proposition prop);
/// Throws InputError for unknown names.
Proposition parse_proposition(const std::string& name);

enum class InstanceMode { integer_line, cyclic_group };
InstanceMode mode_of(Proposition prop);

/// Which sets are enumerated: every canonical instance, or only A = B = {0..ell}.
enum class InstanceFamily { all, intervals };

/// Search space for the lab.
///
/// Integer-line instances are canonical: A, B within {0..ell} with 0, ell in A,
/// 0 in B, gcd(A u B) = 1 and |A| = |B|. Cyclic instances are taken up to
/// translation (0 in A and 0 in B) with |A| <= |B|. For the difference forms
/// B is ell - A (line) or -A (cyclic).
struct InstanceSpec {
  Proposition prop = Proposition::main_prop_sum;
  InstanceFamily family = InstanceFamily::all;
  /// ell range (line) or modulus range (cyclic).
  std::int64_t size_min = 1;
  std::int64_t size_max = 12;
  /// 0 picks the default: 3 on the integer line, 1 in Z/mZ.
  std::int64_t n_min = 0;
  std::int64_t n_max = 64;
  /// K values; empty means the grid {2, 3, ceil(n/4), ceil(n/2)}.
  std::vector<Rational> k_values;
  std::vector<std::int64_t> s_values{0};
  /// Gamma samples per (A, B, K, s); 0 means Gamma = A x B.
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// One bound evaluation. slack = measured - bound; pass iff slack >= -1e-9.
struct BoundResult {
  std::string instance_key;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = true;
};

struct VerifySummary {
  /// (A, B) pairs considered.
  std::uint64_t instances = 0;
  /// BoundResults emitted.
  std::uint64_t checked = 0;
  /// (A, B, K, s) combinations dropped because no sample met the proposition's hypothesis.
  std::uint64_t skipped = 0;
  /// Gamma samples evaluated.
  std::uint64_t samples = 0;
  /// Samples that failed the regularity post-check (expected 0).
  std::uint64_t rejected_samples = 0;
  std::uint64_t violations = 0;
  std::optional<BoundResult> worst;
};

using ResultSink = std::function<void(const BoundResult&)>;

/// K values used for an instance of size n.
std::vector<Rational> k_grid(const InstanceSpec& spec, std::int64_t n);

/// Upper estimate of the evaluations enumerate_and_verify would perform.
std::uint64_t estimate_work(const InstanceSpec& spec);

/// Evaluates the proposition's bound on every instance of the spec. Results
/// reach the sink in canonical order regardless of the worker count. One
/// result is emitted per (A, B, K, s[, t]) holding the worst Gamma sample.
/// Throws BudgetExceeded if estimate_work(spec) > budget.
VerifySummary enumerate_and_verify(const InstanceSpec& spec, const ResultSink& sink, unsigned workers = 1,
                                   std::uint64_t budget = 2'000'000'000ULL);
std::vector<BoundResult> enumerate_and_verify(const InstanceSpec& spec, unsigned workers = 1);

/// Minimum-slack results, ascending by slack (ties in canonical order), at most
/// `keep` of them. Exhaustive when the work fits the budget, otherwise `budget`
/// seeded random draws from the spec.
std::vector<BoundResult> extremal_search(const InstanceSpec& spec, std::uint64_t budget, std::size_t keep = 20,
                                         unsigned workers = 1);

/// A Gamma that is (K, s)-regular for A +_Gamma B, deterministic in seed:
/// up to s random removals per row (never exceeding s per column), then for each
/// uncovered x with r(x) >= K the lowest-index representing pair is restored.
PairRelation sample_regular_relation(const IntSet& a, const IntSet& b, const Rational& k, std::int64_t s,
                                     std::uint64_t seed);
/// Same in Z/mZ for residue sets.
PairRelation sample_regular_relation_cyclic(const IntSet& a, const IntSet& b, std::int64_t m, const Rational& k,
                                            std::int64_t s, std::uint64_t seed);

/// Full data of an instance reconstructed from its key.
struct MaterializedInstance {
  Proposition prop = Proposition::main_prop_sum;
  InstanceMode mode = InstanceMode::integer_line;
  /// ell or m.
  std::int64_t size = 0;
  IntSet a;
  IntSet b;
  PairRelation gamma;
  Rational k{0};
  std::int64_t s = 0;
  std::optional<std::int64_t> t;
  std::optional<std::uint64_t> sample_seed;
  /// Recomputed measured value and bound for the key.
  double measured = 0.0;
  double bound = 0.0;
};

/// Throws InputError for malformed keys.
MaterializedInstance materialize_instance(const std::string& key);

}  // namespace freiman
