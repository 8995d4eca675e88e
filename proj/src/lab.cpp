#include "freiman/lab.hpp"

#include "freiman/bounds.hpp"
#include "freiman/errors.hpp"
#include "freiman/sumset.hpp"
#include "regular_sampler.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace freiman {

namespace {

constexpr std::int64_t kMaxLineEll = 30;
constexpr std::int64_t kMaxModulus = 31;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (auto p : parts) h = splitmix64(h ^ p);
  return h;
}

bool is_difference_form(Proposition p) {
  return p == Proposition::main_prop_difference || p == Proposition::kneser_three;
}

bool needs_restricted_difference_from_full(Proposition p) {
  return p == Proposition::kneser_theta || p == Proposition::kneser_three;
}

std::int64_t effective_n_min(const InstanceSpec& spec) {
  if (spec.n_min > 0) return spec.n_min;
  return mode_of(spec.prop) == InstanceMode::integer_line ? 3 : 1;
}

std::int64_t mask_gcd(std::uint64_t mask) {
  std::int64_t g = 0;
  while (mask != 0) {
    g = std::gcd(g, static_cast<std::int64_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return g;
}

std::string mask_list(std::uint64_t mask) {
  std::string out;
  while (mask != 0) {
    if (!out.empty()) out += '.';
    out += std::to_string(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t reflect_mask(std::uint64_t mask, std::int64_t ell) {
  std::uint64_t out = 0;
  for (std::int64_t v = 0; v <= ell; ++v) {
    if ((mask >> v) & 1U) out |= std::uint64_t{1} << (ell - v);
  }
  return out;
}

std::uint64_t negate_mask(std::uint64_t mask, std::int64_t m) {
  std::uint64_t out = 0;
  for (std::int64_t v = 0; v < m; ++v) {
    if ((mask >> v) & 1U) out |= std::uint64_t{1} << ((m - v) % m);
  }
  return out;
}

// Sets as bit masks over a universe of at most 32 values. Satisfies the
// sampler's context interface.
struct SmallScene {
  bool cyclic = false;
  int modulus = 0;
  int na = 0;
  int nb = 0;
  int range = 0;
  int b_top = 0;
  std::array<int, 32> a{};
  std::array<int, 32> b{};
  std::array<int, 32> b_index{};
  std::array<std::int64_t, 64> reps{};
  int complete_size = 0;

  std::uint32_t rows() const { return static_cast<std::uint32_t>(na); }
  std::uint32_t cols() const { return static_cast<std::uint32_t>(nb); }
  std::size_t sum_range() const { return static_cast<std::size_t>(range); }
  std::size_t sum_index(std::uint32_t i, std::uint32_t j) const {
    int x = a[i] + b[j];
    if (cyclic && x >= modulus) x -= modulus;
    return static_cast<std::size_t>(x);
  }
  std::int64_t rep(std::size_t x) const { return reps[x]; }
  std::int64_t partner(std::uint32_t i, std::size_t x) const {
    int v = static_cast<int>(x) - a[i];
    if (cyclic) {
      if (v < 0) v += modulus;
    } else if (v < 0 || v > b_top) {
      return -1;
    }
    return b_index[static_cast<std::size_t>(v)];
  }
};

SmallScene make_scene(std::uint64_t amask, std::uint64_t bmask, bool cyclic, int size) {
  SmallScene sc;
  sc.cyclic = cyclic;
  sc.modulus = cyclic ? size : 0;
  sc.b_index.fill(-1);
  for (auto m = amask; m != 0; m &= m - 1) sc.a[static_cast<std::size_t>(sc.na++)] = std::countr_zero(m);
  for (auto m = bmask; m != 0; m &= m - 1) {
    const int v = std::countr_zero(m);
    sc.b_index[static_cast<std::size_t>(v)] = sc.nb;
    sc.b[static_cast<std::size_t>(sc.nb++)] = v;
  }
  sc.b_top = sc.nb > 0 ? sc.b[static_cast<std::size_t>(sc.nb - 1)] : 0;
  sc.range = cyclic ? size : (sc.na > 0 ? sc.a[static_cast<std::size_t>(sc.na - 1)] : 0) + sc.b_top + 1;
  for (int i = 0; i < sc.na; ++i) {
    for (int j = 0; j < sc.nb; ++j) ++sc.reps[sc.sum_index(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j))];
  }
  for (int x = 0; x < sc.range; ++x) sc.complete_size += sc.reps[static_cast<std::size_t>(x)] > 0 ? 1 : 0;
  return sc;
}

struct Block {
  std::int64_t size = 0;
  std::uint64_t a_mask = 0;
};

struct Partial {
  std::uint64_t instances = 0;
  std::uint64_t samples = 0;
  std::uint64_t rejected = 0;
  std::uint64_t skipped = 0;
};

class Evaluator {
 public:
  explicit Evaluator(const InstanceSpec& spec) : spec_(spec), mode_(mode_of(spec.prop)), n_min_(effective_n_min(spec)) {}

  std::int64_t n_min() const { return n_min_; }

  // All B masks paired with one A mask, in ascending mask order.
  void evaluate_block(const Block& block, std::vector<BoundResult>& out, Partial& partial) const {
    const auto n = std::popcount(block.a_mask);
    if (is_difference_form(spec_.prop)) {
      const auto bmask = mode_ == InstanceMode::integer_line ? reflect_mask(block.a_mask, block.size)
                                                             : negate_mask(block.a_mask, block.size);
      evaluate_pair(block.size, block.a_mask, bmask, out, partial);
      return;
    }
    if (spec_.family == InstanceFamily::intervals) {
      evaluate_pair(block.size, block.a_mask, block.a_mask, out, partial);
      return;
    }
    if (mode_ == InstanceMode::integer_line) {
      const std::int64_t ga = mask_gcd(block.a_mask);
      const int k = n - 1;
      const std::uint64_t limit = std::uint64_t{1} << block.size;
      for (std::uint64_t c = (std::uint64_t{1} << k) - 1; c < limit; c = next_combination(c)) {
        const std::uint64_t bmask = 1U | (c << 1);
        if (std::gcd(ga, mask_gcd(bmask)) == 1) evaluate_pair(block.size, block.a_mask, bmask, out, partial);
        if (c == 0) break;
      }
      return;
    }
    const std::uint64_t half = std::uint64_t{1} << (block.size - 1);
    for (std::uint64_t mid = 0; mid < half; ++mid) {
      const std::uint64_t bmask = 1U | (mid << 1);
      if (std::popcount(bmask) >= n) evaluate_pair(block.size, block.a_mask, bmask, out, partial);
    }
  }

  void evaluate_pair(std::int64_t size, std::uint64_t amask, std::uint64_t bmask, std::vector<BoundResult>& out,
                     Partial& partial) const {
    ++partial.instances;
    const auto scene = make_scene(amask, bmask, mode_ == InstanceMode::cyclic_group, static_cast<int>(size));
    const std::int64_t n = scene.na;
    std::string prefix = to_string(spec_.prop) + (mode_ == InstanceMode::integer_line ? "/l=" : "/m=") +
                         std::to_string(size) + "/A=" + mask_list(amask);
    if (!is_difference_form(spec_.prop)) prefix += "/B=" + mask_list(bmask);

    if (spec_.prop == Proposition::pollard) {
      for (std::int64_t t = 0; t <= n; ++t) {
        std::int64_t sum = 0;
        for (int x = 0; x < scene.range; ++x) sum += std::min(scene.reps[static_cast<std::size_t>(x)], t);
        emit(out, prefix + "/t=" + std::to_string(t), static_cast<double>(sum),
             static_cast<double>(pollard_bound(n, t)));
      }
      return;
    }

    detail::SamplerScratch scratch;
    for (const auto& k : k_grid(spec_, n)) {
      for (auto s : spec_.s_values) {
        const double bound = bound_for(size, n, k, s);
        const bool sampled = spec_.samples > 0 && s > 0;
        // A defect bound above |A| has no sampled instances.
        if (sampled && s > n) continue;
        const std::int64_t sample_count = sampled ? spec_.samples : 1;
        std::optional<std::int64_t> worst;
        std::uint64_t worst_seed = 0;
        for (std::int64_t q = 0; q < sample_count; ++q) {
          ++partial.samples;
          std::int64_t restricted = scene.complete_size;
          std::uint64_t seed = 0;
          if (sampled) {
            seed = mix_seed({spec_.seed, static_cast<std::uint64_t>(spec_.prop), static_cast<std::uint64_t>(size),
                             amask, bmask, static_cast<std::uint64_t>(k.numerator()),
                             static_cast<std::uint64_t>(k.denominator()), static_cast<std::uint64_t>(s),
                             static_cast<std::uint64_t>(q)});
            detail::sample_excluded(scene, k, s, seed, scratch);
            if (!sample_is_regular(scene, scratch, k, s)) {
              ++partial.rejected;
              continue;
            }
            restricted = 0;
            for (int x = 0; x < scene.range; ++x) restricted += scratch.remaining[static_cast<std::size_t>(x)] > 0 ? 1 : 0;
          }
          if (needs_restricted_difference_from_full(spec_.prop) && restricted == scene.complete_size) continue;
          if (!worst || restricted < *worst) {
            worst = restricted;
            worst_seed = seed;
          }
        }
        if (!worst) {
          ++partial.skipped;
          continue;
        }
        std::string key = prefix + "/K=" + to_string(k) + "/s=" + std::to_string(s);
        if (sampled) key += "/seed=" + std::to_string(worst_seed);
        emit(out, std::move(key), static_cast<double>(*worst), bound);
      }
    }
  }

  double bound_for(std::int64_t size, std::int64_t n, const Rational& k, std::int64_t s) const {
    switch (spec_.prop) {
      case Proposition::main_prop_sum: return main_prop_sum_bound(size, n, k, s).value;
      case Proposition::main_prop_difference: return main_prop_difference_bound(size, n, k, s).value;
      case Proposition::kneser_theta: return kneser_theta_bound(n, k, s);
      case Proposition::kneser_three: return static_cast<double>(strict_integer_floor(kneser_three_bound(n, k, s)));
      case Proposition::pollard: break;
    }
    return 0.0;
  }

  static void emit(std::vector<BoundResult>& out, std::string key, double measured, double bound) {
    const double slack = measured - bound;
    out.push_back({std::move(key), measured, bound, slack, slack >= -kVerifierSlack});
  }

 private:
  static std::uint64_t next_combination(std::uint64_t c) {
    if (c == 0) return 0;
    const std::uint64_t low = c & (~c + 1);
    const std::uint64_t ripple = c + low;
    return ripple | (((c ^ ripple) >> 2) / low);
  }

  static bool sample_is_regular(const SmallScene& scene, const detail::SamplerScratch& sc, const Rational& k,
                                std::int64_t s) {
    std::array<std::int64_t, 32> row{};
    std::array<std::int64_t, 32> col{};
    for (auto [i, j] : sc.removed) {
      if (++row[i] > s || ++col[j] > s) return false;
    }
    const auto cutoff = detail::popular_cutoff(k);
    for (int x = 0; x < scene.range; ++x) {
      if (scene.reps[static_cast<std::size_t>(x)] >= cutoff && sc.remaining[static_cast<std::size_t>(x)] == 0) return false;
    }
    return true;
  }

  const InstanceSpec& spec_;
  InstanceMode mode_;
  std::int64_t n_min_;
};

void validate(const InstanceSpec& spec) {
  const auto mode = mode_of(spec.prop);
  if (mode == InstanceMode::integer_line && spec.size_max > kMaxLineEll) {
    throw BudgetExceeded("ell above " + std::to_string(kMaxLineEll) + " is beyond exhaustive range");
  }
  if (mode == InstanceMode::cyclic_group && spec.size_max > kMaxModulus) {
    throw BudgetExceeded("modulus above " + std::to_string(kMaxModulus) + " is beyond exhaustive range");
  }
  if (spec.samples < 0) throw PreconditionViolated("samples must be non-negative");
  for (auto s : spec.s_values) {
    if (s < 0) throw PreconditionViolated("s must be non-negative");
  }
}

std::vector<Block> make_blocks(const InstanceSpec& spec, std::int64_t n_min) {
  std::vector<Block> blocks;
  const auto mode = mode_of(spec.prop);
  const std::int64_t lo = std::max<std::int64_t>(spec.size_min, 1);
  for (std::int64_t size = lo; size <= spec.size_max; ++size) {
    const bool line = mode == InstanceMode::integer_line;
    if (spec.family == InstanceFamily::intervals) {
      const std::uint64_t full = line ? (std::uint64_t{1} << (size + 1)) - 1 : (std::uint64_t{1} << size) - 1;
      const auto n = std::popcount(full);
      if (n >= n_min && n <= spec.n_max) blocks.push_back({size, full});
      continue;
    }
    const std::int64_t free_bits = size - 1;
    for (std::uint64_t mid = 0; mid < (std::uint64_t{1} << free_bits); ++mid) {
      const std::uint64_t amask = line ? (1U | (mid << 1) | (std::uint64_t{1} << size)) : (1U | (mid << 1));
      const auto n = std::popcount(amask);
      if (n < n_min || n > spec.n_max) continue;
      if (spec.prop == Proposition::main_prop_difference && mask_gcd(amask) != 1) continue;
      blocks.push_back({size, amask});
    }
  }
  return blocks;
}

double binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

template <class Emit>
void run_blocks(const InstanceSpec& spec, const std::vector<Block>& blocks, unsigned workers, Partial& total,
                Emit emit) {
  const Evaluator evaluator(spec);
  workers = std::max(1U, workers);
  const std::size_t chunk = 64 * workers;
  for (std::size_t begin = 0; begin < blocks.size(); begin += chunk) {
    const std::size_t end = std::min(blocks.size(), begin + chunk);
    std::vector<std::vector<BoundResult>> results(end - begin);
    std::vector<Partial> partials(workers);
    std::atomic<std::size_t> next{begin};
    auto work = [&](unsigned w) {
      for (std::size_t b = next++; b < end; b = next++) evaluator.evaluate_block(blocks[b], results[b - begin], partials[w]);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    for (const auto& p : partials) {
      total.instances += p.instances;
      total.samples += p.samples;
      total.rejected += p.rejected;
      total.skipped += p.skipped;
    }
    for (auto& block_results : results) {
      for (auto& r : block_results) emit(r);
    }
  }
}

// Keeps the `keep` smallest (slack, arrival) results.
class TopResults {
 public:
  explicit TopResults(std::size_t keep) : keep_(keep) {}

  void offer(const BoundResult& r) {
    if (keep_ == 0) return;
    if (kept_.size() == keep_ && !(r.slack < kept_.back().slack)) return;
    auto pos = std::upper_bound(kept_.begin(), kept_.end(), r.slack,
                                [](double s, const BoundResult& x) { return s < x.slack; });
    kept_.insert(pos, r);
    if (kept_.size() > keep_) kept_.pop_back();
  }

  std::vector<BoundResult> take() { return std::move(kept_); }

 private:
  std::size_t keep_;
  std::vector<BoundResult> kept_;
};

std::optional<std::pair<Block, std::uint64_t>> random_instance(const InstanceSpec& spec, std::int64_t n_min,
                                                               std::mt19937_64& rng) {
  const auto mode = mode_of(spec.prop);
  const bool line = mode == InstanceMode::integer_line;
  const std::int64_t lo = std::max<std::int64_t>(spec.size_min, 1);
  if (lo > spec.size_max) return std::nullopt;
  for (int attempt = 0; attempt < 256; ++attempt) {
    const std::int64_t size = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(spec.size_max - lo + 1));
    const std::uint64_t free_mask = (std::uint64_t{1} << (size - 1)) - 1;
    std::uint64_t amask = 0;
    if (spec.family == InstanceFamily::intervals) {
      amask = line ? (std::uint64_t{1} << (size + 1)) - 1 : (std::uint64_t{1} << size) - 1;
    } else {
      const std::uint64_t mid = rng() & free_mask;
      amask = line ? (1U | (mid << 1) | (std::uint64_t{1} << size)) : (1U | (mid << 1));
    }
    const auto n = std::popcount(amask);
    if (n < n_min || n > spec.n_max) continue;
    if (is_difference_form(spec.prop) || spec.family == InstanceFamily::intervals) {
      if (spec.prop == Proposition::main_prop_difference && mask_gcd(amask) != 1) continue;
      return std::pair{Block{size, amask}, std::uint64_t{0}};
    }
    std::uint64_t bmask = 1;
    if (line) {
      // n - 1 distinct values from {1..ell}.
      std::vector<int> pool(static_cast<std::size_t>(size));
      std::iota(pool.begin(), pool.end(), 1);
      for (int i = 0; i < n - 1; ++i) {
        const auto r = static_cast<std::size_t>(i) + rng() % (pool.size() - static_cast<std::size_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[r]);
        bmask |= std::uint64_t{1} << pool[static_cast<std::size_t>(i)];
      }
      if (std::gcd(mask_gcd(amask), mask_gcd(bmask)) != 1) continue;
    } else {
      bmask = 1U | ((rng() & free_mask) << 1);
      if (std::popcount(bmask) < n) continue;
    }
    return std::pair{Block{size, amask}, bmask};
  }
  return std::nullopt;
}

struct LineContext {
  const IntSet& a;
  const IntSet& b;
  RepHistogram hist;

  std::uint32_t rows() const { return static_cast<std::uint32_t>(a.size()); }
  std::uint32_t cols() const { return static_cast<std::uint32_t>(b.size()); }
  std::size_t sum_range() const { return hist.support_size(); }
  std::size_t sum_index(std::uint32_t i, std::uint32_t j) const { return *hist.position(a[i] + b[j]); }
  std::int64_t rep(std::size_t x) const { return hist.entries()[x].r; }
  std::int64_t partner(std::uint32_t i, std::size_t x) const {
    auto j = b.index_of(hist.entries()[x].x - a[i]);
    return j ? static_cast<std::int64_t>(*j) : -1;
  }
};

struct CyclicContext {
  const IntSet& a;
  const IntSet& b;
  std::int64_t m;
  std::vector<std::int64_t> reps;

  std::uint32_t rows() const { return static_cast<std::uint32_t>(a.size()); }
  std::uint32_t cols() const { return static_cast<std::uint32_t>(b.size()); }
  std::size_t sum_range() const { return static_cast<std::size_t>(m); }
  std::size_t sum_index(std::uint32_t i, std::uint32_t j) const { return static_cast<std::size_t>((a[i] + b[j]) % m); }
  std::int64_t rep(std::size_t x) const { return reps[x]; }
  std::int64_t partner(std::uint32_t i, std::size_t x) const {
    auto j = b.index_of(((static_cast<std::int64_t>(x) - a[i]) % m + m) % m);
    return j ? static_cast<std::int64_t>(*j) : -1;
  }
};

}  // namespace

std::string to_string(Proposition prop) {
  switch (prop) {
    case Proposition::main_prop_sum: return "main-prop-a+b";
    case Proposition::main_prop_difference: return "main-prop-a-a";
    case Proposition::kneser_theta: return "kneser-theta";
    case Proposition::kneser_three: return "kneser-3";
    case Proposition::pollard: return "pollard";
  }
  return "unknown";
}

Proposition parse_proposition(const std::string& name) {
  for (auto p : {Proposition::main_prop_sum, Proposition::main_prop_difference, Proposition::kneser_theta,
                 Proposition::kneser_three, Proposition::pollard}) {
    if (to_string(p) == name) return p;
  }
  throw InputError("unknown proposition '" + name +
                   "' (expected main-prop-a+b, main-prop-a-a, kneser-theta, kneser-3 or pollard)");
}

InstanceMode mode_of(Proposition prop) {
  return prop == Proposition::kneser_theta || prop == Proposition::kneser_three ? InstanceMode::cyclic_group
                                                                                : InstanceMode::integer_line;
}

std::vector<Rational> k_grid(const InstanceSpec& spec, std::int64_t n) {
  std::vector<Rational> ks = spec.k_values;
  if (ks.empty()) ks = {Rational(2), Rational(3), Rational((n + 3) / 4), Rational((n + 1) / 2)};
  if (spec.prop == Proposition::main_prop_sum || spec.prop == Proposition::main_prop_difference) {
    std::erase_if(ks, [](const Rational& k) { return k < 2; });
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

std::uint64_t estimate_work(const InstanceSpec& spec) {
  validate(spec);
  const auto mode = mode_of(spec.prop);
  const std::int64_t n_min = effective_n_min(spec);
  const double per_combo = static_cast<double>(std::max<std::size_t>(spec.k_values.empty() ? 4 : spec.k_values.size(), 1)) *
                           static_cast<double>(std::max<std::size_t>(spec.s_values.size(), 1)) *
                           static_cast<double>(std::max<std::int64_t>(spec.samples, 1));
  double total = 0.0;
  for (std::int64_t size = std::max<std::int64_t>(spec.size_min, 1); size <= spec.size_max; ++size) {
    if (spec.family == InstanceFamily::intervals) {
      total += per_combo;
      continue;
    }
    for (std::int64_t n = std::max<std::int64_t>(n_min, 1); n <= std::min<std::int64_t>(spec.n_max, size + 1); ++n) {
      double pairs = 0.0;
      if (mode == InstanceMode::integer_line) {
        const double a_count = binom(size - 1, n - 2);
        pairs = is_difference_form(spec.prop) ? a_count : a_count * binom(size, n - 1);
        if (spec.prop == Proposition::pollard) pairs *= static_cast<double>(n + 1) / per_combo;
      } else {
        const double a_count = binom(size - 1, n - 1);
        double b_count = 0.0;
        for (std::int64_t nb = n; nb <= size; ++nb) b_count += binom(size - 1, nb - 1);
        pairs = is_difference_form(spec.prop) ? a_count : a_count * b_count;
      }
      total += pairs * per_combo;
    }
  }
  if (total >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    return std::numeric_limits<std::uint64_t>::max() / 2;
  }
  return static_cast<std::uint64_t>(std::ceil(total));
}

VerifySummary enumerate_and_verify(const InstanceSpec& spec, const ResultSink& sink, unsigned workers,
                                   std::uint64_t budget) {
  const auto work = estimate_work(spec);
  if (work > budget) {
    throw BudgetExceeded("instance space needs about " + std::to_string(work) + " evaluations, budget is " +
                         std::to_string(budget));
  }
  const auto blocks = make_blocks(spec, effective_n_min(spec));
  VerifySummary summary;
  Partial partial;
  run_blocks(spec, blocks, workers, partial, [&](const BoundResult& r) {
    ++summary.checked;
    if (!r.pass) ++summary.violations;
    if (!summary.worst || r.slack < summary.worst->slack) summary.worst = r;
    if (sink) sink(r);
  });
  summary.instances = partial.instances;
  summary.samples = partial.samples;
  summary.rejected_samples = partial.rejected;
  summary.skipped = partial.skipped;
  return summary;
}

std::vector<BoundResult> enumerate_and_verify(const InstanceSpec& spec, unsigned workers) {
  std::vector<BoundResult> out;
  enumerate_and_verify(spec, [&](const BoundResult& r) { out.push_back(r); }, workers);
  return out;
}

std::vector<BoundResult> extremal_search(const InstanceSpec& spec, std::uint64_t budget, std::size_t keep,
                                         unsigned workers) {
  if (budget == 0) throw PreconditionViolated("extremal_search requires a positive budget");
  TopResults top(keep);
  if (estimate_work(spec) <= budget) {
    enumerate_and_verify(spec, [&](const BoundResult& r) { top.offer(r); }, workers, budget);
    return top.take();
  }
  const Evaluator evaluator(spec);
  workers = std::max(1U, workers);
  const std::uint64_t chunk = 1024 * workers;
  for (std::uint64_t begin = 0; begin < budget; begin += chunk) {
    const std::uint64_t end = std::min(budget, begin + chunk);
    std::vector<std::vector<BoundResult>> results(end - begin);
    std::atomic<std::uint64_t> next{begin};
    auto work = [&]() {
      Partial partial;
      for (std::uint64_t d = next++; d < end; d = next++) {
        std::mt19937_64 rng(mix_seed({spec.seed, 0x5EA4C4ULL, d}));
        if (auto inst = random_instance(spec, evaluator.n_min(), rng)) {
          const auto& [block, bmask] = *inst;
          if (bmask == 0) {
            evaluator.evaluate_block(block, results[d - begin], partial);
          } else {
            evaluator.evaluate_pair(block.size, block.a_mask, bmask, results[d - begin], partial);
          }
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (const auto& rs : results) {
      for (const auto& r : rs) top.offer(r);
    }
  }
  return top.take();
}

PairRelation sample_regular_relation(const IntSet& a, const IntSet& b, const Rational& k, std::int64_t s,
                                     std::uint64_t seed) {
  if (s < 0) throw PreconditionViolated("sample_regular_relation: s must be non-negative");
  if (static_cast<std::size_t>(s) > std::min(a.size(), b.size())) {
    throw PreconditionViolated("sample_regular_relation: s exceeds min(|A|, |B|)");
  }
  if (a.empty() || b.empty()) return PairRelation::full(a.size(), b.size());
  const LineContext ctx{a, b, rep_histogram(a, b)};
  detail::SamplerScratch scratch;
  detail::sample_excluded(ctx, k, s, seed, scratch);
  return PairRelation::excluding(a.size(), b.size(), std::move(scratch.removed));
}

PairRelation sample_regular_relation_cyclic(const IntSet& a, const IntSet& b, std::int64_t m, const Rational& k,
                                            std::int64_t s, std::uint64_t seed) {
  if (s < 0) throw PreconditionViolated("sample_regular_relation: s must be non-negative");
  if (static_cast<std::size_t>(s) > std::min(a.size(), b.size())) {
    throw PreconditionViolated("sample_regular_relation: s exceeds min(|A|, |B|)");
  }
  if (a.empty() || b.empty()) return PairRelation::full(a.size(), b.size());
  CyclicContext ctx{a, b, m, std::vector<std::int64_t>(static_cast<std::size_t>(m), 0)};
  for (const auto& e : cyclic_rep_histogram(a, b, m).entries()) ctx.reps[static_cast<std::size_t>(e.x)] = e.r;
  detail::SamplerScratch scratch;
  detail::sample_excluded(ctx, k, s, seed, scratch);
  return PairRelation::excluding(a.size(), b.size(), std::move(scratch.removed));
}

namespace {

IntSet parse_dotted(const std::string& text) {
  std::vector<std::int64_t> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '.')) {
    try {
      v.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw InputError("malformed element list '" + text + "' in instance key");
    }
  }
  return IntSet::from_unsorted(std::move(v));
}

}  // namespace

MaterializedInstance materialize_instance(const std::string& key) {
  std::vector<std::string> parts;
  {
    std::stringstream ss(key);
    std::string item;
    while (std::getline(ss, item, '/')) parts.push_back(item);
  }
  if (parts.size() < 2) throw InputError("malformed instance key '" + key + "'");
  MaterializedInstance inst;
  inst.prop = parse_proposition(parts[0]);
  inst.mode = mode_of(inst.prop);
  bool have_b = false;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw InputError("malformed key field '" + parts[i] + "'");
    const auto name = parts[i].substr(0, eq);
    const auto value = parts[i].substr(eq + 1);
    try {
      if (name == "l" || name == "m") {
        inst.size = std::stoll(value);
      } else if (name == "A") {
        inst.a = parse_dotted(value);
      } else if (name == "B") {
        inst.b = parse_dotted(value);
        have_b = true;
      } else if (name == "K") {
        inst.k = parse_rational(value);
      } else if (name == "s") {
        inst.s = std::stoll(value);
      } else if (name == "t") {
        inst.t = std::stoll(value);
      } else if (name == "seed") {
        inst.sample_seed = std::stoull(value);
      } else {
        throw InputError("unknown key field '" + name + "'");
      }
    } catch (const std::logic_error&) {
      throw InputError("malformed key field '" + parts[i] + "'");
    }
  }
  if (inst.size < 1 || inst.a.empty()) throw InputError("instance key lacks size or A: '" + key + "'");
  const bool line = inst.mode == InstanceMode::integer_line;
  if (!have_b) {
    if (is_difference_form(inst.prop)) {
      inst.b = line ? inst.a.negated().translated(inst.size) : cyclic_negation(inst.a, inst.size).set;
    } else {
      throw InputError("instance key lacks B: '" + key + "'");
    }
  }
  if (inst.sample_seed) {
    inst.gamma = line ? sample_regular_relation(inst.a, inst.b, inst.k, inst.s, *inst.sample_seed)
                      : sample_regular_relation_cyclic(inst.a, inst.b, inst.size, inst.k, inst.s, *inst.sample_seed);
  } else {
    inst.gamma = PairRelation::full(inst.a.size(), inst.b.size());
  }
  const auto n = static_cast<std::int64_t>(inst.a.size());
  if (inst.prop == Proposition::pollard) {
    const auto t = inst.t.value_or(0);
    inst.measured = static_cast<double>(pollard_partial_sum(inst.a, inst.b, t));
    inst.bound = static_cast<double>(pollard_bound(n, t));
    return inst;
  }
  inst.measured = static_cast<double>(
      line ? restricted_sumset(inst.a, inst.b, inst.gamma).size()
           : cyclic_restricted_sumset(inst.a, inst.b, inst.gamma, inst.size).size());
  switch (inst.prop) {
    case Proposition::main_prop_sum: inst.bound = main_prop_sum_bound(inst.size, n, inst.k, inst.s).value; break;
    case Proposition::main_prop_difference:
      inst.bound = main_prop_difference_bound(inst.size, n, inst.k, inst.s).value;
      break;
    case Proposition::kneser_theta: inst.bound = kneser_theta_bound(n, inst.k, inst.s); break;
    case Proposition::kneser_three:
      inst.bound = static_cast<double>(strict_integer_floor(kneser_three_bound(n, inst.k, inst.s)));
      break;
    case Proposition::pollard: break;
  }
  return inst;
}

}  // namespace freiman
