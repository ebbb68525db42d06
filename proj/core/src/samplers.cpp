#include "moseg/samplers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "moseg/errors.hpp"
#include "moseg/rng.hpp"

namespace moseg {

namespace {

constexpr std::uint64_t kReadStream = 1;
constexpr std::uint64_t kProbeStream = 2;
constexpr std::uint64_t kRandomStream = 3;

// exp(-dE/T) below this exponent is far under any representable acceptance.
constexpr double kRejectExponent = 40.0;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool lex_less(const BitVector& a, const BitVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Sort ascending by energy (lex tiebreak) and merge identical bitstrings.
void finalize(SampleSet& set) {
  std::sort(set.samples.begin(), set.samples.end(), [](const Sample& a, const Sample& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return lex_less(a.y, b.y);
  });
  std::vector<Sample> merged;
  for (auto& s : set.samples) {
    if (!merged.empty() && merged.back().y == s.y)
      merged.back().count += s.count;
    else
      merged.push_back(std::move(s));
  }
  set.samples = std::move(merged);
}

BitVector random_bits(int k, std::mt19937_64& rng) {
  BitVector y(k);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < k; ++i) y[i] = static_cast<std::uint8_t>(coin(rng));
  return y;
}

// Local field h_i = sum_{j != i} Q_ij y_j, kept incrementally across flips.
Eigen::VectorXd local_field(const QuboInstance& q, const BitVector& y) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(q.k);
  for (int j = 0; j < q.k; ++j)
    if (y[j]) h += q.quadratic.col(j);
  for (int i = 0; i < q.k; ++i)
    if (y[i]) h(i) -= q.quadratic(i, i);
  return h;
}

double flip_delta(const QuboInstance& q, const BitVector& y, const Eigen::VectorXd& h, int b) {
  const double sign = y[b] ? -1.0 : 1.0;
  return sign * (q.quadratic(b, b) + q.linear(b) + 2.0 * h(b));
}

void apply_flip(const QuboInstance& q, BitVector& y, Eigen::VectorXd& h, int b) {
  y[b] ^= 1;
  const double delta = y[b] ? 1.0 : -1.0;
  h += delta * q.quadratic.col(b);
  h(b) -= delta * q.quadratic(b, b);
}

struct Temperatures {
  double initial;
  double final_;
};

Temperatures auto_temperatures(const QuboInstance& q, std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, kProbeStream));
  std::uniform_int_distribution<int> pick(0, q.k - 1);
  double max_abs = 0.0;
  double min_nonzero = 0.0;
  for (int t = 0; t < 100; ++t) {
    BitVector y = random_bits(q.k, rng);
    const Eigen::VectorXd h = local_field(q, y);
    const double mag = std::abs(flip_delta(q, y, h, pick(rng)));
    max_abs = std::max(max_abs, mag);
    if (mag > 0.0 && (min_nonzero == 0.0 || mag < min_nonzero)) min_nonzero = mag;
  }
  if (max_abs == 0.0) return {1.0, 1.0};
  if (min_nonzero == 0.0) min_nonzero = max_abs;
  const double final_ = std::min(max_abs, min_nonzero / std::log(100.0));
  return {max_abs, final_};
}

}  // namespace

SampleSet brute_force(const QuboInstance& qubo, long long keep_best) {
  const int k = qubo.k;
  if (k < 1) throw DataError("brute_force: empty instance");
  if (k > 26)
    throw SizeGuardError("brute_force: k = " + std::to_string(k) +
                         " exceeds the hard guard of 26 variables");
  const auto start = Clock::now();
  const std::uint64_t total = 1ULL << k;

  // Gray-code walk: consecutive states differ in exactly one bit, so each
  // step is a single incremental flip. State g has y[i] = bit i of g.
  BitVector y(k, 0);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(k);
  double e = qubo.offset;

  // Lexicographic bitstring order equals numeric order of the bit-reversed code.
  auto bit_reverse = [k](std::uint64_t g) {
    std::uint64_t r = 0;
    for (int i = 0; i < k; ++i)
      if (g & (1ULL << i)) r |= 1ULL << (k - 1 - i);
    return r;
  };

  struct Entry {
    double energy;
    std::uint64_t code;  // Gray code of the state
    std::uint64_t rev;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.rev < b.rev;
  };

  std::vector<Entry> all;
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> best(worse);
  const bool keep_all = keep_best <= 0;
  if (keep_all) all.reserve(total);

  std::uint64_t gray = 0;
  for (std::uint64_t step = 0;; ++step) {
    const Entry entry{e, gray, bit_reverse(gray)};
    if (keep_all) {
      all.push_back(entry);
    } else {
      best.push(entry);
      if (static_cast<long long>(best.size()) > keep_best) best.pop();
    }
    if (step + 1 == total) break;
    const int b = std::countr_zero(step + 1);  // bit flipped between gray codes
    e += flip_delta(qubo, y, h, b);
    apply_flip(qubo, y, h, b);
    gray ^= 1ULL << b;
  }

  if (!keep_all) {
    all.reserve(best.size());
    while (!best.empty()) {
      all.push_back(best.top());
      best.pop();
    }
  }

  SampleSet set;
  set.solver = "brute";
  set.seed = 0;
  set.reads = static_cast<long long>(total);
  set.samples.reserve(all.size());
  for (const auto& entry : all) {
    Sample s;
    s.y.resize(k);
    for (int i = 0; i < k; ++i) s.y[i] = static_cast<std::uint8_t>((entry.code >> i) & 1);
    s.energy = energy(qubo, s.y);  // exact re-score, no accumulated drift
    s.count = 1;
    set.samples.push_back(std::move(s));
  }
  finalize(set);
  set.wall_time_ms = elapsed_ms(start);
  return set;
}

SampleSet simulated_annealing(const QuboInstance& qubo, const AnnealParams& params) {
  if (qubo.k < 1) throw DataError("simulated_annealing: empty instance");
  if (params.reads < 1) throw DataError("simulated_annealing: reads must be >= 1");
  if (params.sweeps < 1) throw DataError("simulated_annealing: sweeps must be >= 1");
  const bool has_initial = params.temp_initial > 0.0;
  const bool has_final = params.temp_final > 0.0;
  if (has_initial != has_final)
    throw DataError("simulated_annealing: set both temperatures or neither");
  if (has_initial && params.temp_final > params.temp_initial)
    throw DataError("simulated_annealing: temperatures must be decreasing");

  const auto start = Clock::now();
  const Temperatures temps = has_initial
                                 ? Temperatures{params.temp_initial, params.temp_final}
                                 : auto_temperatures(qubo, params.seed);
  const double ratio = params.sweeps > 1
                           ? std::pow(temps.final_ / temps.initial, 1.0 / (params.sweeps - 1))
                           : 1.0;

  SampleSet set;
  set.solver = "sa";
  set.seed = params.seed;
  set.reads = params.reads;
  set.samples.reserve(params.reads);

  BitVector best_so_far;
  double best_energy = 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (long long read = 0; read < params.reads; ++read) {
    auto rng = make_rng(derive_seed(params.seed, kReadStream, static_cast<std::uint64_t>(read)));
    BitVector y;
    if (params.restart == RestartPolicy::best_of_previous && read > 0)
      y = best_so_far;
    else
      y = random_bits(qubo.k, rng);
    Eigen::VectorXd h = local_field(qubo, y);

    double temp = temps.initial;
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      const double inv_temp = 1.0 / temp;
      for (int b = 0; b < qubo.k; ++b) {
        const double delta = flip_delta(qubo, y, h, b);
        bool accept = delta <= 0.0;
        if (!accept) {
          const double exponent = delta * inv_temp;
          if (exponent < kRejectExponent) accept = unit(rng) < std::exp(-exponent);
        }
        if (accept) apply_flip(qubo, y, h, b);
      }
      temp *= ratio;
    }

    Sample s;
    s.energy = energy(qubo, y);
    s.y = std::move(y);
    if (best_so_far.empty() || s.energy < best_energy) {
      best_energy = s.energy;
      best_so_far = s.y;
    }
    set.samples.push_back(std::move(s));
  }

  finalize(set);
  set.wall_time_ms = elapsed_ms(start);
  return set;
}

SampleSet random_sampler(const QuboInstance& qubo, long long reads, std::uint64_t seed) {
  if (qubo.k < 1) throw DataError("random_sampler: empty instance");
  if (reads < 1) throw DataError("random_sampler: reads must be >= 1");
  const auto start = Clock::now();
  SampleSet set;
  set.solver = "random";
  set.seed = seed;
  set.reads = reads;
  set.samples.reserve(reads);
  for (long long read = 0; read < reads; ++read) {
    auto rng = make_rng(derive_seed(seed, kRandomStream, static_cast<std::uint64_t>(read)));
    Sample s;
    s.y = random_bits(qubo.k, rng);
    s.energy = energy(qubo, s.y);
    set.samples.push_back(std::move(s));
  }
  finalize(set);
  set.wall_time_ms = elapsed_ms(start);
  return set;
}

const Sample& best_sample(const SampleSet& set) {
  if (set.samples.empty()) throw DataError("best_sample: empty sample set");
  return set.samples.front();
}

double success_probability(const SampleSet& set, double reference_energy) {
  if (set.samples.empty()) throw DataError("success_probability: empty sample set");
  long long hits = 0;
  long long total = 0;
  for (const auto& s : set.samples) {
    total += s.count;
    if (s.energy <= reference_energy + 1e-9) hits += s.count;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace moseg
