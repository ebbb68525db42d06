#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moseg/qubo.hpp"

namespace moseg {

struct Sample {
  BitVector y;
  double energy = 0.0;
  long long count = 1;
};

/// Solver output. Samples are sorted ascending by energy, ties broken by
/// lexicographically smaller bitstring; identical bitstrings are merged with
/// their multiplicities summed. Every stored energy re-evaluates exactly
/// through energy() (the solvers re-score final states, no incremental drift).
struct SampleSet {
  std::string solver;
  std::uint64_t seed = 0;
  long long reads = 0;
  double wall_time_ms = 0.0;
  std::vector<Sample> samples;
};

enum class RestartPolicy { fresh_random, best_of_previous };

/// Annealer knobs. Temperatures of 0 mean auto: the initial temperature is
/// the largest single-flip |dE| seen over a 100-flip random probe, the final
/// one accepts the smallest nonzero probed |dE| with probability 0.01.
struct AnnealParams {
  long long reads = 1000;
  int sweeps = 64;
  double temp_initial = 0.0;
  double temp_final = 0.0;
  std::uint64_t seed = 0;
  RestartPolicy restart = RestartPolicy::fresh_random;
};

/// Exhaustive enumeration of all 2^k bitstrings; the first sample is the
/// certified global minimum. Refuses k > 26 with SizeGuardError. keep_best
/// truncates the returned set to the best t samples (0 keeps all 2^k, which
/// for k around 20 and above is a lot of memory).
SampleSet brute_force(const QuboInstance& qubo, long long keep_best = 0);

/// Single-bit-flip Metropolis annealing under a geometric temperature
/// schedule, one sample per read. Deterministic given (seed, params): read r
/// runs on its own generator seeded from (seed, r), so the result does not
/// depend on scheduling. With restart=best_of_previous each read after the
/// first starts from the best state found so far instead of a random one.
SampleSet simulated_annealing(const QuboInstance& qubo, const AnnealParams& params);

/// Uniform random bitstrings, evaluated; the floor baseline.
SampleSet random_sampler(const QuboInstance& qubo, long long reads, std::uint64_t seed);

/// Lowest-energy sample (ties already resolved by the set ordering).
/// Throws DataError on an empty set.
const Sample& best_sample(const SampleSet& set);

/// Fraction of samples (by multiplicity) with energy <= reference + 1e-9.
double success_probability(const SampleSet& set, double reference_energy);

}  // namespace moseg
