#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "moseg/problem.hpp"

namespace moseg {

/// Which points of a pair get corrupted by label-switching noise:
/// both images' points of the edge (default) or only the first image's.
enum class NoiseSide { both, one };

NoiseSide noise_side_from_string(const std::string& s);
std::string to_string(NoiseSide side);

struct SyntheticConfig {
  int n = 3;
  int d = 2;
  int points_per_image = 16;      ///< used when point_counts is empty
  std::vector<int> point_counts;  ///< explicit per-image counts (optional)
  /// exact per-motion point counts; one vector per image, or a single vector
  /// broadcast to all images. Empty means uniform random labels.
  std::vector<std::vector<int>> motion_counts;
  double noise = 0.0;  ///< label-switch fraction per edge
  bool complete_graph = true;
  std::vector<std::pair<int, int>> edge_list;  ///< used when !complete_graph
  NoiseSide noise_side = NoiseSide::both;
  std::uint64_t seed = 0;

  std::vector<int> resolved_point_counts() const;
  /// Stable hash of everything but the seed; names generated instance files.
  std::uint64_t config_hash() const;
};

/// Noiseless instance: random (or exact-count) labels per point, every edge's
/// block derived from the labels, ground truth stored.
MotionProblem generate_ground_truth(const SyntheticConfig& config);

/// Switch `corrupt_count` distinct entries of `local_labels` to a uniformly
/// random *different* motion. The label-level noise primitive.
void corrupt_labels(std::vector<int>& local_labels, int d, int corrupt_count,
                    std::mt19937_64& rng);

/// Independently per edge: corrupt floor(rho * points-of-the-pair) local
/// labels and rebuild that edge's block from them. Ground truth is untouched.
/// Per-edge randomness derives from (seed, i, j), so edges are independent.
/// Requires ground truth; rho in [0, 1].
MotionProblem inject_noise(const MotionProblem& problem, double rho, std::uint64_t seed,
                           NoiseSide side = NoiseSide::both);

/// generate_ground_truth followed by inject_noise at the configured fraction.
MotionProblem generate_instance(const SyntheticConfig& config);

}  // namespace moseg
