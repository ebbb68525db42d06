#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "moseg/problem.hpp"

namespace moseg {

struct SpectralParams {
  int restarts = 10;
  int max_iterations = 100;
  std::uint64_t seed = 0;
  /// Use D^{-1/2} Z D^{-1/2} instead of the plain block matrix.
  bool degree_normalized = false;
};

/// Lloyd k-means on the rows of `points`, best of `restarts` seeded runs by
/// within-cluster sum of squares. Throws DataError when there are fewer
/// distinct rows than clusters.
std::vector<int> kmeans(const Eigen::MatrixXd& points, int clusters, int restarts,
                        int max_iterations, std::uint64_t seed);

/// Spectral relaxation of the synchronization objective: embed every point as
/// its row in the d leading eigenvectors of the assembled block matrix, then
/// cluster all rows jointly with k-means. Cluster indices are globally
/// consistent motion labels, so the output is always a valid labeling.
Labeling spectral_segment(const MotionProblem& problem, const SpectralParams& params);

}  // namespace moseg
