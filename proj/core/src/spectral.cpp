#include "moseg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "moseg/errors.hpp"
#include "moseg/rng.hpp"

namespace moseg {

namespace {

constexpr std::uint64_t kKmeansStream = 20;

struct KmeansRun {
  std::vector<int> labels;
  double wcss = std::numeric_limits<double>::infinity();
};

KmeansRun lloyd(const Eigen::MatrixXd& points, int clusters, int max_iterations,
                std::mt19937_64& rng) {
  const int rows = static_cast<int>(points.rows());

  // Seed centroids with distinct rows so no cluster starts empty.
  std::vector<int> order(rows);
  for (int i = 0; i < rows; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  Eigen::MatrixXd centroids(clusters, points.cols());
  int chosen = 0;
  for (int idx : order) {
    bool duplicate = false;
    for (int c = 0; c < chosen; ++c)
      if ((centroids.row(c) - points.row(idx)).squaredNorm() == 0.0) duplicate = true;
    if (duplicate) continue;
    centroids.row(chosen++) = points.row(idx);
    if (chosen == clusters) break;
  }
  if (chosen < clusters) throw DataError("kmeans: fewer distinct rows than clusters");

  std::vector<int> labels(rows, 0);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (int r = 0; r < rows; ++r) {
      int best = 0;
      double best_dist = (points.row(r) - centroids.row(0)).squaredNorm();
      for (int c = 1; c < clusters; ++c) {
        const double dist = (points.row(r) - centroids.row(c)).squaredNorm();
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      if (labels[r] != best) {
        labels[r] = best;
        changed = true;
      }
    }
    if (!changed && it > 0) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(clusters, points.cols());
    std::vector<int> sizes(clusters, 0);
    for (int r = 0; r < rows; ++r) {
      sums.row(labels[r]) += points.row(r);
      ++sizes[labels[r]];
    }
    for (int c = 0; c < clusters; ++c) {
      if (sizes[c] > 0) {
        centroids.row(c) = sums.row(c) / sizes[c];
      } else {
        // Re-seed an empty cluster with the point farthest from its centroid.
        int farthest = 0;
        double far_dist = -1.0;
        for (int r = 0; r < rows; ++r) {
          const double dist = (points.row(r) - centroids.row(labels[r])).squaredNorm();
          if (dist > far_dist) {
            far_dist = dist;
            farthest = r;
          }
        }
        centroids.row(c) = points.row(farthest);
      }
    }
  }

  KmeansRun run;
  run.labels = labels;
  run.wcss = 0.0;
  for (int r = 0; r < rows; ++r)
    run.wcss += (points.row(r) - centroids.row(labels[r])).squaredNorm();
  return run;
}

}  // namespace

std::vector<int> kmeans(const Eigen::MatrixXd& points, int clusters, int restarts,
                        int max_iterations, std::uint64_t seed) {
  if (clusters < 1) throw DataError("kmeans: clusters must be >= 1");
  if (restarts < 1) throw DataError("kmeans: restarts must be >= 1");
  if (points.rows() < clusters) throw DataError("kmeans: fewer rows than clusters");

  KmeansRun best;
  for (int r = 0; r < restarts; ++r) {
    auto rng = make_rng(derive_seed(seed, kKmeansStream, static_cast<std::uint64_t>(r)));
    const KmeansRun run = lloyd(points, clusters, max_iterations, rng);
    if (run.wcss < best.wcss) best = run;
  }
  return best.labels;
}

Labeling spectral_segment(const MotionProblem& problem, const SpectralParams& params) {
  if (problem.d < 1) throw DataError("spectral_segment: d must be >= 1");
  const int p = problem.total_points();

  Eigen::MatrixXd z = assemble_block_z(problem).cast<double>();
  if (params.degree_normalized) {
    Eigen::VectorXd degree = z.rowwise().sum();
    Eigen::VectorXd scale(p);
    for (int a = 0; a < p; ++a) scale(a) = degree(a) > 0.0 ? 1.0 / std::sqrt(degree(a)) : 0.0;
    z = scale.asDiagonal() * z * scale.asDiagonal();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(z);
  if (solver.info() != Eigen::Success)
    throw DataError("spectral_segment: eigen decomposition failed on degenerate input");

  // Eigenvalues come back ascending; the d leading eigenvectors are the last columns.
  const Eigen::MatrixXd embedding = solver.eigenvectors().rightCols(problem.d);

  std::vector<int> flat;
  if (problem.d == 1) {
    flat.assign(p, 0);
  } else {
    flat = kmeans(embedding, problem.d, params.restarts, params.max_iterations, params.seed);
  }

  Labeling out;
  out.labels.resize(problem.n);
  int a = 0;
  for (int i = 0; i < problem.n; ++i) {
    out.labels[i].assign(flat.begin() + a, flat.begin() + a + problem.point_counts[i]);
    a += problem.point_counts[i];
  }
  return out;
}

}  // namespace moseg
