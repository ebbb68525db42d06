#include <doctest.h>

#include <random>

#include "moseg/errors.hpp"
#include "moseg/metrics.hpp"
#include "moseg/spectral.hpp"
#include "moseg/synthetic.hpp"

using namespace moseg;

namespace {

SyntheticConfig balanced_config(double noise, std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.n = 3;
  cfg.d = 2;
  cfg.motion_counts = {{8, 8}};
  cfg.noise = noise;
  cfg.seed = seed;
  return cfg;
}

double spectral_aligned_accuracy(const MotionProblem& problem, std::uint64_t seed) {
  SpectralParams params;
  params.seed = seed;
  const Labeling labeling = spectral_segment(problem, params);
  const BitVector y = labels_to_bits(labeling, problem.d);
  const BitVector y_gt = labels_to_bits(*problem.ground_truth, problem.d);
  return aligned_accuracy(y, y_gt, problem.d, problem.total_points()).value;
}

}  // namespace

TEST_CASE("kmeans recovers two well-separated groups") {
  Eigen::MatrixXd points(6, 2);
  points << 0.0, 0.1, 0.1, 0.0, 0.05, 0.05, 5.0, 5.1, 5.1, 5.0, 5.05, 5.05;
  const std::vector<int> labels = kmeans(points, 2, 5, 50, 3);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[1] == labels[2]);
  CHECK(labels[3] == labels[4]);
  CHECK(labels[4] == labels[5]);
  CHECK(labels[0] != labels[3]);
}

TEST_CASE("kmeans with one cluster is trivial and deterministic") {
  Eigen::MatrixXd points = Eigen::MatrixXd::Ones(4, 3);
  CHECK(kmeans(points, 1, 3, 10, 1) == std::vector<int>(4, 0));
}

TEST_CASE("kmeans is deterministic in the seed") {
  std::mt19937_64 rng(5);
  Eigen::MatrixXd points(40, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < 40; ++r)
    for (int c = 0; c < 2; ++c) points(r, c) = unit(rng);
  CHECK(kmeans(points, 3, 8, 100, 9) == kmeans(points, 3, 8, 100, 9));
}

TEST_CASE("kmeans rejects degenerate input") {
  Eigen::MatrixXd identical = Eigen::MatrixXd::Ones(5, 2);
  CHECK_THROWS_AS(kmeans(identical, 2, 3, 10, 1), DataError);
  Eigen::MatrixXd tiny = Eigen::MatrixXd::Ones(1, 2);
  CHECK_THROWS_AS(kmeans(tiny, 2, 3, 10, 1), DataError);
}

TEST_CASE("noiseless balanced instances segment almost perfectly") {
  double total = 0.0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    const MotionProblem problem = generate_instance(balanced_config(0.0, 100 + t));
    total += spectral_aligned_accuracy(problem, t);
  }
  CHECK(total / trials >= 0.95);
}

TEST_CASE("a single motion is recovered exactly") {
  SyntheticConfig cfg;
  cfg.n = 3;
  cfg.d = 1;
  cfg.points_per_image = 8;
  cfg.seed = 3;
  const MotionProblem problem = generate_instance(cfg);
  CHECK(spectral_aligned_accuracy(problem, 0) == 1.0);
}

TEST_CASE("heavy noise degrades the spectral baseline") {
  double clean_total = 0.0;
  double noisy_total = 0.0;
  const int trials = 8;
  for (int t = 0; t < trials; ++t) {
    clean_total +=
        spectral_aligned_accuracy(generate_instance(balanced_config(0.0, 200 + t)), t);
    noisy_total +=
        spectral_aligned_accuracy(generate_instance(balanced_config(0.5, 200 + t)), t);
  }
  CHECK(noisy_total / trials < clean_total / trials);
}

TEST_CASE("the baseline always emits a valid labeling") {
  for (double rho : {0.0, 0.3, 0.5}) {
    const MotionProblem problem = generate_instance(balanced_config(rho, 17));
    SpectralParams params;
    params.seed = 2;
    const Labeling labeling = spectral_segment(problem, params);
    REQUIRE(labeling.image_count() == problem.n);
    for (int i = 0; i < problem.n; ++i) {
      REQUIRE(static_cast<int>(labeling.labels[i].size()) == problem.point_counts[i]);
      for (int lab : labeling.labels[i]) {
        CHECK(lab >= 0);
        CHECK(lab < problem.d);
      }
    }
    // row-feasible by construction
    const BitVector y = labels_to_bits(labeling, problem.d);
    CHECK(violations(y, problem).row_violations == 0);
  }
}

TEST_CASE("degree normalization is available and sane") {
  const MotionProblem problem = generate_instance(balanced_config(0.1, 23));
  SpectralParams params;
  params.seed = 4;
  params.degree_normalized = true;
  const Labeling labeling = spectral_segment(problem, params);
  const BitVector y = labels_to_bits(labeling, problem.d);
  const BitVector y_gt = labels_to_bits(*problem.ground_truth, problem.d);
  CHECK(aligned_accuracy(y, y_gt, problem.d, problem.total_points()).value > 0.6);
}
