#pragma once

#include <vector>

#include "moseg/problem.hpp"

namespace moseg {

/// Fraction of matching entries: 1 - Hamming(y, y_gt) / (d*p).
/// Throws DataError on length mismatch.
double accuracy(const BitVector& y, const BitVector& y_gt, int d, int p);

/// Apply a global motion relabeling to a bit vector: motion block k of y
/// moves to block permutation[k].
BitVector permute_motions(const BitVector& y, const std::vector<int>& permutation, int p);

struct AlignedAccuracy {
  double value = 0.0;
  std::vector<int> permutation;  ///< the maximizing relabeling, first on ties
};

/// Maximum accuracy over all d! global motion relabelings of y; fixes the
/// label gauge. Guarded at d <= 6.
AlignedAccuracy aligned_accuracy(const BitVector& y, const BitVector& y_gt, int d, int p);

struct ViolationSummary {
  int row_violations = 0;  ///< points whose d slots do not sum to 1
  /// per (image, motion) |column sum - expected count|; empty when no counts given
  std::vector<std::vector<int>> count_deviations;

  int total_count_deviation() const;
};

/// Constraint diagnostics for a raw bit vector against a problem; pass counts
/// to also report per-image motion-count deviations.
ViolationSummary violations(const BitVector& y, const MotionProblem& problem,
                            const std::vector<std::vector<int>>* counts = nullptr);

/// One solved instance scored against ground truth.
struct EvalReport {
  double accuracy_raw = 0.0;
  double accuracy_aligned = 0.0;
  std::vector<int> permutation;
  int row_violations = 0;
  int count_violations = 0;
  bool feasible = false;
  double energy = 0.0;
};

/// Assemble the full report. counts may be null (no count diagnostics);
/// energy is whatever the caller wants recorded (QUBO energy for sampled
/// solutions, consistency error for direct labelings).
EvalReport evaluate(const MotionProblem& problem, const BitVector& y,
                    const BitVector& y_gt, double energy,
                    const std::vector<std::vector<int>>* counts = nullptr);

}  // namespace moseg
