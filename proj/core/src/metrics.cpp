#include "moseg/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "moseg/errors.hpp"

namespace moseg {

double accuracy(const BitVector& y, const BitVector& y_gt, int d, int p) {
  const std::size_t k = static_cast<std::size_t>(d) * p;
  if (y.size() != k || y_gt.size() != k)
    throw DataError("accuracy: both vectors must have length d*p");
  int hamming = 0;
  for (std::size_t i = 0; i < k; ++i) hamming += (y[i] != y_gt[i]);
  return 1.0 - static_cast<double>(hamming) / static_cast<double>(k);
}

BitVector permute_motions(const BitVector& y, const std::vector<int>& permutation, int p) {
  const int d = static_cast<int>(permutation.size());
  BitVector out(y.size());
  for (int k = 0; k < d; ++k)
    std::copy(y.begin() + static_cast<std::size_t>(k) * p,
              y.begin() + static_cast<std::size_t>(k + 1) * p,
              out.begin() + static_cast<std::size_t>(permutation[k]) * p);
  return out;
}

AlignedAccuracy aligned_accuracy(const BitVector& y, const BitVector& y_gt, int d, int p) {
  if (d > 6)
    throw SizeGuardError("aligned_accuracy: d = " + std::to_string(d) +
                         " exceeds the factorial guard of 6");
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  AlignedAccuracy best{-1.0, {}};
  do {
    const double mu = accuracy(permute_motions(y, perm, p), y_gt, d, p);
    if (mu > best.value) {  // strict: keep the lexicographically first maximizer
      best.value = mu;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

int ViolationSummary::total_count_deviation() const {
  int total = 0;
  for (const auto& img : count_deviations)
    total = std::accumulate(img.begin(), img.end(), total);
  return total;
}

ViolationSummary violations(const BitVector& y, const MotionProblem& problem,
                            const std::vector<std::vector<int>>* counts) {
  const int p = problem.total_points();
  const int d = problem.d;
  if (static_cast<int>(y.size()) != d * p)
    throw DataError("violations: expected " + std::to_string(d * p) + " bits");

  ViolationSummary out;
  for (int a = 0; a < p; ++a) {
    int row_sum = 0;
    for (int k = 0; k < d; ++k) row_sum += y[bit_index(k, p, a)];
    if (row_sum != 1) ++out.row_violations;
  }

  if (counts) {
    if (static_cast<int>(counts->size()) != problem.n)
      throw DataError("violations: need one count vector per image");
    out.count_deviations.assign(problem.n, std::vector<int>(d, 0));
    for (int i = 0; i < problem.n; ++i) {
      const int off = problem.point_offset(i);
      for (int k = 0; k < d; ++k) {
        int col_sum = 0;
        for (int a = 0; a < problem.point_counts[i]; ++a)
          col_sum += y[bit_index(k, p, off + a)];
        out.count_deviations[i][k] = std::abs(col_sum - (*counts)[i][k]);
      }
    }
  }
  return out;
}

EvalReport evaluate(const MotionProblem& problem, const BitVector& y,
                    const BitVector& y_gt, double energy,
                    const std::vector<std::vector<int>>* counts) {
  const int p = problem.total_points();
  EvalReport report;
  report.accuracy_raw = accuracy(y, y_gt, problem.d, p);
  const AlignedAccuracy aligned = aligned_accuracy(y, y_gt, problem.d, p);
  report.accuracy_aligned = aligned.value;
  report.permutation = aligned.permutation;
  const ViolationSummary v = violations(y, problem, counts);
  report.row_violations = v.row_violations;
  report.count_violations = v.total_count_deviation();
  report.feasible = (v.row_violations == 0) && (report.count_violations == 0);
  report.energy = energy;
  return report;
}

}  // namespace moseg
