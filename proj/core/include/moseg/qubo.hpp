#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "moseg/problem.hpp"

namespace moseg {

enum class QuboVariant { v1, v2 };
enum class FillMode { zeroed, literal };

std::string to_string(QuboVariant v);
std::string to_string(FillMode f);
QuboVariant variant_from_string(const std::string& s);
FillMode fill_from_string(const std::string& s);

/// Linear equality system A y = b over the k binary variables.
struct LinearSystem {
  Eigen::MatrixXd rows;
  Eigen::VectorXd rhs;
};

/// Quadratic expansion of one soft-constraint family: lambda * ||A y - b||^2
/// written out as y'Qy + s'y + c so it can be accumulated into a QUBO.
struct PenaltyTerms {
  Eigen::MatrixXd quadratic;
  Eigen::VectorXd linear;
  double offset = 0.0;
};

struct QuboMeta {
  QuboVariant variant = QuboVariant::v1;
  FillMode fill = FillMode::zeroed;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  std::string problem_id;
};

/// min_y y' quadratic y + linear' y + offset over binary y of length k.
/// quadratic is exactly symmetric; offsets are carried, never dropped, so
/// reported energies stay comparable to the consistency error.
struct QuboInstance {
  int k = 0;
  Eigen::MatrixXd quadratic;
  Eigen::VectorXd linear;
  double offset = 0.0;
  QuboMeta meta;
};

/// One row per point: its d motion slots must sum to 1. A = 1_d' (x) I_p, b = 1_p.
LinearSystem build_row_constraints(const MotionProblem& problem);

/// One row per (image, motion): column sums of each X_i must equal the given
/// counts. Row order follows vect(M): row index k*n + i for image i, motion k.
/// Throws DataError when counts are inconsistent with the point counts.
LinearSystem build_count_constraints(const MotionProblem& problem,
                                     const std::vector<std::vector<int>>& counts);

/// lambda*||Ay - b||^2 as (lambda A'A, -2 lambda A'b, lambda b'b); exact for all real y.
PenaltyTerms expand_penalty(const LinearSystem& sys, double lambda);

/// Pure quadratic objective of the dense variant: -I_d (x) W with W = 2Z - 1
/// on present-edge blocks. In zeroed mode diagonal and absent-edge blocks of W
/// are 0, matching the edge-restricted objective exactly; in literal mode they
/// are -1, matching the displayed complete-graph matrix.
Eigen::MatrixXi objective_matrix_v1(const MotionProblem& problem, FillMode fill);

/// Pure quadratic objective of the sparse variant: -I_d (x) Z.
Eigen::MatrixXi objective_matrix_v2(const MotionProblem& problem);

/// Dense-variant QUBO: objective plus row-constraint penalty weighted lambda1.
QuboInstance build_v1(const MotionProblem& problem, double lambda1,
                      FillMode fill = FillMode::zeroed);

/// Sparse-variant QUBO: objective plus row-constraint penalty (lambda2) and
/// per-image motion-count penalty (lambda3). Counts are required; one length-d
/// vector per image, each summing to that image's point count.
QuboInstance build_v2(const MotionProblem& problem, double lambda2, double lambda3,
                      const std::vector<std::vector<int>>& counts);

/// y' quadratic y + linear . y + offset. Throws DataError on length mismatch.
double energy(const QuboInstance& qubo, const BitVector& y);

/// Absorb the linear part into the diagonal (y_i^2 = y_i on binaries);
/// identical energies on every binary vector, idempotent.
QuboInstance fold_linear(const QuboInstance& qubo);

}  // namespace moseg
