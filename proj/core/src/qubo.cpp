#include "moseg/qubo.hpp"

#include "moseg/errors.hpp"

namespace moseg {

std::string to_string(QuboVariant v) { return v == QuboVariant::v1 ? "v1" : "v2"; }

std::string to_string(FillMode f) { return f == FillMode::zeroed ? "zeroed" : "literal"; }

QuboVariant variant_from_string(const std::string& s) {
  if (s == "v1") return QuboVariant::v1;
  if (s == "v2") return QuboVariant::v2;
  throw DataError("unknown variant '" + s + "' (expected v1 or v2)");
}

FillMode fill_from_string(const std::string& s) {
  if (s == "zeroed") return FillMode::zeroed;
  if (s == "literal") return FillMode::literal;
  throw DataError("unknown fill mode '" + s + "' (expected zeroed or literal)");
}

LinearSystem build_row_constraints(const MotionProblem& problem) {
  const int p = problem.total_points();
  const int d = problem.d;
  LinearSystem sys;
  sys.rows = Eigen::MatrixXd::Zero(p, d * p);
  sys.rhs = Eigen::VectorXd::Ones(p);
  for (int a = 0; a < p; ++a)
    for (int k = 0; k < d; ++k) sys.rows(a, bit_index(k, p, a)) = 1.0;
  return sys;
}

LinearSystem build_count_constraints(const MotionProblem& problem,
                                     const std::vector<std::vector<int>>& counts) {
  const int p = problem.total_points();
  const int n = problem.n;
  const int d = problem.d;
  if (static_cast<int>(counts.size()) != n)
    throw DataError("count constraints: need one count vector per image");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(counts[i].size()) != d)
      throw DataError("count constraints: count vector of image " + std::to_string(i) +
                      " must have length d");
    int sum = 0;
    for (int c : counts[i]) {
      if (c < 0) throw DataError("count constraints: negative count");
      sum += c;
    }
    if (sum != problem.point_counts[i])
      throw DataError("count constraints: counts of image " + std::to_string(i) +
                      " sum to " + std::to_string(sum) + ", expected " +
                      std::to_string(problem.point_counts[i]));
  }

  LinearSystem sys;
  sys.rows = Eigen::MatrixXd::Zero(n * d, d * p);
  sys.rhs = Eigen::VectorXd::Zero(n * d);
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < n; ++i) {
      const int row = k * n + i;  // row order of vect(M)
      const int off = problem.point_offset(i);
      for (int a = 0; a < problem.point_counts[i]; ++a)
        sys.rows(row, bit_index(k, p, off + a)) = 1.0;
      sys.rhs(row) = counts[i][k];
    }
  }
  return sys;
}

PenaltyTerms expand_penalty(const LinearSystem& sys, double lambda) {
  if (lambda <= 0.0) throw DataError("penalty weight must be positive");
  PenaltyTerms out;
  out.quadratic = lambda * (sys.rows.transpose() * sys.rows);
  out.linear = -2.0 * lambda * (sys.rows.transpose() * sys.rhs);
  out.offset = lambda * sys.rhs.squaredNorm();
  return out;
}

namespace {

// -I_d (x) M for an integer p x p matrix M.
Eigen::MatrixXi negated_kron_identity(const Eigen::MatrixXi& m, int d) {
  const int p = static_cast<int>(m.rows());
  Eigen::MatrixXi q = Eigen::MatrixXi::Zero(d * p, d * p);
  for (int k = 0; k < d; ++k) q.block(k * p, k * p, p, p) = -m;
  return q;
}

}  // namespace

Eigen::MatrixXi objective_matrix_v1(const MotionProblem& problem, FillMode fill) {
  const int p = problem.total_points();
  Eigen::MatrixXi w;
  if (fill == FillMode::literal) {
    w = 2 * assemble_block_z(problem) - Eigen::MatrixXi::Ones(p, p);
  } else {
    w = Eigen::MatrixXi::Zero(p, p);
    for (const auto& e : problem.edges) {
      const int ri = problem.point_offset(e.i);
      const int cj = problem.point_offset(e.j);
      const Eigen::MatrixXi block =
          2 * e.z - Eigen::MatrixXi::Ones(e.z.rows(), e.z.cols());
      w.block(ri, cj, block.rows(), block.cols()) = block;
      w.block(cj, ri, block.cols(), block.rows()) = block.transpose();
    }
  }
  return negated_kron_identity(w, problem.d);
}

Eigen::MatrixXi objective_matrix_v2(const MotionProblem& problem) {
  return negated_kron_identity(assemble_block_z(problem), problem.d);
}

QuboInstance build_v1(const MotionProblem& problem, double lambda1, FillMode fill) {
  if (lambda1 <= 0.0) throw DataError("build_v1: lambda1 must be positive");
  const PenaltyTerms rows = expand_penalty(build_row_constraints(problem), lambda1);
  QuboInstance q;
  q.k = problem.variable_count();
  q.quadratic = objective_matrix_v1(problem, fill).cast<double>() + rows.quadratic;
  q.linear = rows.linear;
  q.offset = rows.offset;
  q.meta.variant = QuboVariant::v1;
  q.meta.fill = fill;
  q.meta.lambda1 = lambda1;
  q.meta.problem_id = problem.id;
  return q;
}

QuboInstance build_v2(const MotionProblem& problem, double lambda2, double lambda3,
                      const std::vector<std::vector<int>>& counts) {
  if (lambda2 <= 0.0 || lambda3 <= 0.0)
    throw DataError("build_v2: penalty weights must be positive");
  const PenaltyTerms rows = expand_penalty(build_row_constraints(problem), lambda2);
  const PenaltyTerms cols = expand_penalty(build_count_constraints(problem, counts), lambda3);
  QuboInstance q;
  q.k = problem.variable_count();
  q.quadratic = objective_matrix_v2(problem).cast<double>() + rows.quadratic + cols.quadratic;
  q.linear = rows.linear + cols.linear;
  q.offset = rows.offset + cols.offset;
  q.meta.variant = QuboVariant::v2;
  q.meta.lambda2 = lambda2;
  q.meta.lambda3 = lambda3;
  q.meta.problem_id = problem.id;
  return q;
}

double energy(const QuboInstance& qubo, const BitVector& y) {
  if (static_cast<int>(y.size()) != qubo.k)
    throw DataError("energy: expected " + std::to_string(qubo.k) + " bits, got " +
                    std::to_string(y.size()));
  double total = qubo.offset;
  for (int i = 0; i < qubo.k; ++i) {
    if (!y[i]) continue;
    total += qubo.linear(i) + qubo.quadratic(i, i);
    for (int j = i + 1; j < qubo.k; ++j)
      if (y[j]) total += 2.0 * qubo.quadratic(i, j);
  }
  return total;
}

QuboInstance fold_linear(const QuboInstance& qubo) {
  QuboInstance out = qubo;
  out.quadratic.diagonal() += out.linear;
  out.linear.setZero();
  return out;
}

}  // namespace moseg
