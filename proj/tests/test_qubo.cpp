#include <doctest.h>

#include <random>

#include "moseg/errors.hpp"
#include "moseg/qubo.hpp"
#include "test_common.hpp"

using namespace moseg;
using moseg_test::noiseless_problem;
using moseg_test::random_counted_labeling;
using moseg_test::random_labeling;

namespace {

// Independent quadratic-form evaluation, the oracle against energy().
double naive_energy(const Eigen::MatrixXd& q, const Eigen::VectorXd& lin, double offset,
                    const BitVector& y) {
  Eigen::VectorXd v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v(i) = y[i];
  return v.dot(q * v) + lin.dot(v) + offset;
}

double quadratic_term(const Eigen::MatrixXi& q, const BitVector& y) {
  long long total = 0;
  const int k = static_cast<int>(q.rows());
  for (int i = 0; i < k; ++i) {
    if (!y[i]) continue;
    for (int j = 0; j < k; ++j)
      if (y[j]) total += q(i, j);
  }
  return static_cast<double>(total);
}

BitVector random_bits(int k, std::mt19937_64& rng) {
  BitVector y(k);
  for (auto& b : y) b = static_cast<std::uint8_t>(rng() & 1);
  return y;
}

MotionProblem two_image_one_point() {
  MotionProblem problem;
  problem.n = 2;
  problem.d = 2;
  problem.point_counts = {1, 1};
  PartialSegmentation e;
  e.i = 0;
  e.j = 1;
  e.z = Eigen::MatrixXi::Ones(1, 1);
  problem.edges.push_back(e);
  return problem;
}

}  // namespace

TEST_CASE("row constraints have the Kronecker structure") {
  std::mt19937_64 rng(2);
  const MotionProblem problem = noiseless_problem(random_labeling({1, 1}, 2, rng), 2);
  const LinearSystem sys = build_row_constraints(problem);
  REQUIRE(sys.rows.rows() == 2);
  REQUIRE(sys.rows.cols() == 4);
  Eigen::MatrixXd expected(2, 4);
  expected << 1, 0, 1, 0, 0, 1, 0, 1;
  CHECK(sys.rows == expected);
  CHECK(sys.rhs == Eigen::VectorXd::Ones(2));
}

TEST_CASE("feasible bit vectors satisfy the row system, the zero vector breaks every row") {
  std::mt19937_64 rng(4);
  const Labeling labeling = random_labeling({3, 4}, 3, rng);
  const MotionProblem problem = noiseless_problem(labeling, 3);
  const LinearSystem sys = build_row_constraints(problem);

  const BitVector y = labels_to_bits(labeling, 3);
  Eigen::VectorXd v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v(i) = y[i];
  CHECK((sys.rows * v - sys.rhs).squaredNorm() == 0.0);

  CHECK((sys.rows * Eigen::VectorXd::Zero(y.size()) - sys.rhs).squaredNorm() ==
        doctest::Approx(7.0));  // every one of the p rows is violated by 1
}

TEST_CASE("count constraints match the hand example") {
  MotionProblem problem;
  problem.n = 1;
  problem.d = 2;
  problem.point_counts = {2};
  const LinearSystem sys = build_count_constraints(problem, {{1, 1}});
  Eigen::MatrixXd expected(2, 4);
  expected << 1, 1, 0, 0, 0, 0, 1, 1;
  CHECK(sys.rows == expected);
  CHECK(sys.rhs == Eigen::VectorXd::Ones(2));
}

TEST_CASE("ground truth of a noiseless instance satisfies its count system") {
  std::mt19937_64 rng(8);
  const Labeling gt = random_counted_labeling({{3, 2}, {1, 4}}, rng);
  const MotionProblem problem = noiseless_problem(gt, 2);
  const LinearSystem sys = build_count_constraints(problem, all_motion_counts(gt, 2));
  const BitVector y = labels_to_bits(gt, 2);
  Eigen::VectorXd v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v(i) = y[i];
  CHECK((sys.rows * v - sys.rhs).squaredNorm() == 0.0);
}

TEST_CASE("count constraints reject inconsistent counts") {
  MotionProblem problem;
  problem.n = 1;
  problem.d = 2;
  problem.point_counts = {2};
  CHECK_THROWS_AS(build_count_constraints(problem, {{1, 2}}), DataError);
  CHECK_THROWS_AS(build_count_constraints(problem, {{2}}), DataError);
  CHECK_THROWS_AS(build_count_constraints(problem, {}), DataError);
}

TEST_CASE("expand_penalty evaluates to lambda * ||Ay - b||^2 exactly") {
  LinearSystem sys;
  sys.rows = Eigen::MatrixXd::Ones(1, 2);
  sys.rhs = Eigen::VectorXd::Ones(1);
  const PenaltyTerms terms = expand_penalty(sys, 10.0);

  CHECK(naive_energy(terms.quadratic, terms.linear, terms.offset, {1, 1}) == 10.0);
  CHECK(naive_energy(terms.quadratic, terms.linear, terms.offset, {1, 0}) == 0.0);
  CHECK(naive_energy(terms.quadratic, terms.linear, terms.offset, {0, 0}) == 10.0);
  CHECK(terms.offset == 10.0);  // lambda * (number of all-ones rows)

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  LinearSystem big;
  big.rows = Eigen::MatrixXd::NullaryExpr(5, 9, [&] { return std::round(unit(rng) * 3); });
  big.rhs = Eigen::VectorXd::NullaryExpr(5, [&] { return std::round(unit(rng) * 2); });
  const PenaltyTerms expansion = expand_penalty(big, 3.5);
  for (int trial = 0; trial < 100; ++trial) {
    const BitVector y = random_bits(9, rng);
    Eigen::VectorXd v(9);
    for (int i = 0; i < 9; ++i) v(i) = y[i];
    const double direct = 3.5 * (big.rows * v - big.rhs).squaredNorm();
    CHECK(naive_energy(expansion.quadratic, expansion.linear, expansion.offset, y) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("expand_penalty requires a positive weight") {
  LinearSystem sys;
  sys.rows = Eigen::MatrixXd::Ones(1, 1);
  sys.rhs = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(expand_penalty(sys, 0.0), DataError);
}

TEST_CASE("v1 on a single image is penalty only") {
  std::mt19937_64 rng(21);
  const Labeling labeling = random_labeling({3}, 2, rng);
  const MotionProblem problem = noiseless_problem(labeling, 2);
  const QuboInstance q = build_v1(problem, 14.0);
  CHECK(objective_matrix_v1(problem, FillMode::zeroed).isZero());
  CHECK(energy(q, labels_to_bits(labeling, 2)) == 0.0);
}

TEST_CASE("v1 pure objective on the two-point toy instance") {
  const MotionProblem problem = two_image_one_point();
  const Eigen::MatrixXi obj = objective_matrix_v1(problem, FillMode::zeroed);
  CHECK(quadratic_term(obj, {1, 1, 0, 0}) == -2.0);  // same motion
  CHECK(quadratic_term(obj, {1, 0, 0, 1}) == 0.0);   // different motions
}

TEST_CASE("v2 pure objective on the two-point toy instance") {
  const MotionProblem problem = two_image_one_point();
  const Eigen::MatrixXi obj = objective_matrix_v2(problem);
  CHECK(quadratic_term(obj, {1, 1, 0, 0}) == -2.0);
  CHECK(quadratic_term(obj, {1, 0, 0, 1}) == 0.0);
}

TEST_CASE("96 variables for 3 images of 16 points with 2 motions") {
  std::mt19937_64 rng(31);
  const MotionProblem problem = noiseless_problem(random_labeling({16, 16, 16}, 2, rng), 2);
  CHECK(build_v1(problem, 14.0).k == 96);
}

TEST_CASE("v2 quadratic keeps the sparsity of the block matrix") {
  std::mt19937_64 rng(32);
  const MotionProblem problem = noiseless_problem(random_labeling({4, 4, 4}, 2, rng), 2);
  const Eigen::MatrixXi v2_obj = objective_matrix_v2(problem);
  const Eigen::MatrixXi z_pattern = assemble_block_z(problem);
  const int p = problem.total_points();
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c)
        CHECK((v2_obj(k * p + r, k * p + c) != 0) == (z_pattern(r, c) != 0));

  const Eigen::MatrixXi v1_literal = objective_matrix_v1(problem, FillMode::literal);
  CHECK((v2_obj.array() != 0).count() < (v1_literal.array() != 0).count());
}

TEST_CASE("literal fill places -1 on diagonal and absent-edge blocks") {
  MotionProblem problem;
  problem.n = 3;
  problem.d = 1;
  problem.point_counts = {1, 1, 1};
  PartialSegmentation e;
  e.i = 0;
  e.j = 1;
  e.z = Eigen::MatrixXi::Ones(1, 1);
  problem.edges.push_back(e);  // edge (0,2) and (1,2) missing

  const Eigen::MatrixXi literal = objective_matrix_v1(problem, FillMode::literal);
  Eigen::MatrixXi expected(3, 3);
  expected << 1, -1, 1, -1, 1, 1, 1, 1, 1;  // -(2Z - 1) with Z symmetric
  CHECK(literal == expected);

  const Eigen::MatrixXi zeroed = objective_matrix_v1(problem, FillMode::zeroed);
  expected << 0, -1, 0, -1, 0, 0, 0, 0, 0;
  CHECK(zeroed == expected);
}

TEST_CASE("energy of the zero vector is the offset") {
  const MotionProblem problem = two_image_one_point();
  const QuboInstance q = build_v1(problem, 14.0);
  CHECK(energy(q, BitVector(4, 0)) == q.offset);
  CHECK_THROWS_AS(energy(q, BitVector(3, 0)), DataError);
}

TEST_CASE("energy agrees with the dense quadratic-form oracle") {
  std::mt19937_64 rng(41);
  const MotionProblem problem = noiseless_problem(random_labeling({3, 3}, 2, rng), 2);
  const QuboInstance q = build_v1(problem, 14.0);
  for (int trial = 0; trial < 200; ++trial) {
    const BitVector y = random_bits(q.k, rng);
    CHECK(energy(q, y) ==
          doctest::Approx(naive_energy(q.quadratic, q.linear, q.offset, y)).epsilon(1e-12));
  }
}

TEST_CASE("ground-truth energy of a noiseless v2 instance is -2 sum tr(Xi' Zij Xj)") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const Labeling gt = random_labeling({4, 3, 5}, 2, rng);
    const MotionProblem problem = noiseless_problem(gt, 2);
    const QuboInstance q = build_v2(problem, 27.5, 3.2, all_motion_counts(gt, 2));

    long long trace_sum = 0;
    for (const auto& e : problem.edges) {
      const Eigen::MatrixXi xi = moseg_test::absolute_matrix(gt, e.i, 2);
      const Eigen::MatrixXi xj = moseg_test::absolute_matrix(gt, e.j, 2);
      trace_sum += (xi.transpose() * e.z * xj).trace();
    }
    CHECK(energy(q, labels_to_bits(gt, 2)) == doctest::Approx(-2.0 * trace_sum));
  }
}

TEST_CASE("energy is invariant under global motion permutation on balanced instances") {
  std::mt19937_64 rng(45);
  const Labeling gt = random_counted_labeling({{3, 3}, {3, 3}}, rng);
  const MotionProblem problem = noiseless_problem(gt, 2);
  const QuboInstance v1 = build_v1(problem, 14.0);
  const QuboInstance v2 = build_v2(problem, 27.5, 3.2, all_motion_counts(gt, 2));

  for (int trial = 0; trial < 20; ++trial) {
    const Labeling labeling = random_labeling({6, 6}, 2, rng);
    Labeling swapped = labeling;
    for (auto& img : swapped.labels)
      for (int& lab : img) lab = 1 - lab;
    CHECK(energy(v1, labels_to_bits(labeling, 2)) ==
          energy(v1, labels_to_bits(swapped, 2)));
    CHECK(energy(v2, labels_to_bits(labeling, 2)) ==
          energy(v2, labels_to_bits(swapped, 2)));
  }
}

TEST_CASE("fold_linear preserves energies, zeroes the linear part, idempotent") {
  std::mt19937_64 rng(51);
  const MotionProblem problem = noiseless_problem(random_labeling({3, 2}, 2, rng), 2);
  const QuboInstance q = build_v1(problem, 14.0);
  const QuboInstance folded = fold_linear(q);
  CHECK(folded.linear.isZero());
  for (int trial = 0; trial < 100; ++trial) {
    const BitVector y = random_bits(q.k, rng);
    CHECK(energy(folded, y) == doctest::Approx(energy(q, y)).epsilon(1e-9));
  }
  const QuboInstance twice = fold_linear(folded);
  CHECK(twice.quadratic == folded.quadratic);
  CHECK(twice.linear == folded.linear);
}

TEST_CASE("v1 equivalence identity on the fully feasible set") {
  // consistency_error(y) - 1/2 y'(obj)y is the instance constant sum tr(Z'Z),
  // for every row-feasible y, in exact integer arithmetic.
  std::mt19937_64 rng(61);
  for (int instance = 0; instance < 5; ++instance) {
    const Labeling gt = random_labeling({4, 5, 3}, 2, rng);
    MotionProblem problem = noiseless_problem(gt, 2);
    // perturb some entries so the instance is noisy but still binary
    for (auto& e : problem.edges)
      if (rng() & 1) e.z(0, 0) ^= 1;

    long long z_norm = 0;
    for (const auto& e : problem.edges) z_norm += e.z.cwiseAbs2().sum();

    const Eigen::MatrixXi obj = objective_matrix_v1(problem, FillMode::zeroed);
    for (int trial = 0; trial < 200; ++trial) {
      const Labeling labeling = random_labeling({4, 5, 3}, 2, rng);
      const BitVector y = labels_to_bits(labeling, 2);
      const double identity_value =
          static_cast<double>(consistency_error(problem, labeling)) -
          0.5 * quadratic_term(obj, y);
      CHECK(identity_value == static_cast<double>(z_norm));
    }
  }
}

TEST_CASE("v2 equivalence identity on the count-feasible set") {
  std::mt19937_64 rng(62);
  const std::vector<std::vector<int>> counts = {{2, 3}, {3, 2}, {1, 4}};
  for (int instance = 0; instance < 5; ++instance) {
    const Labeling gt = random_counted_labeling(counts, rng);
    MotionProblem problem = noiseless_problem(gt, 2);
    for (auto& e : problem.edges)
      if (rng() & 1) e.z(1, 1) ^= 1;

    long long constant = 0;
    for (const auto& e : problem.edges) {
      constant += e.z.cwiseAbs2().sum();
      const auto mi = motion_counts(gt, e.i, 2);
      const auto mj = motion_counts(gt, e.j, 2);
      for (int k = 0; k < 2; ++k) constant += mi[k] * mj[k];
    }

    const Eigen::MatrixXi obj = objective_matrix_v2(problem);
    for (int trial = 0; trial < 200; ++trial) {
      const Labeling labeling = random_counted_labeling(counts, rng);
      const BitVector y = labels_to_bits(labeling, 2);
      const double identity_value =
          static_cast<double>(consistency_error(problem, labeling)) -
          quadratic_term(obj, y);
      CHECK(identity_value == static_cast<double>(constant));
    }
  }
}
