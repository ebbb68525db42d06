#include "moseg/problem.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "moseg/errors.hpp"

namespace moseg {

int Labeling::total_points() const {
  int p = 0;
  for (const auto& img : labels) p += static_cast<int>(img.size());
  return p;
}

int MotionProblem::total_points() const {
  return std::accumulate(point_counts.begin(), point_counts.end(), 0);
}

int MotionProblem::variable_count() const { return d * total_points(); }

int MotionProblem::point_offset(int image) const {
  return std::accumulate(point_counts.begin(), point_counts.begin() + image, 0);
}

const PartialSegmentation* MotionProblem::find_edge(int i, int j) const {
  for (const auto& e : edges) {
    if (e.i == i && e.j == j) return &e;
  }
  return nullptr;
}

void MotionProblem::validate() const {
  if (n < 1) throw DataError("problem: image count must be >= 1");
  if (d < 1) throw DataError("problem: motion count must be >= 1");
  if (static_cast<int>(point_counts.size()) != n)
    throw DataError("problem: point_counts length != n");
  for (int c : point_counts)
    if (c < 1) throw DataError("problem: every image needs at least one point");

  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (!(0 <= e.i && e.i < e.j && e.j < n))
      throw DataError("problem: edge indices must satisfy 0 <= i < j < n");
    if (!seen.insert({e.i, e.j}).second)
      throw DataError("problem: duplicate edge (" + std::to_string(e.i) + "," +
                      std::to_string(e.j) + ")");
    if (e.z.rows() != point_counts[e.i] || e.z.cols() != point_counts[e.j])
      throw DataError("problem: block of edge (" + std::to_string(e.i) + "," +
                      std::to_string(e.j) + ") has wrong dimensions");
    for (int r = 0; r < e.z.rows(); ++r)
      for (int c = 0; c < e.z.cols(); ++c)
        if (e.z(r, c) != 0 && e.z(r, c) != 1)
          throw DataError("problem: segmentation entries must be 0 or 1");
  }

  if (ground_truth) {
    if (ground_truth->image_count() != n)
      throw DataError("problem: ground truth image count != n");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(ground_truth->labels[i].size()) != point_counts[i])
        throw DataError("problem: ground truth length mismatch in image " +
                        std::to_string(i));
      for (int lab : ground_truth->labels[i])
        if (lab < 0 || lab >= d)
          throw DataError("problem: ground truth label out of range [0,d)");
    }
  }
}

Eigen::MatrixXi assemble_block_z(const MotionProblem& problem) {
  const int p = problem.total_points();
  Eigen::MatrixXi z = Eigen::MatrixXi::Zero(p, p);
  for (const auto& e : problem.edges) {
    const int ri = problem.point_offset(e.i);
    const int cj = problem.point_offset(e.j);
    z.block(ri, cj, e.z.rows(), e.z.cols()) = e.z;
    z.block(cj, ri, e.z.cols(), e.z.rows()) = e.z.transpose();
  }
  return z;
}

BitVector labels_to_bits(const Labeling& labeling, int d) {
  const int p = labeling.total_points();
  BitVector y(static_cast<std::size_t>(d) * p, 0);
  int a = 0;
  for (const auto& img : labeling.labels) {
    for (int lab : img) {
      if (lab < 0 || lab >= d)
        throw DataError("labels_to_bits: label " + std::to_string(lab) +
                        " out of range [0," + std::to_string(d) + ")");
      y[bit_index(lab, p, a)] = 1;
      ++a;
    }
  }
  return y;
}

BitDecode bits_to_labels(const BitVector& y, const MotionProblem& problem) {
  const int p = problem.total_points();
  const int d = problem.d;
  if (static_cast<int>(y.size()) != d * p)
    throw DataError("bits_to_labels: expected " + std::to_string(d * p) +
                    " bits, got " + std::to_string(y.size()));

  BitDecode out;
  std::vector<int> flat(p, -1);
  for (int a = 0; a < p; ++a) {
    int row_sum = 0;
    for (int k = 0; k < d; ++k) {
      if (y[bit_index(k, p, a)]) {
        ++row_sum;
        flat[a] = k;
      }
    }
    if (row_sum != 1) out.infeasible_points.push_back(a);
  }
  if (!out.infeasible_points.empty()) return out;

  Labeling labeling;
  labeling.labels.resize(problem.n);
  int a = 0;
  for (int i = 0; i < problem.n; ++i) {
    labeling.labels[i].assign(flat.begin() + a, flat.begin() + a + problem.point_counts[i]);
    a += problem.point_counts[i];
  }
  out.labeling = std::move(labeling);
  return out;
}

Eigen::MatrixXi relative_from_absolute(const Labeling& labeling, int i, int j) {
  const auto& li = labeling.labels.at(i);
  const auto& lj = labeling.labels.at(j);
  Eigen::MatrixXi z(li.size(), lj.size());
  for (std::size_t h = 0; h < li.size(); ++h)
    for (std::size_t k = 0; k < lj.size(); ++k) z(h, k) = (li[h] == lj[k]) ? 1 : 0;
  return z;
}

long long consistency_error(const MotionProblem& problem, const Labeling& labeling) {
  long long total = 0;
  for (const auto& e : problem.edges) {
    const Eigen::MatrixXi implied = relative_from_absolute(labeling, e.i, e.j);
    const Eigen::MatrixXi diff = e.z - implied;
    total += diff.cwiseAbs2().sum();
  }
  return total;
}

std::vector<int> motion_counts(const Labeling& labeling, int image, int d) {
  std::vector<int> counts(d, 0);
  for (int lab : labeling.labels.at(image)) {
    if (lab < 0 || lab >= d) throw DataError("motion_counts: label out of range");
    ++counts[lab];
  }
  return counts;
}

std::vector<std::vector<int>> all_motion_counts(const Labeling& labeling, int d) {
  std::vector<std::vector<int>> out;
  out.reserve(labeling.labels.size());
  for (int i = 0; i < labeling.image_count(); ++i) out.push_back(motion_counts(labeling, i, d));
  return out;
}

}  // namespace moseg
