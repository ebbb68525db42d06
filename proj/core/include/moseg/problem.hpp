#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace moseg {

/// Binary assignment vector y over k = d*p variables.
///
/// Layout convention used by every module: y = vect(X), the column-major
/// stacking of the p x d block matrix X of per-image segmentations. The bit
/// for (global point a, motion k) lives at index k*p + a, with images
/// concatenated in order and points in per-image order.
using BitVector = std::vector<std::uint8_t>;

inline int bit_index(int motion, int total_points, int point) {
  return motion * total_points + point;
}

/// Per-image motion labels; the absolute segmentation in label form.
struct Labeling {
  std::vector<std::vector<int>> labels;

  int image_count() const { return static_cast<int>(labels.size()); }
  int total_points() const;

  bool operator==(const Labeling&) const = default;
};

/// Pairwise (relative) segmentation between images i and j: z(h,k) = 1 iff
/// point h of image i and point k of image j move together.
struct PartialSegmentation {
  int i = 0;
  int j = 0;
  Eigen::MatrixXi z;
};

/// A multi-image motion segmentation instance: the measurement graph of
/// pairwise segmentations, plus optional ground truth for evaluation.
///
/// Edges are stored undirected, once per pair with i < j; the transposed
/// block is materialized on demand. Absent edges mean "no measurement",
/// never an all-zero measurement.
struct MotionProblem {
  int n = 0;                      ///< image count
  int d = 1;                      ///< motion count, known by assumption
  std::vector<int> point_counts;  ///< p_i per image
  std::vector<PartialSegmentation> edges;
  std::optional<Labeling> ground_truth;
  std::string id;
  std::uint64_t seed = 0;

  int total_points() const;             ///< p = sum p_i
  int variable_count() const;           ///< k = d * p
  int point_offset(int image) const;    ///< global index of image's first point
  const PartialSegmentation* find_edge(int i, int j) const;

  /// Throws DataError on any broken invariant (bad indices, duplicate edges,
  /// non-binary entries, dimension mismatches, out-of-range labels).
  void validate() const;
};

/// Symmetric p x p block matrix of all pairwise segmentations: block (i,j)
/// holds z_ij, block (j,i) its transpose, diagonal and absent-edge blocks zero.
Eigen::MatrixXi assemble_block_z(const MotionProblem& problem);

/// Labeling -> bit vector in the documented layout. Throws DataError if a
/// label is >= d.
BitVector labels_to_bits(const Labeling& labeling, int d);

/// Result of decoding a bit vector: a labeling when every point has exactly
/// one motion bit set, otherwise the list of offending global point indices.
struct BitDecode {
  std::optional<Labeling> labeling;
  std::vector<int> infeasible_points;

  bool feasible() const { return labeling.has_value(); }
};

/// Inverse of labels_to_bits. Throws DataError on length mismatch.
BitDecode bits_to_labels(const BitVector& y, const MotionProblem& problem);

/// The relative segmentation implied by an absolute one: entry (h,k) = 1 iff
/// point h of image i and point k of image j carry the same label.
Eigen::MatrixXi relative_from_absolute(const Labeling& labeling, int i, int j);

/// Sum over measured edges of the squared Frobenius distance between the
/// stored block and the one implied by the labeling. Integer-valued.
long long consistency_error(const MotionProblem& problem, const Labeling& labeling);

/// Points of `image` per motion; sums to p_i.
std::vector<int> motion_counts(const Labeling& labeling, int image, int d);

/// motion_counts for every image.
std::vector<std::vector<int>> all_motion_counts(const Labeling& labeling, int d);

}  // namespace moseg
