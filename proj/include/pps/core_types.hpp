#pragma once

#include "pps/linear_operator.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace pps {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Image/keypoint index structure. Images and keypoints are 0-based here; the
// file formats use 1-based indices.
class BlockPartition {
 public:
  BlockPartition() = default;
  explicit BlockPartition(std::vector<int> sizes);

  int images() const noexcept { return static_cast<int>(sizes_.size()); }
  int size(int image) const { return sizes_[static_cast<std::size_t>(image)]; }
  Index offset(int image) const { return offsets_[static_cast<std::size_t>(image)]; }
  Index total() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
  int max_size() const noexcept;
  double mean_size() const noexcept;
  bool uniform() const noexcept;

  std::span<const int> sizes() const noexcept { return sizes_; }
  std::span<const Index> offsets() const noexcept { return offsets_; }

  Index global(int image, int keypoint) const { return offset(image) + keypoint; }
  int image_of(Index global) const;

  bool operator==(const BlockPartition&) const = default;

 private:
  std::vector<int> sizes_;
  std::vector<Index> offsets_;
};

struct Keypoint {
  int image = 0;
  int index = 0;

  auto operator<=>(const Keypoint&) const = default;
};

// One observed correspondence (a.image, a.index) ~ (b.image, b.index).
// Stored matches always satisfy a.image < b.image.
struct Match {
  Keypoint a;
  Keypoint b;

  auto operator<=>(const Match&) const = default;
};

// Sparse symmetric 0/1 block matrix Q. Only the upper block triangle is
// stored; the diagonal identity blocks are implicit.
class CorrespondenceMatrix {
 public:
  CorrespondenceMatrix() = default;

  // Validates, orients (a.image < b.image) and sorts the matches.
  // Throws IndexOutOfRange, DuplicateEntry, InvalidArgument (a.image == b.image).
  static CorrespondenceMatrix build(BlockPartition partition, std::vector<Match> matches);

  const BlockPartition& partition() const noexcept { return partition_; }
  Index dim() const noexcept { return partition_.total(); }

  // Sorted by (a.image, b.image, a.index, b.index).
  std::span<const Match> matches() const noexcept { return matches_; }
  std::size_t num_matches() const noexcept { return matches_.size(); }
  // Diagonal identities plus both orientations of every stored match.
  std::size_t nnz() const noexcept {
    return static_cast<std::size_t>(dim()) + 2 * matches_.size();
  }

  // Position of m in matches(), if stored. Orientation is normalized first.
  std::optional<std::size_t> find(Match m) const;
  bool contains(Match m) const { return find(m).has_value(); }

  // out = Q * v.
  void multiply(const MatrixXd& v, MatrixXd& out) const;
  MatrixXd dense() const;

  std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }

 private:
  BlockPartition partition_;
  std::vector<Match> matches_;
  // Symmetric off-diagonal pattern in CSR (both orientations).
  std::vector<Index> row_ptr_;
  std::vector<Index> col_idx_;
};

CorrespondenceMatrix build_correspondence(BlockPartition partition, std::vector<Match> matches);

// Q V for an L x S panel. Throws DimensionMismatch.
MatrixXd q_matvec(const CorrespondenceMatrix& q, const MatrixXd& v);

// Keypoint-to-registry assignment P (row-partial permutation blocks).
class GroundTruth {
 public:
  GroundTruth() = default;
  // assignment[global keypoint] = registry index in [0, registry_size).
  // Throws IndexOutOfRange or InvalidArgument (repeat within an image).
  GroundTruth(BlockPartition partition, int registry_size, std::vector<int> assignment);

  const BlockPartition& partition() const noexcept { return partition_; }
  int registry_size() const noexcept { return registry_size_; }
  std::span<const int> assignment() const noexcept { return assignment_; }
  int at(int image, int keypoint) const {
    return assignment_[static_cast<std::size_t>(partition_.global(image, keypoint))];
  }
  // Registry points hit by at least one keypoint.
  int observed_registry_size() const;

 private:
  BlockPartition partition_;
  int registry_size_ = 0;
  std::vector<int> assignment_;
};

// Q = P P^T.
CorrespondenceMatrix ground_truth_product(const GroundTruth& truth);

// Dual variables of the strong relaxation: one symmetric K^(i) x K^(i) block per image.
struct DualStrong {
  std::vector<MatrixXd> blocks;
  int iteration = 0;

  static DualStrong zeros(const BlockPartition& partition);
};

// Dual variables of the weak relaxation.
struct DualWeak {
  VectorXd lambda;  // length L
  VectorXd mu;      // length N
  int iteration = 0;

  static DualWeak zeros(const BlockPartition& partition);
};

// C_eff = -Q - (dual shift). Borrows Q, which must outlive the cost object.
class EffectiveCost {
 public:
  EffectiveCost(const CorrespondenceMatrix& q, DualStrong duals);
  EffectiveCost(const CorrespondenceMatrix& q, DualWeak duals);

  const CorrespondenceMatrix& base() const noexcept { return *q_; }
  Index dim() const noexcept { return q_->dim(); }
  bool is_strong() const noexcept { return std::holds_alternative<DualStrong>(duals_); }
  const std::variant<DualStrong, DualWeak>& duals() const noexcept { return duals_; }

  // Strong: (C - (+)Lambda) v. Weak: (C - diag(lambda) - (+) mu_i 11^T/K_i) v.
  void apply(const MatrixXd& v, MatrixXd& out) const;
  MatrixXd apply(const MatrixXd& v) const;
  MatrixXd dense() const;
  LinearOperator as_operator() const;

 private:
  const CorrespondenceMatrix* q_;
  std::variant<DualStrong, DualWeak> duals_;
};

MatrixXd effective_matvec(const EffectiveCost& cost, const MatrixXd& v);

}  // namespace pps
