#pragma once

#include "pps/core_types.hpp"
#include "pps/linear_operator.hpp"

#include <cstdint>
#include <vector>

namespace pps {

// Keypoint-to-registry assignment produced by the rounding procedures.
struct RegistrationMap {
  BlockPartition partition;
  int registry_size = 0;
  std::vector<int> assignment;  // global keypoint -> [0, registry_size)

  int at(int image, int keypoint) const {
    return assignment[static_cast<std::size_t>(partition.global(image, keypoint))];
  }
  // Total, injective per image, surjective onto [0, registry_size).
  // Throws InvalidArgument naming the first violation.
  void validate() const;
  GroundTruth as_ground_truth() const;
};

RegistrationMap registration_from_truth(const GroundTruth& truth);

// Two maps agree up to a bijective relabeling of registry points.
bool same_up_to_relabeling(const RegistrationMap& a, const RegistrationMap& b);

struct Assignment {
  std::vector<int> row_to_col;  // -1 for rows left unassigned (rows > cols)
  double cost = 0.0;
};

// Rectangular minimum-cost assignment of min(rows, cols) pairs by the
// shortest augmenting path method with potentials. Deterministic.
Assignment hungarian(const MatrixXd& costs);

// Full permutations relative to image 0 for a partition with uniform K:
// result[i][k] = l means keypoint k of image i matches keypoint l of image 0.
// result[0] is the identity.
std::vector<std::vector<int>> recover_full_slow(const LinearOperator& x, const BlockPartition& partition);

enum class PivotSelection { MaxOverlap, Random };

// MaxOverlap up to 500 images, Random above.
PivotSelection default_selection(int images);

struct RecoveryOptions {
  PivotSelection selection = PivotSelection::MaxOverlap;
  std::uint64_t seed = 0;
};

struct RecoveryTrace {
  std::vector<int> pivots;
  std::uint64_t x_columns = 0;  // panel columns multiplied by X
};

// Sign codes for one image: codes.row(l) = b(l) in {-1, +1}^d with
// d = max(1, ceil(log2 K_tilde)), from the MSB-first binary digits of tau(l).
struct BinaryEncoding {
  int keypoints = 0;
  int k_tilde = 0;
  int bits = 0;
  std::vector<int> tau;  // 0-based letters, tau[l] for the first K letters of a random permutation of [K_tilde]
  MatrixXd codes;        // K x d
};

int encoding_bits(int k_tilde);
BinaryEncoding make_binary_encoding(int keypoints, int k_tilde, std::uint64_t seed);
BinaryEncoding binary_encoding_from_letters(int keypoints, int k_tilde, std::vector<int> letters);
// One encoding per image with K_tilde = factor * max_i K_i and per-image streams.
std::vector<BinaryEncoding> make_encodings(const BlockPartition& partition, int k_tilde_factor, std::uint64_t seed);

// Slow partial recovery: pivot panels X E_j with K_j columns.
// Throws NonTermination if more than N pivots are needed.
RegistrationMap recover_partial_slow(const LinearOperator& x, const CorrespondenceMatrix& q,
                                     const RecoveryOptions& options = {}, RecoveryTrace* trace = nullptr);

// Fast partial recovery: pivot panels X E_j with d_j columns of sign codes.
RegistrationMap recover_partial_fast(const LinearOperator& x, const CorrespondenceMatrix& q,
                                     const std::vector<BinaryEncoding>& encodings,
                                     const RecoveryOptions& options = {}, RecoveryTrace* trace = nullptr);

struct GmmFit {
  double weight[2] = {0.0, 0.0};
  double mean[2] = {0.0, 0.0};
  double variance[2] = {0.0, 0.0};
  double cutoff = 0.0;
  int iterations = 0;
};

inline constexpr double kGmmMinWeight = 1e-6;
inline constexpr double kGmmMinVariance = 1e-12;

// Two-component 1-D EM started from a median split; components sorted by mean.
// Throws EmptyInput (fewer than 4 values) or DegenerateGMM.
GmmFit gmm_fit(const std::vector<double>& values, int max_iter = 100);
double gmm_threshold(const std::vector<double>& values, int max_iter = 100);

// Nearest-rank percentile, p in (0, 100). Throws EmptyInput / InvalidArgument.
double percentile_threshold(const std::vector<double>& values, double p);

enum class ThresholdMode { Gmm, Percentile };

struct ThresholdOptions {
  ThresholdMode mode = ThresholdMode::Gmm;
  // Share of scored matches to retain in percentile mode (also the GMM fallback).
  double percentile = 90.0;
};

struct MaskedScores {
  std::vector<double> scores;  // aligned with Q.matches()
  std::vector<char> retained;  // score > cutoff
  double cutoff = 0.0;
  ThresholdMode mode_used = ThresholdMode::Gmm;
  bool gmm_fallback = false;

  std::size_t retained_count() const;
};

// Cutoff for the given scores; falls back to percentile mode when the
// GMM is degenerate and reports it through `fell_back`.
double select_cutoff(const std::vector<double>& scores, const ThresholdOptions& options, bool* fell_back,
                     ThresholdMode* mode_used = nullptr);

MaskedScores threshold_scores(std::vector<double> scores, const ThresholdOptions& options);

// Scores every stored match by w_k . w_l / S with W = X^{1/2} Z.
MaskedScores masked_recover(const LinearOperator& x_half, const CorrespondenceMatrix& q, int samples,
                            std::uint64_t seed, const ThresholdOptions& options = {});

// Stored matches of Q whose endpoints share a registry point under R.
std::vector<char> induced_matches(const RegistrationMap& r, const CorrespondenceMatrix& q);

}  // namespace pps
