#include "pps/baseline_spectral.hpp"
#include "pps/dense_oracle.hpp"
#include "pps/synth.hpp"
#include "testing.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

namespace pps {
namespace {

using testing::code_of;

double orthonormality_error(const MatrixXd& v) {
  return (v.transpose() * v - MatrixXd::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
}

TEST(SpectralRank, TwiceMeanSize) {
  EXPECT_EQ(default_spectral_rank(BlockPartition({3, 4, 4})), 7);
  EXPECT_EQ(default_spectral_rank(BlockPartition({1})), 1);
  EXPECT_EQ(default_spectral_rank(BlockPartition({2, 2})), 4);
}

TEST(TopEigvecs, IdentityMatrix) {
  const auto q = build_correspondence(BlockPartition({4, 4, 4}), {});
  const SpectralEmbedding e = top_eigvecs(q, 5, 50, 1e-8, 1);
  EXPECT_TRUE(e.converged);
  EXPECT_EQ(e.rank, 5);
  EXPECT_LE(orthonormality_error(e.v), 1e-8);
  for (Index k = 0; k < e.ritz.size(); ++k) EXPECT_NEAR(e.ritz[k], 1.0, 1e-10);
}

TEST(TopEigvecs, UncorruptedEigenvaluesAreRegistryBlockSizes) {
  const GroundTruth t = gen_ground_truth({10, 12, 3, 8, 0.0, 3});
  const auto q = ground_truth_product(t);
  std::vector<double> sizes;
  for (const auto& s : dense::registry_index_sets(t)) sizes.push_back(static_cast<double>(s.size()));
  std::sort(sizes.rbegin(), sizes.rend());
  const int rank = 6;
  const SpectralEmbedding e = top_eigvecs(q, rank, 50, 1e-8, 2);
  ASSERT_TRUE(e.converged);
  for (int k = 0; k < rank; ++k) EXPECT_NEAR(e.ritz[k], sizes[static_cast<std::size_t>(k)], 1e-6);
  EXPECT_LE(orthonormality_error(e.v), 1e-8);
}

TEST(TopEigvecs, FullRankMatchesDense) {
  const GroundTruth t = gen_ground_truth({5, 6, 4, 4, 0.0, 4});
  const auto q = corrupt(t, 0.4, 5);
  ASSERT_EQ(q.dim(), 20);
  const SpectralEmbedding e = top_eigvecs(q, 20, 50, 1e-8, 3);
  VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(q.dense()).eigenvalues().reverse();
  for (int k = 0; k < 20; ++k) EXPECT_NEAR(e.ritz[k], ev[k], 1e-6);
  EXPECT_LE(orthonormality_error(e.v), 1e-8);
}

TEST(TopEigvecs, ResidualsWithinTolerance) {
  const GroundTruth t = gen_ground_truth({15, 20, 5, 10, 0.0, 6});
  const auto q = corrupt(t, 0.3, 7);
  const int rank = default_spectral_rank(q.partition());
  const double tol = 1e-6;
  const SpectralEmbedding e = top_eigvecs(q, rank, 50, tol, 4);
  ASSERT_TRUE(e.converged);
  const MatrixXd qv = q_matvec(q, e.v);
  for (int k = 0; k < rank; ++k) {
    const double r = (qv.col(k) - e.ritz[k] * e.v.col(k)).norm();
    EXPECT_LE(r, tol * std::max(std::abs(e.ritz[0]), 1.0));
  }
  EXPECT_NO_THROW(require_converged(e));
}

TEST(TopEigvecs, ExhaustedCyclesFlagged) {
  const GroundTruth t = gen_ground_truth({40, 60, 10, 20, 0.0, 8});
  const auto q = corrupt(t, 0.5, 9);
  const SpectralEmbedding e = top_eigvecs(q, 30, 1, 1e-14, 5);
  EXPECT_FALSE(e.converged);
  EXPECT_EQ(e.cycles, 1);
  EXPECT_EQ(code_of([&] { require_converged(e); }), ErrorCode::NoConvergence);
}

TEST(TopEigvecs, Deterministic) {
  const GroundTruth t = gen_ground_truth({10, 15, 4, 8, 0.0, 10});
  const auto q = corrupt(t, 0.2, 11);
  const SpectralEmbedding a = top_eigvecs(q, 8, 50, 1e-8, 6);
  const SpectralEmbedding b = top_eigvecs(q, 8, 50, 1e-8, 6);
  EXPECT_EQ(a.v, b.v);
}

TEST(TopEigvecs, InvalidRank) {
  const auto q = build_correspondence(BlockPartition({2, 2}), {});
  EXPECT_EQ(code_of([&] { top_eigvecs(q, 5); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { top_eigvecs(q, 0); }), ErrorCode::InvalidArgument);
}

TEST(SpectralScores, ProjectorEntriesOnUncorruptedInput) {
  const GroundTruth t = gen_ground_truth({8, 10, 3, 6, 0.0, 12});
  const auto q = ground_truth_product(t);
  const auto sets = dense::registry_index_sets(t);
  const int m = static_cast<int>(sets.size());
  const SpectralEmbedding e = top_eigvecs(q, m, 50, 1e-10, 7);
  ASSERT_TRUE(e.converged);
  const auto scores = spectral_scores(e.v, q);
  std::vector<int> block_size(static_cast<std::size_t>(q.dim()));
  for (const auto& s : sets)
    for (Index g : s) block_size[static_cast<std::size_t>(g)] = static_cast<int>(s.size());
  const auto& part = q.partition();
  for (std::size_t k = 0; k < q.num_matches(); ++k) {
    const Match& mt = q.matches()[k];
    EXPECT_NEAR(scores[k], 1.0 / block_size[static_cast<std::size_t>(part.global(mt.a.image, mt.a.index))], 1e-8);
  }
}

TEST(SpectralScores, CauchySchwarzBound) {
  const GroundTruth t = gen_ground_truth({6, 10, 3, 6, 0.0, 13});
  const auto q = corrupt(t, 0.5, 14);
  const MatrixXd g = gaussian_panel(q.dim(), 5, 1, {1});
  const MatrixXd v = Eigen::HouseholderQR<MatrixXd>(g).householderQ() * MatrixXd::Identity(q.dim(), 5);
  const auto scores = spectral_scores(v, q);
  const auto& part = q.partition();
  for (std::size_t k = 0; k < q.num_matches(); ++k) {
    const Match& mt = q.matches()[k];
    const Index a = part.global(mt.a.image, mt.a.index);
    const Index b = part.global(mt.b.image, mt.b.index);
    EXPECT_TRUE(std::isfinite(scores[k]));
    EXPECT_LE(std::abs(scores[k]), v.row(a).norm() * v.row(b).norm() + 1e-12);
  }
}

TEST(SpectralScores, DimensionMismatch) {
  const auto q = build_correspondence(BlockPartition({2, 2}), {{{0, 0}, {1, 0}}});
  EXPECT_EQ(code_of([&] { spectral_scores(MatrixXd::Zero(3, 1), q); }), ErrorCode::DimensionMismatch);
}

}  // namespace
}  // namespace pps
