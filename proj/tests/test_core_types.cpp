#include "pps/core_types.hpp"
#include "pps/error.hpp"
#include "pps/parallel.hpp"
#include "pps/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>

namespace pps {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected pps::Error";
  return ErrorCode::Io;
}

// Random valid correspondence: per pair, a random partial matching.
CorrespondenceMatrix random_q(const std::vector<int>& sizes, std::uint64_t seed, double density = 0.6) {
  BlockPartition part(sizes);
  Rng rng = Rng::stream(seed, {1});
  std::vector<Match> matches;
  for (int i = 0; i < part.images(); ++i) {
    for (int j = i + 1; j < part.images(); ++j) {
      const auto pi = rng.permutation(part.size(i));
      const auto pj = rng.permutation(part.size(j));
      const int n = std::min(part.size(i), part.size(j));
      for (int t = 0; t < n; ++t) {
        if (rng.uniform() < density) matches.push_back({{i, pi[t]}, {j, pj[t]}});
      }
    }
  }
  return build_correspondence(part, matches);
}

MatrixXd dense_reference(const CorrespondenceMatrix& q) {
  MatrixXd d = MatrixXd::Identity(q.dim(), q.dim());
  const auto& part = q.partition();
  for (const Match& m : q.matches()) {
    const Index a = part.global(m.a.image, m.a.index);
    const Index b = part.global(m.b.image, m.b.index);
    d(a, b) = 1.0;
    d(b, a) = 1.0;
  }
  return d;
}

GroundTruth random_truth(const std::vector<int>& sizes, int registry, std::uint64_t seed) {
  BlockPartition part(sizes);
  std::vector<int> assignment;
  for (int i = 0; i < part.images(); ++i) {
    Rng rng = Rng::stream(seed, {2, static_cast<std::uint64_t>(i)});
    const auto perm = rng.permutation(registry);
    for (int k = 0; k < part.size(i); ++k) assignment.push_back(perm[k]);
  }
  return GroundTruth(part, registry, assignment);
}

TEST(BlockPartition, Offsets) {
  BlockPartition p({2, 3, 1});
  EXPECT_EQ(p.images(), 3);
  EXPECT_EQ(p.total(), 6);
  EXPECT_EQ(p.offset(2), 5);
  EXPECT_EQ(p.global(1, 2), 4);
  EXPECT_EQ(p.image_of(4), 1);
  EXPECT_EQ(p.image_of(5), 2);
  EXPECT_EQ(p.max_size(), 3);
  EXPECT_DOUBLE_EQ(p.mean_size(), 2.0);
  EXPECT_FALSE(p.uniform());
  EXPECT_TRUE(BlockPartition({2, 2}).uniform());
}

TEST(BlockPartition, RejectsEmptyImage) {
  EXPECT_THROW(BlockPartition({2, 0}), Error);
}

TEST(Correspondence, SingleCrossMatchIsAllOnes) {
  auto q = build_correspondence(BlockPartition({1, 1}), {{{0, 0}, {1, 0}}});
  EXPECT_EQ(q.dense(), MatrixXd::Ones(2, 2));
  EXPECT_EQ(q.nnz(), 4u);
}

TEST(Correspondence, NoPairsIsIdentity) {
  auto q = build_correspondence(BlockPartition({2, 3}), {});
  EXPECT_EQ(q.dense(), MatrixXd::Identity(5, 5));
}

TEST(Correspondence, DuplicateRowInBlock) {
  EXPECT_EQ(code_of([] {
              build_correspondence(BlockPartition({1, 2}), {{{0, 0}, {1, 0}}, {{0, 0}, {1, 1}}});
            }),
            ErrorCode::DuplicateEntry);
}

TEST(Correspondence, DuplicateColumnInBlock) {
  EXPECT_EQ(code_of([] {
              build_correspondence(BlockPartition({2, 1}), {{{0, 0}, {1, 0}}, {{0, 1}, {1, 0}}});
            }),
            ErrorCode::DuplicateEntry);
}

TEST(Correspondence, RepeatedPairInEitherOrientation) {
  EXPECT_EQ(code_of([] {
              build_correspondence(BlockPartition({1, 1}), {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}});
            }),
            ErrorCode::DuplicateEntry);
}

TEST(Correspondence, IndexOutOfRange) {
  EXPECT_EQ(code_of([] { build_correspondence(BlockPartition({1, 1}), {{{0, 0}, {1, 1}}}); }),
            ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of([] { build_correspondence(BlockPartition({1, 1}), {{{0, 0}, {2, 0}}}); }),
            ErrorCode::IndexOutOfRange);
}

TEST(Correspondence, SameImagePairRejected) {
  EXPECT_EQ(code_of([] { build_correspondence(BlockPartition({2, 1}), {{{0, 0}, {0, 1}}}); }),
            ErrorCode::InvalidArgument);
}

TEST(Correspondence, OrientationAndFind) {
  auto q = build_correspondence(BlockPartition({2, 2, 2}), {{{2, 1}, {0, 0}}, {{1, 0}, {0, 1}}});
  ASSERT_EQ(q.num_matches(), 2u);
  for (const Match& m : q.matches()) EXPECT_LT(m.a.image, m.b.image);
  EXPECT_EQ(q.matches()[0].b.image, 1);
  EXPECT_TRUE(q.contains({{0, 0}, {2, 1}}));
  EXPECT_TRUE(q.contains({{2, 1}, {0, 0}}));
  EXPECT_FALSE(q.contains({{0, 0}, {2, 0}}));
}

TEST(QMatvec, IdentityPassesThrough) {
  auto q = build_correspondence(BlockPartition({3, 2}), {});
  MatrixXd v = MatrixXd::Random(5, 4);
  EXPECT_EQ(q_matvec(q, v), v);
}

TEST(QMatvec, TwoByTwoAllOnes) {
  auto q = build_correspondence(BlockPartition({1, 1}), {{{0, 0}, {1, 0}}});
  MatrixXd v(2, 1);
  v << 1, 0;
  MatrixXd expect(2, 1);
  expect << 1, 1;
  EXPECT_EQ(q_matvec(q, v), expect);
}

TEST(QMatvec, MatchesDenseOnRandomInstance) {
  auto q = random_q({3, 4, 2, 5, 3}, 11);
  MatrixXd v = MatrixXd::Random(q.dim(), 6);
  EXPECT_LE((q_matvec(q, v) - dense_reference(q) * v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(q.dense(), dense_reference(q));
}

TEST(QMatvec, DimensionMismatch) {
  auto q = build_correspondence(BlockPartition({2, 2}), {});
  EXPECT_EQ(code_of([&] { q_matvec(q, MatrixXd::Zero(3, 1)); }), ErrorCode::DimensionMismatch);
}

TEST(QMatvec, BasisColumnIsPartialPermutation) {
  auto q = random_q({3, 4, 2, 5}, 5, 0.9);
  const auto& part = q.partition();
  for (Index g = 0; g < q.dim(); ++g) {
    MatrixXd e = MatrixXd::Zero(q.dim(), 1);
    e(g, 0) = 1.0;
    const MatrixXd col = q_matvec(q, e);
    EXPECT_EQ(col(g, 0), 1.0);
    for (int i = 0; i < part.images(); ++i) {
      EXPECT_LE(col.col(0).segment(part.offset(i), part.size(i)).sum(), 1.0);
    }
  }
}

TEST(GroundTruthProduct, SingleImageIsIdentity) {
  GroundTruth t(BlockPartition({3}), 3, {2, 0, 1});
  auto q = ground_truth_product(t);
  EXPECT_EQ(q.dense(), MatrixXd::Identity(3, 3));
}

TEST(GroundTruthProduct, DistinctPointsGiveIdentity) {
  GroundTruth t(BlockPartition({2, 2}), 4, {0, 1, 2, 3});
  EXPECT_EQ(ground_truth_product(t).dense(), MatrixXd::Identity(4, 4));
}

TEST(GroundTruthProduct, MatchesNestedLoop) {
  auto t = random_truth({3, 4, 2, 5}, 6, 3);
  auto q = ground_truth_product(t);
  const auto a = t.assignment();
  MatrixXd expect(q.dim(), q.dim());
  for (Index r = 0; r < q.dim(); ++r) {
    for (Index c = 0; c < q.dim(); ++c) expect(r, c) = a[r] == a[c] ? 1.0 : 0.0;
  }
  EXPECT_EQ(q.dense(), expect);
}

TEST(GroundTruthProduct, ReindexedIsBlockOfOnes) {
  auto t = random_truth({3, 4, 2, 5}, 7, 9);
  const MatrixXd d = ground_truth_product(t).dense();
  std::vector<Index> order(static_cast<std::size_t>(d.rows()));
  std::iota(order.begin(), order.end(), 0);
  const auto a = t.assignment();
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return a[x] < a[y]; });
  MatrixXd reindexed(d.rows(), d.cols());
  for (Index r = 0; r < d.rows(); ++r) {
    for (Index c = 0; c < d.cols(); ++c) reindexed(r, c) = d(order[r], order[c]);
  }
  MatrixXd expect = MatrixXd::Zero(d.rows(), d.cols());
  Index start = 0;
  while (start < d.rows()) {
    Index end = start;
    while (end < d.rows() && a[order[end]] == a[order[start]]) ++end;
    expect.block(start, start, end - start, end - start).setOnes();
    start = end;
  }
  EXPECT_EQ(reindexed, expect);
}

TEST(GroundTruth, RejectsRepeatWithinImage) {
  EXPECT_EQ(code_of([] { GroundTruth(BlockPartition({2}), 3, {1, 1}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { GroundTruth(BlockPartition({2}), 3, {0, 3}); }), ErrorCode::IndexOutOfRange);
}

TEST(GroundTruth, ObservedRegistrySize) {
  GroundTruth t(BlockPartition({2, 1}), 10, {4, 7, 4});
  EXPECT_EQ(t.observed_registry_size(), 2);
}

MatrixXd dense_cost(const CorrespondenceMatrix& q, const DualStrong& d) {
  MatrixXd c = -dense_reference(q);
  const auto& part = q.partition();
  for (int i = 0; i < part.images(); ++i) {
    c.block(part.offset(i), part.offset(i), part.size(i), part.size(i)) -= d.blocks[i];
  }
  return c;
}

MatrixXd dense_cost(const CorrespondenceMatrix& q, const DualWeak& d) {
  MatrixXd c = -dense_reference(q);
  c.diagonal() -= d.lambda;
  const auto& part = q.partition();
  for (int i = 0; i < part.images(); ++i) {
    const int k = part.size(i);
    c.block(part.offset(i), part.offset(i), k, k).array() -= d.mu[i] / k;
  }
  return c;
}

DualStrong random_strong(const BlockPartition& part, std::uint64_t seed) {
  DualStrong d = DualStrong::zeros(part);
  Rng rng = Rng::stream(seed, {3});
  for (auto& b : d.blocks) {
    for (Index r = 0; r < b.rows(); ++r) {
      for (Index c = r; c < b.cols(); ++c) b(r, c) = b(c, r) = rng.normal();
    }
  }
  return d;
}

DualWeak random_weak(const BlockPartition& part, std::uint64_t seed) {
  DualWeak d = DualWeak::zeros(part);
  Rng rng = Rng::stream(seed, {4});
  for (Index r = 0; r < d.lambda.size(); ++r) d.lambda[r] = rng.normal();
  for (Index r = 0; r < d.mu.size(); ++r) d.mu[r] = rng.normal();
  return d;
}

TEST(EffectiveMatvec, ZeroDualsNegateQ) {
  auto q = random_q({2, 3, 2}, 4);
  MatrixXd v = MatrixXd::Random(q.dim(), 3);
  EffectiveCost s(q, DualStrong::zeros(q.partition()));
  EffectiveCost w(q, DualWeak::zeros(q.partition()));
  EXPECT_EQ(effective_matvec(s, v), -q_matvec(q, v));
  EXPECT_EQ(effective_matvec(w, v), -q_matvec(q, v));
}

TEST(EffectiveMatvec, WeakDiagonalArithmetic) {
  auto q = build_correspondence(BlockPartition({2, 1}), {});
  DualWeak d = DualWeak::zeros(q.partition());
  d.lambda.setOnes();
  MatrixXd e1 = MatrixXd::Zero(3, 1);
  e1(0, 0) = 1.0;
  EXPECT_EQ(effective_matvec(EffectiveCost(q, d), e1), -2.0 * e1);
}

TEST(EffectiveMatvec, MatchesDenseBothVariants) {
  auto q = random_q({3, 2, 4, 3}, 8);
  MatrixXd v = MatrixXd::Random(q.dim(), 5);
  const DualStrong ds = random_strong(q.partition(), 1);
  const DualWeak dw = random_weak(q.partition(), 2);
  EffectiveCost s(q, ds);
  EffectiveCost w(q, dw);
  EXPECT_LE((effective_matvec(s, v) - dense_cost(q, ds) * v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((effective_matvec(w, v) - dense_cost(q, dw) * v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((s.dense() - dense_cost(q, ds)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((w.dense() - dense_cost(q, dw)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EffectiveMatvec, Symmetric) {
  auto q = random_q({3, 2, 4, 3, 2}, 12);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EffectiveCost s(q, random_strong(q.partition(), seed));
    EffectiveCost w(q, random_weak(q.partition(), seed));
    const VectorXd u = gaussian_panel(q.dim(), 1, seed, {5});
    const VectorXd v = gaussian_panel(q.dim(), 1, seed, {6});
    for (const EffectiveCost* a : {&s, &w}) {
      const double norm = a->dense().norm();
      const double lhs = u.dot(effective_matvec(*a, v).col(0));
      const double rhs = v.dot(effective_matvec(*a, u).col(0));
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * norm * u.norm() * v.norm());
    }
  }
}

TEST(EffectiveMatvec, DimensionMismatch) {
  auto q = random_q({2, 2}, 1);
  EffectiveCost s(q, DualStrong::zeros(q.partition()));
  EXPECT_EQ(code_of([&] { effective_matvec(s, MatrixXd::Zero(5, 1)); }), ErrorCode::DimensionMismatch);
  DualWeak bad = DualWeak::zeros(q.partition());
  bad.mu.resize(3);
  EXPECT_EQ(code_of([&] { EffectiveCost(q, bad); }), ErrorCode::DimensionMismatch);
}

TEST(LinearOperator, CountsColumns) {
  LinearOperator op = LinearOperator::dense(MatrixXd::Identity(4, 4));
  LinearOperator copy = op;
  copy(MatrixXd::Zero(4, 3));
  op(MatrixXd::Zero(4, 2));
  EXPECT_EQ(op.column_matvecs(), 5u);
  op.reset_counter();
  EXPECT_EQ(copy.column_matvecs(), 0u);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  Rng a = Rng::stream(42, {1, 2});
  Rng b = Rng::stream(42, {1, 2});
  Rng c = Rng::stream(42, {1, 3});
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
}

TEST(Random, PermutationIsPermutation) {
  Rng r = Rng::stream(1, {});
  auto p = r.permutation(50);
  std::set<int> s(p.begin(), p.end());
  EXPECT_EQ(s.size(), 50u);
  EXPECT_EQ(*s.begin(), 0);
  EXPECT_EQ(*s.rbegin(), 49);
}

TEST(Random, NormalMoments) {
  Rng r = Rng::stream(3, {});
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Random, PanelColumnsIndependentOfWidth) {
  const MatrixXd a = gaussian_panel(7, 3, 9, {1});
  const MatrixXd b = gaussian_panel(7, 5, 9, {1});
  EXPECT_EQ(a, b.leftCols(3));
}

TEST(Parallel, ResultIndependentOfThreadCount) {
  std::vector<double> one(1000);
  std::vector<double> four(1000);
  auto fill = [](std::vector<double>& out) {
    parallel_for(0, 1000, [&](Index i) { out[static_cast<std::size_t>(i)] = std::sin(static_cast<double>(i)); });
  };
  setenv("PPS_THREADS", "1", 1);
  fill(one);
  setenv("PPS_THREADS", "4", 1);
  EXPECT_EQ(thread_count(), 4);
  fill(four);
  unsetenv("PPS_THREADS");
  EXPECT_EQ(one, four);
}

}  // namespace
}  // namespace pps
