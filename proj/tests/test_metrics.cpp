#include "pps/metrics.hpp"
#include "pps/synth.hpp"
#include "testing.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace pps {
namespace {

using testing::code_of;

TEST(Evaluate, PerfectSelection) {
  const MatchMask truth = {1, 0, 1, 1, 0};
  const MatchEvaluation e = evaluate(truth, truth);
  EXPECT_EQ(e.precision, 1.0);
  EXPECT_EQ(e.recall, 1.0);
  EXPECT_EQ(e.f1, 1.0);
  EXPECT_FALSE(e.empty_selection);
}

TEST(Evaluate, DirectFormula) {
  const MatchMask truth = {1, 1, 1, 1, 0, 0};
  const MatchMask zhat = {1, 1, 0, 0, 1, 0};
  const MatchEvaluation e = evaluate(zhat, truth);
  EXPECT_DOUBLE_EQ(e.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(e.recall, 0.5);
  EXPECT_DOUBLE_EQ(e.f1, 4.0 / 7.0);
  EXPECT_EQ(e.retained, 3u);
  EXPECT_EQ(e.true_retained, 2u);
  EXPECT_EQ(e.total_true, 4u);
}

TEST(Evaluate, EmptySelection) {
  const MatchEvaluation e = evaluate(MatchMask(4, 0), MatchMask{1, 0, 1, 0});
  EXPECT_EQ(e.recall, 0.0);
  EXPECT_EQ(e.f1, 0.0);
  EXPECT_EQ(e.precision, 1.0);
  EXPECT_TRUE(e.empty_selection);
  EXPECT_EQ(e.retained, 0u);
}

TEST(Evaluate, RangeAndF1Bound) {
  Rng rng = Rng::stream(1, {});
  for (int trial = 0; trial < 200; ++trial) {
    MatchMask truth(30);
    MatchMask zhat(30);
    for (int t = 0; t < 30; ++t) {
      truth[t] = rng.uniform() < 0.5;
      zhat[t] = rng.uniform() < 0.5;
    }
    const MatchEvaluation e = evaluate(zhat, truth);
    EXPECT_GE(e.precision, 0.0);
    EXPECT_LE(e.precision, 1.0);
    EXPECT_GE(e.recall, 0.0);
    EXPECT_LE(e.recall, 1.0);
    EXPECT_LE(e.f1, std::min(2 * e.precision, 2 * e.recall) + 1e-15);
  }
}

TEST(Evaluate, SizeMismatch) {
  EXPECT_EQ(code_of([] { evaluate(MatchMask(3, 0), MatchMask(4, 0)); }), ErrorCode::DimensionMismatch);
}

TEST(TruthMask, AgainstGroundTruthAndProduct) {
  const GroundTruth t = gen_ground_truth({8, 12, 3, 7, 0.0, 2});
  const auto q = corrupt(t, 0.5, 3);
  const MatchMask a = truth_mask(q, t);
  const MatchMask b = truth_mask(q, ground_truth_product(t));
  EXPECT_EQ(a, b);
  for (std::size_t e = 0; e < q.num_matches(); ++e) {
    const Match& m = q.matches()[e];
    EXPECT_EQ(a[e] != 0, t.at(m.a.image, m.a.index) == t.at(m.b.image, m.b.index));
  }
}

TEST(MaskFromMatches, SupportViolationNamesPair) {
  const auto q = build_correspondence(BlockPartition({2, 2}), {{{0, 0}, {1, 1}}});
  const MatchMask ok = mask_from_matches(q, {{{1, 1}, {0, 0}}});
  EXPECT_EQ(ok, MatchMask{1});
  try {
    mask_from_matches(q, {{{0, 1}, {1, 0}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SupportViolation);
    EXPECT_NE(std::string(e.what()).find("(1,2)"), std::string::npos) << e.what();
  }
}

TEST(PrCurve, Extremes) {
  const std::vector<double> scores = {0.1, 0.9, 0.4, 0.8, 0.2};
  const MatchMask truth = {0, 1, 1, 1, 0};
  const auto curve = pr_curve(scores, truth, {0.0, 0.5, 1.0});
  EXPECT_EQ(curve[0].eval.recall, 1.0);
  EXPECT_EQ(curve[2].eval.retained, 0u);
  for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_LE(curve[k].eval.retained, curve[k - 1].eval.retained);
}

TEST(PrCurve, SeparatedScoresReachPerfect) {
  const std::vector<double> scores = {1, 0, 1, 0, 1};
  const MatchMask truth = {1, 0, 1, 0, 1};
  const auto curve = pr_curve(scores, truth, threshold_grid(scores, 11));
  EXPECT_TRUE(std::any_of(curve.begin(), curve.end(),
                          [](const PrPoint& p) { return p.eval.precision == 1.0 && p.eval.recall == 1.0; }));
}

TEST(PrCurve, RequiresSortedThresholds) {
  EXPECT_EQ(code_of([] { pr_curve({0.5}, {1}, {0.7, 0.2}); }), ErrorCode::InvalidArgument);
}

TEST(PrCurve, RetainedMonotone) {
  Rng rng = Rng::stream(4, {});
  std::vector<double> scores(100);
  MatchMask truth(100);
  for (int t = 0; t < 100; ++t) {
    scores[t] = rng.normal();
    truth[t] = rng.uniform() < 0.4;
  }
  const auto curve = pr_curve(scores, truth, threshold_grid(scores, 50));
  ASSERT_EQ(curve.size(), 50u);
  for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_LE(curve[k].eval.retained, curve[k - 1].eval.retained);
}

TEST(ThresholdGrid, SpansRange) {
  const auto g = threshold_grid({3.0, -1.0, 2.0}, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), -1.0);
  EXPECT_EQ(g.back(), 3.0);
  EXPECT_DOUBLE_EQ(g[2], 1.0);
}

TEST(AveragePrecision, KnownValues) {
  EXPECT_DOUBLE_EQ(average_precision({0.9, 0.8, 0.1}, {1, 1, 0}), 1.0);
  // Ranking: T F T -> (1/1 + 2/3) / 2.
  EXPECT_NEAR(average_precision({0.9, 0.8, 0.7}, {1, 0, 1}), (1.0 + 2.0 / 3.0) / 2.0, 1e-15);
  // All tied: precision of the whole set.
  EXPECT_NEAR(average_precision({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}), 0.5, 1e-15);
  EXPECT_EQ(average_precision({0.3}, {0}), 0.0);
}

}  // namespace
}  // namespace pps
