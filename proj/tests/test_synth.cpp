#include "pps/metrics.hpp"
#include "pps/synth.hpp"
#include "testing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

namespace pps {
namespace {

using testing::code_of;

TEST(SynthConfig, Validation) {
  SynthConfig cfg;
  cfg.k_max = 2000;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidArgument);
  cfg = SynthConfig{};
  cfg.k_min = 0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidArgument);
  cfg = SynthConfig{};
  cfg.q = 1.5;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidArgument);
  cfg = SynthConfig{};
  cfg.images = 0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidArgument);
  EXPECT_NO_THROW(SynthConfig{}.validate());
}

TEST(GenGroundTruth, FullImagesSeeEveryPoint) {
  SynthConfig cfg{5, 7, 7, 7, 0.0, 3};
  const GroundTruth t = gen_ground_truth(cfg);
  for (int i = 0; i < 5; ++i) {
    std::set<int> seen;
    for (int k = 0; k < 7; ++k) seen.insert(t.at(i, k));
    EXPECT_EQ(seen.size(), 7u);
  }
}

TEST(GenGroundTruth, SinglePointRegistry) {
  const GroundTruth t = gen_ground_truth({4, 1, 1, 1, 0.0, 1});
  for (int i = 0; i < 4; ++i) EXPECT_EQ(t.at(i, 0), 0);
  EXPECT_EQ(ground_truth_product(t).num_matches(), 6u);
}

TEST(GenGroundTruth, SizesWithinRange) {
  const GroundTruth t = gen_ground_truth({200, 50, 3, 9, 0.0, 2});
  std::set<int> sizes;
  for (int s : t.partition().sizes()) {
    EXPECT_GE(s, 3);
    EXPECT_LE(s, 9);
    sizes.insert(s);
  }
  EXPECT_EQ(sizes.size(), 7u);
}

TEST(GenGroundTruth, OrderedPairsUniform) {
  const int n = 10000;
  const GroundTruth t = gen_ground_truth({n, 5, 2, 2, 0.0, 4});
  std::map<std::pair<int, int>, int> counts;
  for (int i = 0; i < n; ++i) ++counts[{t.at(i, 0), t.at(i, 1)}];
  EXPECT_EQ(counts.size(), 20u);
  const double p = 1.0 / 20.0;
  const double sigma = std::sqrt(p * (1 - p) / n);
  for (const auto& [pair, c] : counts) EXPECT_NEAR(static_cast<double>(c) / n, p, 3.5 * sigma);
}

TEST(Corrupt, ZeroProbabilityIsTruthProduct) {
  const GroundTruth t = gen_ground_truth({12, 30, 5, 15, 0.0, 5});
  const auto q = corrupt(t, 0.0, 9);
  const auto p = ground_truth_product(t);
  ASSERT_EQ(q.num_matches(), p.num_matches());
  for (std::size_t e = 0; e < q.num_matches(); ++e) EXPECT_EQ(q.matches()[e], p.matches()[e]);
}

TEST(Corrupt, FullCorruptionIsIndependentOfTruth) {
  const GroundTruth t = gen_ground_truth({60, 20, 4, 8, 0.0, 6});
  const auto q = corrupt(t, 1.0, 7);
  const auto& part = t.partition();
  const int m = t.registry_size();
  // Block nnz against the hypergeometric mean K_i K_j / M, and agreement with
  // truth against (true pairs) / M.
  std::vector<double> nnz(static_cast<std::size_t>(part.images() * part.images()), 0.0);
  double agree = 0.0;
  for (const Match& mt : q.matches()) {
    nnz[static_cast<std::size_t>(mt.a.image * part.images() + mt.b.image)] += 1.0;
    if (t.at(mt.a.image, mt.a.index) == t.at(mt.b.image, mt.b.index)) agree += 1.0;
  }
  double observed = 0.0;
  double expected = 0.0;
  for (int i = 0; i < part.images(); ++i) {
    for (int j = i + 1; j < part.images(); ++j) {
      observed += nnz[static_cast<std::size_t>(i * part.images() + j)];
      expected += static_cast<double>(part.size(i)) * part.size(j) / m;
    }
  }
  EXPECT_NEAR(observed / expected, 1.0, 0.05);
  const double true_pairs = static_cast<double>(ground_truth_product(t).num_matches());
  const double expected_agree = true_pairs / m;
  EXPECT_NEAR(agree, expected_agree, 4.0 * std::sqrt(expected_agree));
}

TEST(Corrupt, CorruptedFractionConcentrates) {
  const GroundTruth t = gen_ground_truth({142, 3, 1, 2, 0.0, 8});
  const auto flags = corrupted_pairs(t, 0.3, 10);
  const int n = t.partition().images();
  double count = 0.0;
  double pairs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      pairs += 1.0;
      count += flags[static_cast<std::size_t>(i * n + j)];
    }
  }
  EXPECT_GE(pairs, 10000.0);
  EXPECT_NEAR(count / pairs, 0.3, 0.015);
}

TEST(Corrupt, UncorruptedPairsKeepTruthBlocks) {
  const GroundTruth t = gen_ground_truth({20, 15, 3, 8, 0.0, 11});
  const auto q = corrupt(t, 0.4, 12);
  const auto flags = corrupted_pairs(t, 0.4, 12);
  const int n = t.partition().images();
  for (const Match& m : q.matches()) {
    if (!flags[static_cast<std::size_t>(m.a.image * n + m.b.image)])
      EXPECT_EQ(t.at(m.a.image, m.a.index), t.at(m.b.image, m.b.index));
  }
  const auto p = ground_truth_product(t);
  for (const Match& m : p.matches()) {
    if (!flags[static_cast<std::size_t>(m.a.image * n + m.b.image)]) EXPECT_TRUE(q.contains(m));
  }
}

TEST(Corrupt, Deterministic) {
  const GroundTruth t = gen_ground_truth({15, 20, 3, 9, 0.0, 13});
  const auto a = corrupt(t, 0.3, 14);
  const auto b = corrupt(t, 0.3, 14);
  const auto c = corrupt(t, 0.3, 15);
  ASSERT_EQ(a.num_matches(), b.num_matches());
  for (std::size_t e = 0; e < a.num_matches(); ++e) EXPECT_EQ(a.matches()[e], b.matches()[e]);
  bool differs = a.num_matches() != c.num_matches();
  for (std::size_t e = 0; !differs && e < a.num_matches(); ++e) differs = !(a.matches()[e] == c.matches()[e]);
  EXPECT_TRUE(differs);
}

TEST(Corrupt, SingleImageIsIdentity) {
  const GroundTruth t = gen_ground_truth({1, 10, 4, 4, 0.0, 1});
  EXPECT_EQ(corrupt(t, 0.5, 2).num_matches(), 0u);
}

}  // namespace
}  // namespace pps
