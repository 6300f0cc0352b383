#include "pps/synth.hpp"

#include "pps/error.hpp"
#include "pps/parallel.hpp"
#include "pps/random.hpp"

#include <vector>

namespace pps {

namespace {

struct PairDraw {
  bool corrupted = false;
  std::vector<Match> matches;
};

// Matches between keypoints of images i and j that share a letter.
void pair_matches(int i, int j, const std::vector<int>& left, const std::vector<int>& right, int registry,
                  std::vector<Match>& out) {
  std::vector<int> owner(static_cast<std::size_t>(registry), -1);
  for (std::size_t l = 0; l < right.size(); ++l) owner[static_cast<std::size_t>(right[l])] = static_cast<int>(l);
  for (std::size_t k = 0; k < left.size(); ++k) {
    const int l = owner[static_cast<std::size_t>(left[k])];
    if (l >= 0) out.push_back(Match{{i, static_cast<int>(k)}, {j, l}});
  }
}

std::vector<int> random_injection(Rng& rng, int count, int registry) {
  std::vector<int> perm = rng.permutation(registry);
  perm.resize(static_cast<std::size_t>(count));
  return perm;
}

PairDraw draw_pair(const GroundTruth& truth, const std::vector<std::vector<int>>& letters, int i, int j, double q,
                   std::uint64_t seed) {
  Rng rng = Rng::stream(seed, {stream_tag::kSynthPair, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
  PairDraw d;
  const int m = truth.registry_size();
  d.corrupted = rng.uniform() < q;
  if (d.corrupted) {
    const auto p1 = random_injection(rng, truth.partition().size(i), m);
    const auto p2 = random_injection(rng, truth.partition().size(j), m);
    pair_matches(i, j, p1, p2, m, d.matches);
  } else {
    pair_matches(i, j, letters[static_cast<std::size_t>(i)], letters[static_cast<std::size_t>(j)], m, d.matches);
  }
  return d;
}

std::vector<std::vector<int>> letters_by_image(const GroundTruth& truth) {
  const BlockPartition& part = truth.partition();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(part.images()));
  for (int i = 0; i < part.images(); ++i)
    for (int k = 0; k < part.size(i); ++k) out[static_cast<std::size_t>(i)].push_back(truth.at(i, k));
  return out;
}

std::vector<PairDraw> draw_all(const GroundTruth& truth, double q, std::uint64_t seed) {
  require(q >= 0.0 && q <= 1.0, ErrorCode::InvalidArgument, "corruption probability must lie in [0, 1]");
  const int n = truth.partition().images();
  const auto letters = letters_by_image(truth);
  std::vector<PairDraw> draws(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  parallel_for(0, n, [&](Index i) {
    for (int j = static_cast<int>(i) + 1; j < n; ++j)
      draws[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
          draw_pair(truth, letters, static_cast<int>(i), j, q, seed);
  });
  return draws;
}

}  // namespace

void SynthConfig::validate() const {
  require(images >= 1, ErrorCode::InvalidArgument, "need at least one image");
  require(k_min >= 1 && k_min <= k_max && k_max <= registry, ErrorCode::InvalidArgument,
          "need 1 <= kmin <= kmax <= M");
  require(q >= 0.0 && q <= 1.0, ErrorCode::InvalidArgument, "corruption probability must lie in [0, 1]");
}

GroundTruth gen_ground_truth(const SynthConfig& cfg) {
  cfg.validate();
  Rng sizes = Rng::stream(cfg.seed, {stream_tag::kSynthSizes});
  std::vector<int> k(static_cast<std::size_t>(cfg.images));
  const auto span = static_cast<std::uint64_t>(cfg.k_max - cfg.k_min + 1);
  for (int& ki : k) ki = cfg.k_min + static_cast<int>(sizes.below(span));

  std::vector<int> assignment;
  for (int i = 0; i < cfg.images; ++i) {
    Rng rng = Rng::stream(cfg.seed, {stream_tag::kSynthTruth, static_cast<std::uint64_t>(i)});
    const auto letters = random_injection(rng, k[static_cast<std::size_t>(i)], cfg.registry);
    assignment.insert(assignment.end(), letters.begin(), letters.end());
  }
  return GroundTruth(BlockPartition(std::move(k)), cfg.registry, std::move(assignment));
}

CorrespondenceMatrix corrupt(const GroundTruth& truth, double q, std::uint64_t seed) {
  auto draws = draw_all(truth, q, seed);
  std::vector<Match> matches;
  for (auto& d : draws) matches.insert(matches.end(), d.matches.begin(), d.matches.end());
  return CorrespondenceMatrix::build(truth.partition(), std::move(matches));
}

std::vector<char> corrupted_pairs(const GroundTruth& truth, double q, std::uint64_t seed) {
  const auto draws = draw_all(truth, q, seed);
  std::vector<char> out(draws.size(), 0);
  for (std::size_t t = 0; t < draws.size(); ++t) out[t] = draws[t].corrupted ? 1 : 0;
  return out;
}

}  // namespace pps
