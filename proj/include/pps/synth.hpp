#pragma once

#include "pps/core_types.hpp"

#include <cstdint>

namespace pps {

struct SynthConfig {
  int images = 100;
  int registry = 1000;
  int k_min = 100;
  int k_max = 200;
  double q = 0.0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless 1 <= k_min <= k_max <= registry, images >= 1, q in [0, 1].
  void validate() const;
};

// K_i uniform on [k_min, k_max]; image i sees the first K_i letters of a
// uniform random permutation of the registry.
GroundTruth gen_ground_truth(const SynthConfig& cfg);

// Each pair i < j independently keeps P_i P_j^T with probability 1 - q and is
// otherwise replaced by P1 P2^T for fresh row-partial permutations
// P1 (K_i x M) and P2 (K_j x M). One random substream per pair.
CorrespondenceMatrix corrupt(const GroundTruth& truth, double q, std::uint64_t seed);

// Pairs replaced by corrupt(); pair (i, j) with i < j at index i * N + j.
std::vector<char> corrupted_pairs(const GroundTruth& truth, double q, std::uint64_t seed);

}  // namespace pps
