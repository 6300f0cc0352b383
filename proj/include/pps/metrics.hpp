#pragma once

#include "pps/core_types.hpp"

#include <cstddef>
#include <vector>

namespace pps {

// Binary selection over the stored matches of an observed Q, aligned with
// Q.matches(). Each unordered match is counted once.
using MatchMask = std::vector<char>;

struct MatchEvaluation {
  double precision = 1.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t retained = 0;
  std::size_t true_retained = 0;
  std::size_t total_true = 0;
  // No match retained: precision is undefined and reported as 1.
  bool empty_selection = true;
};

// Stored matches of q that the ground truth marks as correct.
MatchMask truth_mask(const CorrespondenceMatrix& q, const GroundTruth& truth);
MatchMask truth_mask(const CorrespondenceMatrix& q, const CorrespondenceMatrix& q_star);

// P = |Zhat & Q*| / |Zhat|, R = |Zhat & Q*| / |Q* & Q|, F1 the harmonic mean.
MatchEvaluation evaluate(const MatchMask& zhat, const MatchMask& truth);

// Selection given as explicit matches: each must be stored in q, otherwise
// SupportViolation is thrown naming the offending pair.
MatchMask mask_from_matches(const CorrespondenceMatrix& q, const std::vector<Match>& selected);

struct PrPoint {
  double threshold = 0.0;
  MatchEvaluation eval;
};

// One evaluation of (score > theta) per threshold; thresholds must be sorted.
std::vector<PrPoint> pr_curve(const std::vector<double>& scores, const MatchMask& truth,
                              const std::vector<double>& thresholds);

// Average precision of the ranking by decreasing score (area under the PR curve).
double average_precision(const std::vector<double>& scores, const MatchMask& truth);

// n evenly spaced thresholds spanning [min, max] of the scores.
std::vector<double> threshold_grid(const std::vector<double>& scores, int n);

}  // namespace pps
