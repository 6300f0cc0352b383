#include "pps/metrics.hpp"

#include "pps/error.hpp"

#include <algorithm>
#include <numeric>

namespace pps {

MatchMask truth_mask(const CorrespondenceMatrix& q, const GroundTruth& truth) {
  require(q.partition() == truth.partition(), ErrorCode::DimensionMismatch, "Q and ground truth partitions differ");
  MatchMask out;
  out.reserve(q.num_matches());
  for (const Match& m : q.matches()) out.push_back(truth.at(m.a.image, m.a.index) == truth.at(m.b.image, m.b.index));
  return out;
}

MatchMask truth_mask(const CorrespondenceMatrix& q, const CorrespondenceMatrix& q_star) {
  require(q.partition() == q_star.partition(), ErrorCode::DimensionMismatch, "Q and Q* partitions differ");
  MatchMask out;
  out.reserve(q.num_matches());
  for (const Match& m : q.matches()) out.push_back(q_star.contains(m) ? 1 : 0);
  return out;
}

MatchEvaluation evaluate(const MatchMask& zhat, const MatchMask& truth) {
  require(zhat.size() == truth.size(), ErrorCode::DimensionMismatch, "selection and truth masks differ in length");
  MatchEvaluation e;
  for (std::size_t t = 0; t < zhat.size(); ++t) {
    e.retained += zhat[t] ? 1 : 0;
    e.total_true += truth[t] ? 1 : 0;
    e.true_retained += (zhat[t] && truth[t]) ? 1 : 0;
  }
  e.empty_selection = e.retained == 0;
  e.precision = e.empty_selection ? 1.0 : static_cast<double>(e.true_retained) / static_cast<double>(e.retained);
  e.recall = e.total_true == 0 ? 0.0 : static_cast<double>(e.true_retained) / static_cast<double>(e.total_true);
  e.f1 = (e.true_retained == 0) ? 0.0 : 2.0 / (1.0 / e.precision + 1.0 / e.recall);
  return e;
}

MatchMask mask_from_matches(const CorrespondenceMatrix& q, const std::vector<Match>& selected) {
  MatchMask out(q.num_matches(), 0);
  for (const Match& m : selected) {
    const auto pos = q.find(m);
    require(pos.has_value(), ErrorCode::SupportViolation,
            "match (" + std::to_string(m.a.image + 1) + "," + std::to_string(m.a.index + 1) + ")-(" +
                std::to_string(m.b.image + 1) + "," + std::to_string(m.b.index + 1) + ") is not in Q");
    out[*pos] = 1;
  }
  return out;
}

std::vector<PrPoint> pr_curve(const std::vector<double>& scores, const MatchMask& truth,
                              const std::vector<double>& thresholds) {
  require(scores.size() == truth.size(), ErrorCode::DimensionMismatch, "scores and truth differ in length");
  require(std::is_sorted(thresholds.begin(), thresholds.end()), ErrorCode::InvalidArgument,
          "thresholds must be sorted");
  std::vector<PrPoint> out;
  out.reserve(thresholds.size());
  MatchMask sel(scores.size());
  for (double theta : thresholds) {
    for (std::size_t t = 0; t < scores.size(); ++t) sel[t] = scores[t] > theta ? 1 : 0;
    out.push_back({theta, evaluate(sel, truth)});
  }
  return out;
}

double average_precision(const std::vector<double>& scores, const MatchMask& truth) {
  require(scores.size() == truth.size(), ErrorCode::DimensionMismatch, "scores and truth differ in length");
  const auto total = static_cast<std::size_t>(std::count_if(truth.begin(), truth.end(), [](char c) { return c != 0; }));
  if (total == 0) return 0.0;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  // Tied scores enter together, as a threshold cannot split them.
  double ap = 0.0;
  std::size_t seen = 0, hits = 0;
  for (std::size_t t = 0; t < order.size();) {
    std::size_t u = t;
    std::size_t new_hits = 0;
    while (u < order.size() && scores[order[u]] == scores[order[t]]) {
      new_hits += truth[order[u]] ? 1 : 0;
      ++u;
    }
    seen += u - t;
    hits += new_hits;
    ap += (static_cast<double>(new_hits) / static_cast<double>(total)) *
          (static_cast<double>(hits) / static_cast<double>(seen));
    t = u;
  }
  return ap;
}

std::vector<double> threshold_grid(const std::vector<double>& scores, int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "grid needs at least one threshold");
  require(!scores.empty(), ErrorCode::EmptyInput, "no scores");
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  std::vector<double> grid(static_cast<std::size_t>(n));
  if (n == 1) {
    grid[0] = 0.5 * (*lo + *hi);
    return grid;
  }
  for (int t = 0; t < n; ++t) grid[static_cast<std::size_t>(t)] = *lo + (*hi - *lo) * t / (n - 1);
  return grid;
}

}  // namespace pps
