#include "pps/recovery.hpp"

#include "pps/error.hpp"
#include "pps/parallel.hpp"
#include "pps/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace pps {

// --- RegistrationMap -------------------------------------------------------

void RegistrationMap::validate() const {
  require(static_cast<Index>(assignment.size()) == partition.total(), ErrorCode::InvalidArgument,
          "registration does not cover every keypoint");
  std::vector<char> hit(static_cast<std::size_t>(std::max(registry_size, 0)), 0);
  std::vector<int> last_image(hit.size(), -1);
  for (int i = 0; i < partition.images(); ++i) {
    for (int k = 0; k < partition.size(i); ++k) {
      const int m = at(i, k);
      require(m >= 0 && m < registry_size, ErrorCode::InvalidArgument,
              "registry index out of range at image " + std::to_string(i + 1));
      require(last_image[static_cast<std::size_t>(m)] != i, ErrorCode::InvalidArgument,
              "registry point " + std::to_string(m + 1) + " used twice in image " + std::to_string(i + 1));
      last_image[static_cast<std::size_t>(m)] = i;
      hit[static_cast<std::size_t>(m)] = 1;
    }
  }
  for (std::size_t m = 0; m < hit.size(); ++m)
    require(hit[m] != 0, ErrorCode::InvalidArgument, "registry point " + std::to_string(m + 1) + " is never used");
}

GroundTruth RegistrationMap::as_ground_truth() const { return GroundTruth(partition, registry_size, assignment); }

RegistrationMap registration_from_truth(const GroundTruth& truth) {
  // Compact the registry to observed points so the map is surjective.
  std::vector<int> relabel(static_cast<std::size_t>(truth.registry_size()), -1);
  RegistrationMap r;
  r.partition = truth.partition();
  r.assignment.reserve(truth.assignment().size());
  for (int m : truth.assignment()) {
    int& target = relabel[static_cast<std::size_t>(m)];
    if (target < 0) target = r.registry_size++;
    r.assignment.push_back(target);
  }
  return r;
}

bool same_up_to_relabeling(const RegistrationMap& a, const RegistrationMap& b) {
  if (!(a.partition == b.partition) || a.registry_size != b.registry_size || a.assignment.size() != b.assignment.size())
    return false;
  std::vector<int> fwd(static_cast<std::size_t>(a.registry_size), -1);
  std::vector<int> bwd(static_cast<std::size_t>(b.registry_size), -1);
  for (std::size_t g = 0; g < a.assignment.size(); ++g) {
    const int x = a.assignment[g];
    const int y = b.assignment[g];
    if (x < 0 || y < 0 || x >= a.registry_size || y >= b.registry_size) return false;
    if (fwd[static_cast<std::size_t>(x)] < 0 && bwd[static_cast<std::size_t>(y)] < 0) {
      fwd[static_cast<std::size_t>(x)] = y;
      bwd[static_cast<std::size_t>(y)] = x;
    } else if (fwd[static_cast<std::size_t>(x)] != y || bwd[static_cast<std::size_t>(y)] != x) {
      return false;
    }
  }
  return true;
}

// --- Hungarian -------------------------------------------------------------

Assignment hungarian(const MatrixXd& costs) {
  require(costs.allFinite(), ErrorCode::NonFiniteValue, "assignment costs must be finite");
  Assignment out;
  const Index rows = costs.rows();
  const Index cols = costs.cols();
  out.row_to_col.assign(static_cast<std::size_t>(rows), -1);
  if (rows == 0 || cols == 0) return out;

  const bool transposed = rows > cols;
  const MatrixXd a = transposed ? MatrixXd(costs.transpose()) : costs;
  const Index n = a.rows();
  const Index m = a.cols();
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based potentials; p[j] is the row matched to column j (0 = none).
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<Index> p(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = a(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  for (Index j = 1; j <= m; ++j) {
    const Index i = p[static_cast<std::size_t>(j)];
    if (i == 0) continue;
    if (transposed)
      out.row_to_col[static_cast<std::size_t>(j - 1)] = static_cast<int>(i - 1);
    else
      out.row_to_col[static_cast<std::size_t>(i - 1)] = static_cast<int>(j - 1);
  }
  for (Index r = 0; r < rows; ++r) {
    const int c = out.row_to_col[static_cast<std::size_t>(r)];
    if (c >= 0) out.cost += costs(r, c);
  }
  return out;
}

// --- Full recovery ---------------------------------------------------------

std::vector<std::vector<int>> recover_full_slow(const LinearOperator& x, const BlockPartition& partition) {
  require(partition.uniform(), ErrorCode::InvalidArgument, "full recovery needs equal block sizes");
  require(x.dim() == partition.total(), ErrorCode::DimensionMismatch, "oracle dimension differs from L");
  const Index k = partition.size(0);
  MatrixXd e = MatrixXd::Zero(partition.total(), k);
  e.topRows(k).setIdentity();
  MatrixXd y;
  x.apply(e, y);

  std::vector<std::vector<int>> perms(static_cast<std::size_t>(partition.images()));
  perms[0].resize(static_cast<std::size_t>(k));
  for (Index l = 0; l < k; ++l) perms[0][static_cast<std::size_t>(l)] = static_cast<int>(l);
  for (int i = 1; i < partition.images(); ++i) {
    const MatrixXd block = y.middleRows(partition.offset(i), k);
    perms[static_cast<std::size_t>(i)] = hungarian(-block).row_to_col;
  }
  return perms;
}

// --- Binary encodings ------------------------------------------------------

PivotSelection default_selection(int images) { return images <= 500 ? PivotSelection::MaxOverlap : PivotSelection::Random; }

int encoding_bits(int k_tilde) {
  int d = 0;
  while ((std::int64_t{1} << d) < k_tilde) ++d;
  return std::max(d, 1);
}

BinaryEncoding binary_encoding_from_letters(int keypoints, int k_tilde, std::vector<int> letters) {
  require(keypoints >= 1 && k_tilde >= keypoints, ErrorCode::InvalidArgument, "encoding needs 1 <= K <= K_tilde");
  require(static_cast<int>(letters.size()) >= keypoints, ErrorCode::InvalidArgument, "too few letters for K");
  letters.resize(static_cast<std::size_t>(keypoints));
  BinaryEncoding enc;
  enc.keypoints = keypoints;
  enc.k_tilde = k_tilde;
  enc.bits = encoding_bits(k_tilde);
  enc.codes.resize(keypoints, enc.bits);
  std::vector<char> seen(static_cast<std::size_t>(k_tilde), 0);
  for (int l = 0; l < keypoints; ++l) {
    const int letter = letters[static_cast<std::size_t>(l)];
    require(letter >= 0 && letter < k_tilde && !seen[static_cast<std::size_t>(letter)], ErrorCode::InvalidArgument,
            "letters must be distinct values in [0, K_tilde)");
    seen[static_cast<std::size_t>(letter)] = 1;
    for (int bit = 0; bit < enc.bits; ++bit) {
      const int digit = (letter >> (enc.bits - 1 - bit)) & 1;
      enc.codes(l, bit) = digit ? 1.0 : -1.0;
    }
  }
  enc.tau = std::move(letters);
  return enc;
}

BinaryEncoding make_binary_encoding(int keypoints, int k_tilde, std::uint64_t seed) {
  require(keypoints >= 1 && k_tilde >= keypoints, ErrorCode::InvalidArgument, "encoding needs 1 <= K <= K_tilde");
  Rng rng = Rng::stream(seed, {stream_tag::kEncoding});
  return binary_encoding_from_letters(keypoints, k_tilde, rng.permutation(k_tilde));
}

std::vector<BinaryEncoding> make_encodings(const BlockPartition& partition, int k_tilde_factor, std::uint64_t seed) {
  require(k_tilde_factor >= 1, ErrorCode::InvalidArgument, "K_tilde factor must be >= 1");
  const int k_tilde = k_tilde_factor * partition.max_size();
  std::vector<BinaryEncoding> out;
  out.reserve(static_cast<std::size_t>(partition.images()));
  for (int j = 0; j < partition.images(); ++j)
    out.push_back(make_binary_encoding(partition.size(j), k_tilde,
                                       stream_key(seed, {stream_tag::kEncoding, static_cast<std::uint64_t>(j)})));
  return out;
}

// --- Partial recovery ------------------------------------------------------

namespace {

// codes == nullptr selects the identity codes e_l of the slow variant.
RegistrationMap partial_recovery(const LinearOperator& x, const CorrespondenceMatrix& q,
                                 const std::vector<BinaryEncoding>* codes, const RecoveryOptions& options,
                                 RecoveryTrace* trace) {
  const BlockPartition& part = q.partition();
  const int n = part.images();
  require(x.dim() == q.dim(), ErrorCode::DimensionMismatch, "oracle dimension differs from L");

  std::vector<char> unregistered(static_cast<std::size_t>(q.dim()), 1);
  std::vector<int> remaining(part.sizes().begin(), part.sizes().end());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  RegistrationMap r;
  r.partition = part;
  r.assignment.assign(static_cast<std::size_t>(q.dim()), -1);
  Rng rng = Rng::stream(options.seed, {stream_tag::kPivot});
  int pivots = 0;

  auto open = [&](Index g) { return unregistered[static_cast<std::size_t>(g)] != 0; };

  while (std::any_of(remaining.begin(), remaining.end(), [](int s) { return s > 0; })) {
    ++pivots;
    require(pivots <= n, ErrorCode::NonTermination, "recovery needed more than N pivots");

    // Only unchosen images with unregistered keypoints can register anything.
    std::vector<int> candidates;
    for (int j = 0; j < n; ++j)
      if (!chosen[static_cast<std::size_t>(j)] && remaining[static_cast<std::size_t>(j)] > 0) candidates.push_back(j);
    require(!candidates.empty(), ErrorCode::NonTermination, "no pivot image left");

    int j = candidates.front();
    if (options.selection == PivotSelection::Random) {
      j = candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
    } else {
      std::vector<std::int64_t> overlap(static_cast<std::size_t>(n), 0);
      for (int c : candidates) overlap[static_cast<std::size_t>(c)] = remaining[static_cast<std::size_t>(c)];
      for (const Match& m : q.matches()) {
        if (open(part.global(m.a.image, m.a.index)) && open(part.global(m.b.image, m.b.index))) {
          ++overlap[static_cast<std::size_t>(m.a.image)];
          ++overlap[static_cast<std::size_t>(m.b.image)];
        }
      }
      for (int c : candidates)
        if (overlap[static_cast<std::size_t>(c)] > overlap[static_cast<std::size_t>(j)]) j = c;
    }
    chosen[static_cast<std::size_t>(j)] = 1;

    const int kj = part.size(j);
    const Index off_j = part.offset(j);
    MatrixXd e;
    if (codes) {
      const MatrixXd& b = (*codes)[static_cast<std::size_t>(j)].codes;
      e = MatrixXd::Zero(q.dim(), b.cols());
      e.middleRows(off_j, kj) = b;
    } else {
      e = MatrixXd::Zero(q.dim(), kj);
      e.middleRows(off_j, kj).setIdentity();
    }
    MatrixXd y;
    x.apply(e, y);
    if (trace) {
      trace->pivots.push_back(j);
      trace->x_columns += static_cast<std::uint64_t>(e.cols());
    }

    std::vector<int> targets;
    for (int l = 0; l < kj; ++l) {
      if (!open(off_j + l)) continue;
      targets.push_back(l);
      r.assignment[static_cast<std::size_t>(off_j + l)] = r.registry_size++;
    }
    VectorXd code_norm2;
    if (codes) code_norm2 = (*codes)[static_cast<std::size_t>(j)].codes.rowwise().squaredNorm();

    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      std::vector<char> free(targets.size(), 1);
      const Index off_i = part.offset(i);
      for (int k = 0; k < part.size(i); ++k) {
        const Index g = off_i + k;
        if (!open(g)) continue;
        const auto row = y.row(g);
        const double d0 = row.squaredNorm();
        double best_d = d0;
        int best = -1;
        for (std::size_t t = 0; t < targets.size(); ++t) {
          if (!free[t]) continue;
          const int l = targets[t];
          double d;
          if (codes)
            d = d0 - 2.0 * row.dot((*codes)[static_cast<std::size_t>(j)].codes.row(l)) + code_norm2[l];
          else
            d = d0 - 2.0 * row[l] + 1.0;
          if (d < best_d) {
            best_d = d;
            best = static_cast<int>(t);
          }
        }
        if (best < 0) continue;
        free[static_cast<std::size_t>(best)] = 0;
        unregistered[static_cast<std::size_t>(g)] = 0;
        --remaining[static_cast<std::size_t>(i)];
        r.assignment[static_cast<std::size_t>(g)] =
            r.assignment[static_cast<std::size_t>(off_j + targets[static_cast<std::size_t>(best)])];
      }
    }
    for (int l = 0; l < kj; ++l) unregistered[static_cast<std::size_t>(off_j + l)] = 0;
    remaining[static_cast<std::size_t>(j)] = 0;
  }
  return r;
}

}  // namespace

RegistrationMap recover_partial_slow(const LinearOperator& x, const CorrespondenceMatrix& q,
                                     const RecoveryOptions& options, RecoveryTrace* trace) {
  return partial_recovery(x, q, nullptr, options, trace);
}

RegistrationMap recover_partial_fast(const LinearOperator& x, const CorrespondenceMatrix& q,
                                     const std::vector<BinaryEncoding>& encodings, const RecoveryOptions& options,
                                     RecoveryTrace* trace) {
  const BlockPartition& part = q.partition();
  require(static_cast<int>(encodings.size()) == part.images(), ErrorCode::DimensionMismatch,
          "need one encoding per image");
  for (int j = 0; j < part.images(); ++j)
    require(encodings[static_cast<std::size_t>(j)].codes.rows() == part.size(j), ErrorCode::DimensionMismatch,
            "encoding size differs from K for image " + std::to_string(j + 1));
  return partial_recovery(x, q, &encodings, options, trace);
}

// --- Thresholds ------------------------------------------------------------

namespace {

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

void check_components(const GmmFit& fit) {
  for (int c = 0; c < 2; ++c) {
    require(fit.weight[c] >= kGmmMinWeight && fit.variance[c] >= kGmmMinVariance && std::isfinite(fit.mean[c]),
            ErrorCode::DegenerateGMM, "mixture component collapsed");
  }
}

double intersection(const GmmFit& fit) {
  const double m1 = fit.mean[0], m2 = fit.mean[1];
  const double v1 = fit.variance[0], v2 = fit.variance[1];
  const double s1 = std::sqrt(v1), s2 = std::sqrt(v2);
  const double midpoint = (s2 * m1 + s1 * m2) / (s1 + s2);
  if (std::abs(v1 - v2) <= 1e-12 * std::max(v1, v2)) return midpoint;

  const double a = 0.5 / v2 - 0.5 / v1;
  const double b = m1 / v1 - m2 / v2;
  const double c = 0.5 * m2 * m2 / v2 - 0.5 * m1 * m1 / v1 + std::log(fit.weight[0] / fit.weight[1]) -
                   0.5 * std::log(v1 / v2);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return midpoint;
  const double sq = std::sqrt(disc);
  const double qv = -0.5 * (b + std::copysign(sq, b));
  const double roots[2] = {qv / a, qv != 0.0 ? c / qv : qv / a};
  double best = midpoint;
  bool found = false;
  for (double x : roots) {
    if (!(x > m1 && x < m2)) continue;
    if (!found || std::abs(x - 0.5 * (m1 + m2)) < std::abs(best - 0.5 * (m1 + m2))) best = x;
    found = true;
  }
  return best;
}

}  // namespace

GmmFit gmm_fit(const std::vector<double>& values, int max_iter) {
  require(values.size() >= 4, ErrorCode::EmptyInput, "GMM needs at least 4 values");
  for (double v : values) require(std::isfinite(v), ErrorCode::NonFiniteValue, "GMM input must be finite");
  const std::size_t n = values.size();
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = n / 2;

  GmmFit fit;
  auto moments = [&](std::size_t lo, std::size_t hi, int c) {
    double s = 0.0;
    for (std::size_t t = lo; t < hi; ++t) s += sorted[t];
    const double mean = s / static_cast<double>(hi - lo);
    double ss = 0.0;
    for (std::size_t t = lo; t < hi; ++t) ss += (sorted[t] - mean) * (sorted[t] - mean);
    fit.mean[c] = mean;
    fit.variance[c] = ss / static_cast<double>(hi - lo);
    fit.weight[c] = static_cast<double>(hi - lo) / static_cast<double>(n);
  };
  moments(0, half, 0);
  moments(half, n, 1);
  check_components(fit);

  std::vector<double> resp(n);
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    double ll = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double l0 = std::log(fit.weight[0]) + log_normal_pdf(values[t], fit.mean[0], fit.variance[0]);
      const double l1 = std::log(fit.weight[1]) + log_normal_pdf(values[t], fit.mean[1], fit.variance[1]);
      const double top = std::max(l0, l1);
      const double lse = top + std::log(std::exp(l0 - top) + std::exp(l1 - top));
      resp[t] = std::exp(l1 - lse);
      ll += lse;
    }
    double r1 = 0.0, s1 = 0.0, s0 = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      r1 += resp[t];
      s1 += resp[t] * values[t];
      s0 += (1.0 - resp[t]) * values[t];
    }
    const double r0 = static_cast<double>(n) - r1;
    require(r0 > 0.0 && r1 > 0.0, ErrorCode::DegenerateGMM, "mixture component lost all mass");
    fit.mean[0] = s0 / r0;
    fit.mean[1] = s1 / r1;
    double q0 = 0.0, q1 = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double d0 = values[t] - fit.mean[0];
      const double d1 = values[t] - fit.mean[1];
      q0 += (1.0 - resp[t]) * d0 * d0;
      q1 += resp[t] * d1 * d1;
    }
    fit.variance[0] = q0 / r0;
    fit.variance[1] = q1 / r1;
    fit.weight[0] = r0 / static_cast<double>(n);
    fit.weight[1] = r1 / static_cast<double>(n);
    fit.iterations = it;
    check_components(fit);
    if (std::isfinite(prev_ll) && std::abs(ll - prev_ll) <= 1e-8 * std::abs(ll)) break;
    prev_ll = ll;
  }
  if (fit.mean[0] > fit.mean[1]) {
    std::swap(fit.mean[0], fit.mean[1]);
    std::swap(fit.variance[0], fit.variance[1]);
    std::swap(fit.weight[0], fit.weight[1]);
  }
  fit.cutoff = intersection(fit);
  return fit;
}

double gmm_threshold(const std::vector<double>& values, int max_iter) { return gmm_fit(values, max_iter).cutoff; }

double percentile_threshold(const std::vector<double>& values, double p) {
  require(!values.empty(), ErrorCode::EmptyInput, "percentile of an empty set");
  require(p > 0.0 && p < 100.0, ErrorCode::InvalidArgument, "percentile must lie in (0, 100)");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  // Guard against p * n / 100 landing a hair above an integer.
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0 - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::size_t MaskedScores::retained_count() const {
  return static_cast<std::size_t>(std::count(retained.begin(), retained.end(), char{1}));
}

double select_cutoff(const std::vector<double>& scores, const ThresholdOptions& options, bool* fell_back,
                     ThresholdMode* mode_used) {
  require(options.percentile > 0.0 && options.percentile < 100.0, ErrorCode::InvalidArgument,
          "retained percentage must lie in (0, 100)");
  if (fell_back) *fell_back = false;
  if (options.mode == ThresholdMode::Gmm) {
    try {
      const double cut = gmm_threshold(scores);
      if (mode_used) *mode_used = ThresholdMode::Gmm;
      return cut;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateGMM && e.code() != ErrorCode::EmptyInput) throw;
      if (fell_back) *fell_back = true;
    }
  }
  if (mode_used) *mode_used = ThresholdMode::Percentile;
  return percentile_threshold(scores, 100.0 - options.percentile);
}

MaskedScores threshold_scores(std::vector<double> scores, const ThresholdOptions& options) {
  MaskedScores out;
  out.scores = std::move(scores);
  if (out.scores.empty()) {
    out.mode_used = options.mode;
    return out;
  }
  out.cutoff = select_cutoff(out.scores, options, &out.gmm_fallback, &out.mode_used);
  out.retained.resize(out.scores.size());
  for (std::size_t t = 0; t < out.scores.size(); ++t) out.retained[t] = out.scores[t] > out.cutoff ? 1 : 0;
  return out;
}

MaskedScores masked_recover(const LinearOperator& x_half, const CorrespondenceMatrix& q, int samples,
                            std::uint64_t seed, const ThresholdOptions& options) {
  require(samples >= 1, ErrorCode::InvalidArgument, "samples must be >= 1");
  require(x_half.dim() == q.dim(), ErrorCode::DimensionMismatch, "oracle dimension differs from L");
  const MatrixXd z = gaussian_panel(q.dim(), samples, seed, {stream_tag::kMasked});
  MatrixXd w;
  x_half.apply(z, w);
  const BlockPartition& part = q.partition();
  const auto matches = q.matches();
  std::vector<double> scores(matches.size());
  parallel_for(
      0, static_cast<Index>(matches.size()),
      [&](Index t) {
        const Match& m = matches[static_cast<std::size_t>(t)];
        scores[static_cast<std::size_t>(t)] =
            w.row(part.global(m.a.image, m.a.index)).dot(w.row(part.global(m.b.image, m.b.index))) / samples;
      },
      256);
  return threshold_scores(std::move(scores), options);
}

std::vector<char> induced_matches(const RegistrationMap& r, const CorrespondenceMatrix& q) {
  require(r.partition == q.partition(), ErrorCode::DimensionMismatch, "registration and Q partitions differ");
  std::vector<char> out;
  out.reserve(q.num_matches());
  for (const Match& m : q.matches()) out.push_back(r.at(m.a.image, m.a.index) == r.at(m.b.image, m.b.index) ? 1 : 0);
  return out;
}

}  // namespace pps
