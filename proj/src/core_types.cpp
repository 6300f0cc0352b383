#include "pps/core_types.hpp"

#include "pps/error.hpp"
#include "pps/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace pps {

namespace {

std::string describe(const Match& m) {
  return "((" + std::to_string(m.a.image + 1) + "," + std::to_string(m.a.index + 1) + "),(" +
         std::to_string(m.b.image + 1) + "," + std::to_string(m.b.index + 1) + "))";
}

Match oriented(Match m) {
  if (m.a.image > m.b.image) std::swap(m.a, m.b);
  return m;
}

void check_dims(Index expected, const MatrixXd& v) {
  require(v.rows() == expected, ErrorCode::DimensionMismatch,
          "panel has " + std::to_string(v.rows()) + " rows, expected " + std::to_string(expected));
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(Eigen::Index dim, Apply apply)
    : dim_(dim), apply_(std::move(apply)), counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

LinearOperator LinearOperator::dense(Eigen::MatrixXd a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "dense operator must be square");
  const Index n = a.rows();
  auto m = std::make_shared<const MatrixXd>(std::move(a));
  return LinearOperator(n, [m](const MatrixXd& in, MatrixXd& out) { out.noalias() = (*m) * in; });
}

void LinearOperator::apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const {
  check_dims(dim_, in);
  apply_(in, out);
  counter_->fetch_add(static_cast<std::uint64_t>(in.cols()));
}

Eigen::MatrixXd LinearOperator::operator()(const Eigen::MatrixXd& in) const {
  MatrixXd out(dim_, in.cols());
  apply(in, out);
  return out;
}

// ---------------------------------------------------------------------------
// BlockPartition

BlockPartition::BlockPartition(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  require(!sizes_.empty(), ErrorCode::InvalidArgument, "partition needs at least one image");
  offsets_.assign(sizes_.size() + 1, 0);
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    require(sizes_[i] >= 1, ErrorCode::InvalidArgument,
            "image " + std::to_string(i + 1) + " has no keypoints");
    offsets_[i + 1] = offsets_[i] + sizes_[i];
  }
}

int BlockPartition::max_size() const noexcept {
  return sizes_.empty() ? 0 : *std::max_element(sizes_.begin(), sizes_.end());
}

double BlockPartition::mean_size() const noexcept {
  return sizes_.empty() ? 0.0 : static_cast<double>(total()) / static_cast<double>(sizes_.size());
}

bool BlockPartition::uniform() const noexcept {
  return std::adjacent_find(sizes_.begin(), sizes_.end(), std::not_equal_to<>()) == sizes_.end();
}

int BlockPartition::image_of(Index global) const {
  require(global >= 0 && global < total(), ErrorCode::IndexOutOfRange, "global keypoint index");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

// ---------------------------------------------------------------------------
// CorrespondenceMatrix

CorrespondenceMatrix CorrespondenceMatrix::build(BlockPartition partition, std::vector<Match> matches) {
  const int n = partition.images();
  for (Match& m : matches) {
    for (const Keypoint& p : {m.a, m.b}) {
      require(p.image >= 0 && p.image < n && p.index >= 0 && p.index < partition.size(p.image),
              ErrorCode::IndexOutOfRange, "match " + describe(m));
    }
    require(m.a.image != m.b.image, ErrorCode::InvalidArgument,
            "match " + describe(m) + " lies inside one image");
    m = oriented(m);
  }
  std::sort(matches.begin(), matches.end(), [](const Match& x, const Match& y) {
    return std::tie(x.a.image, x.b.image, x.a.index, x.b.index) <
           std::tie(y.a.image, y.b.image, y.a.index, y.b.index);
  });

  // Partial-permutation property per block pair: unique rows and columns.
  for (std::size_t begin = 0; begin < matches.size();) {
    std::size_t end = begin;
    while (end < matches.size() && matches[end].a.image == matches[begin].a.image &&
           matches[end].b.image == matches[begin].b.image)
      ++end;
    for (std::size_t t = begin + 1; t < end; ++t) {
      require(matches[t].a.index != matches[t - 1].a.index, ErrorCode::DuplicateEntry,
              "row shared by " + describe(matches[t - 1]) + " and " + describe(matches[t]));
    }
    std::vector<int> cols;
    cols.reserve(end - begin);
    for (std::size_t t = begin; t < end; ++t) cols.push_back(matches[t].b.index);
    std::sort(cols.begin(), cols.end());
    const auto dup = std::adjacent_find(cols.begin(), cols.end());
    require(dup == cols.end(), ErrorCode::DuplicateEntry,
            "column " + std::to_string(dup == cols.end() ? 0 : *dup + 1) + " repeated in block (" +
                std::to_string(matches[begin].a.image + 1) + "," +
                std::to_string(matches[begin].b.image + 1) + ")");
    begin = end;
  }

  CorrespondenceMatrix q;
  q.partition_ = std::move(partition);
  q.matches_ = std::move(matches);

  const Index l = q.partition_.total();
  std::vector<Index> degree(static_cast<std::size_t>(l), 0);
  for (const Match& m : q.matches_) {
    ++degree[static_cast<std::size_t>(q.partition_.global(m.a.image, m.a.index))];
    ++degree[static_cast<std::size_t>(q.partition_.global(m.b.image, m.b.index))];
  }
  q.row_ptr_.assign(static_cast<std::size_t>(l) + 1, 0);
  for (Index r = 0; r < l; ++r)
    q.row_ptr_[static_cast<std::size_t>(r) + 1] = q.row_ptr_[static_cast<std::size_t>(r)] + degree[static_cast<std::size_t>(r)];
  q.col_idx_.assign(static_cast<std::size_t>(q.row_ptr_.back()), 0);
  std::vector<Index> fill(q.row_ptr_.begin(), q.row_ptr_.end() - 1);
  for (const Match& m : q.matches_) {
    const Index ga = q.partition_.global(m.a.image, m.a.index);
    const Index gb = q.partition_.global(m.b.image, m.b.index);
    q.col_idx_[static_cast<std::size_t>(fill[static_cast<std::size_t>(ga)]++)] = gb;
    q.col_idx_[static_cast<std::size_t>(fill[static_cast<std::size_t>(gb)]++)] = ga;
  }
  for (Index r = 0; r < l; ++r)
    std::sort(q.col_idx_.begin() + q.row_ptr_[static_cast<std::size_t>(r)],
              q.col_idx_.begin() + q.row_ptr_[static_cast<std::size_t>(r) + 1]);
  return q;
}

std::optional<std::size_t> CorrespondenceMatrix::find(Match m) const {
  m = oriented(m);
  const auto key = std::tie(m.a.image, m.b.image, m.a.index, m.b.index);
  const auto it = std::lower_bound(matches_.begin(), matches_.end(), m, [](const Match& x, const Match& y) {
    return std::tie(x.a.image, x.b.image, x.a.index, x.b.index) <
           std::tie(y.a.image, y.b.image, y.a.index, y.b.index);
  });
  if (it == matches_.end() || std::tie(it->a.image, it->b.image, it->a.index, it->b.index) != key)
    return std::nullopt;
  return static_cast<std::size_t>(it - matches_.begin());
}

void CorrespondenceMatrix::multiply(const MatrixXd& v, MatrixXd& out) const {
  check_dims(dim(), v);
  const Index l = dim();
  out.resize(l, v.cols());
  parallel_for(0, v.cols(), [&](Index s) {
    const double* x = v.col(s).data();
    double* y = out.col(s).data();
    for (Index r = 0; r < l; ++r) {
      double acc = x[r];
      for (Index p = row_ptr_[static_cast<std::size_t>(r)]; p < row_ptr_[static_cast<std::size_t>(r) + 1]; ++p)
        acc += x[col_idx_[static_cast<std::size_t>(p)]];
      y[r] = acc;
    }
  });
}

MatrixXd CorrespondenceMatrix::dense() const {
  MatrixXd d = MatrixXd::Identity(dim(), dim());
  for (const Match& m : matches_) {
    const Index ga = partition_.global(m.a.image, m.a.index);
    const Index gb = partition_.global(m.b.image, m.b.index);
    d(ga, gb) = 1.0;
    d(gb, ga) = 1.0;
  }
  return d;
}

CorrespondenceMatrix build_correspondence(BlockPartition partition, std::vector<Match> matches) {
  return CorrespondenceMatrix::build(std::move(partition), std::move(matches));
}

MatrixXd q_matvec(const CorrespondenceMatrix& q, const MatrixXd& v) {
  MatrixXd out;
  q.multiply(v, out);
  return out;
}

// ---------------------------------------------------------------------------
// GroundTruth

GroundTruth::GroundTruth(BlockPartition partition, int registry_size, std::vector<int> assignment)
    : partition_(std::move(partition)), registry_size_(registry_size), assignment_(std::move(assignment)) {
  require(registry_size_ >= 1, ErrorCode::InvalidArgument, "registry size must be positive");
  require(static_cast<Index>(assignment_.size()) == partition_.total(), ErrorCode::DimensionMismatch,
          "assignment length differs from the number of keypoints");
  std::vector<int> seen(static_cast<std::size_t>(registry_size_), -1);
  for (int i = 0; i < partition_.images(); ++i) {
    for (int k = 0; k < partition_.size(i); ++k) {
      const int m = at(i, k);
      require(m >= 0 && m < registry_size_, ErrorCode::IndexOutOfRange,
              "registry index " + std::to_string(m + 1) + " for keypoint (" + std::to_string(i + 1) + "," +
                  std::to_string(k + 1) + ")");
      require(seen[static_cast<std::size_t>(m)] != i, ErrorCode::InvalidArgument,
              "registry point " + std::to_string(m + 1) + " assigned twice in image " + std::to_string(i + 1));
      seen[static_cast<std::size_t>(m)] = i;
    }
  }
}

int GroundTruth::observed_registry_size() const {
  std::vector<char> hit(static_cast<std::size_t>(registry_size_), 0);
  for (int m : assignment_) hit[static_cast<std::size_t>(m)] = 1;
  return static_cast<int>(std::count(hit.begin(), hit.end(), 1));
}

CorrespondenceMatrix ground_truth_product(const GroundTruth& truth) {
  const BlockPartition& part = truth.partition();
  std::vector<std::vector<Keypoint>> members(static_cast<std::size_t>(truth.registry_size()));
  for (int i = 0; i < part.images(); ++i)
    for (int k = 0; k < part.size(i); ++k) members[static_cast<std::size_t>(truth.at(i, k))].push_back({i, k});
  std::vector<Match> matches;
  for (const auto& group : members)
    for (std::size_t x = 0; x < group.size(); ++x)
      for (std::size_t y = x + 1; y < group.size(); ++y) matches.push_back({group[x], group[y]});
  return CorrespondenceMatrix::build(part, std::move(matches));
}

// ---------------------------------------------------------------------------
// Duals and effective cost

DualStrong DualStrong::zeros(const BlockPartition& partition) {
  DualStrong d;
  d.blocks.reserve(static_cast<std::size_t>(partition.images()));
  for (int k : partition.sizes()) d.blocks.push_back(MatrixXd::Zero(k, k));
  return d;
}

DualWeak DualWeak::zeros(const BlockPartition& partition) {
  return DualWeak{VectorXd::Zero(partition.total()), VectorXd::Zero(partition.images()), 0};
}

EffectiveCost::EffectiveCost(const CorrespondenceMatrix& q, DualStrong duals) : q_(&q), duals_(std::move(duals)) {
  const auto& d = std::get<DualStrong>(duals_);
  const BlockPartition& part = q.partition();
  require(static_cast<int>(d.blocks.size()) == part.images(), ErrorCode::DimensionMismatch,
          "one dual block per image expected");
  for (int i = 0; i < part.images(); ++i) {
    const auto& b = d.blocks[static_cast<std::size_t>(i)];
    require(b.rows() == part.size(i) && b.cols() == part.size(i), ErrorCode::DimensionMismatch,
            "dual block " + std::to_string(i + 1) + " has wrong shape");
  }
}

EffectiveCost::EffectiveCost(const CorrespondenceMatrix& q, DualWeak duals) : q_(&q), duals_(std::move(duals)) {
  const auto& d = std::get<DualWeak>(duals_);
  require(d.lambda.size() == q.dim() && d.mu.size() == q.partition().images(), ErrorCode::DimensionMismatch,
          "weak duals have wrong length");
}

void EffectiveCost::apply(const MatrixXd& v, MatrixXd& out) const {
  q_->multiply(v, out);
  const BlockPartition& part = q_->partition();
  if (const auto* strong = std::get_if<DualStrong>(&duals_)) {
    out = -out;
    // Row blocks are independent, so splitting over images keeps every
    // block product identical for any thread count.
    parallel_for(0, part.images(), [&](Index i) {
      const int ii = static_cast<int>(i);
      const Index off = part.offset(ii);
      const Index k = part.size(ii);
      out.middleRows(off, k).noalias() -= strong->blocks[static_cast<std::size_t>(i)] * v.middleRows(off, k);
    });
    return;
  }
  const auto& weak = std::get<DualWeak>(duals_);
  parallel_for(0, v.cols(), [&](Index s) {
    auto y = out.col(s);
    auto x = v.col(s);
    for (int i = 0; i < part.images(); ++i) {
      const Index off = part.offset(i);
      const Index k = part.size(i);
      const double shift = weak.mu[i] / static_cast<double>(k) * x.segment(off, k).sum();
      for (Index r = off; r < off + k; ++r) y[r] = -y[r] - weak.lambda[r] * x[r] - shift;
    }
  });
}

MatrixXd EffectiveCost::apply(const MatrixXd& v) const {
  MatrixXd out;
  apply(v, out);
  return out;
}

MatrixXd EffectiveCost::dense() const {
  MatrixXd c = -q_->dense();
  const BlockPartition& part = q_->partition();
  if (const auto* strong = std::get_if<DualStrong>(&duals_)) {
    for (int i = 0; i < part.images(); ++i)
      c.block(part.offset(i), part.offset(i), part.size(i), part.size(i)) -= strong->blocks[static_cast<std::size_t>(i)];
    return c;
  }
  const auto& weak = std::get<DualWeak>(duals_);
  c.diagonal() -= weak.lambda;
  for (int i = 0; i < part.images(); ++i) {
    const Index k = part.size(i);
    c.block(part.offset(i), part.offset(i), k, k).array() -= weak.mu[i] / static_cast<double>(k);
  }
  return c;
}

LinearOperator EffectiveCost::as_operator() const {
  auto self = std::make_shared<const EffectiveCost>(*this);
  return LinearOperator(dim(), [self](const MatrixXd& in, MatrixXd& out) { self->apply(in, out); });
}

MatrixXd effective_matvec(const EffectiveCost& cost, const MatrixXd& v) { return cost.apply(v); }

}  // namespace pps
