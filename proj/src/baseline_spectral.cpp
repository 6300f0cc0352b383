#include "pps/baseline_spectral.hpp"

#include "pps/error.hpp"
#include "pps/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace pps {

namespace {

// Orthonormalizes column c of `basis` against columns [0, c), twice.
// Returns false when the column is numerically dependent.
bool orthonormalize_column(MatrixXd& basis, Index c) {
  const double before = basis.col(c).norm();
  if (before == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass) {
    if (c == 0) break;
    const VectorXd proj = basis.leftCols(c).transpose() * basis.col(c);
    basis.col(c) -= basis.leftCols(c) * proj;
  }
  const double after = basis.col(c).norm();
  if (after <= 1e-10 * before) return false;
  basis.col(c) /= after;
  return true;
}

}  // namespace

int default_spectral_rank(const BlockPartition& partition) {
  const int r = static_cast<int>(std::lround(2.0 * partition.mean_size()));
  return std::clamp<int>(r, 1, static_cast<int>(partition.total()));
}

SpectralEmbedding top_eigvecs(const CorrespondenceMatrix& q, int rank, int cycles, double tol, std::uint64_t seed) {
  const Index dim = q.dim();
  require(rank >= 1 && rank <= dim, ErrorCode::InvalidArgument, "rank must lie in [1, L]");
  require(cycles >= 1, ErrorCode::InvalidArgument, "cycles must be >= 1");
  const Index b = rank;
  const Index cap = std::min<Index>(dim, std::max<Index>(3 * b, b + 20));

  Rng refill = Rng::stream(seed, {stream_tag::kSpectral, 1});
  auto fill_random = [&](MatrixXd& basis, Index c) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      for (Index r = 0; r < dim; ++r) basis(r, c) = refill.normal();
      if (orthonormalize_column(basis, c)) return true;
    }
    return false;
  };

  MatrixXd start = gaussian_panel(dim, b, seed, {stream_tag::kSpectral});
  SpectralEmbedding out;
  out.rank = rank;
  for (int cycle = 1; cycle <= cycles; ++cycle) {
    out.cycles = cycle;
    MatrixXd basis(dim, cap);
    Index built = 0;
    for (Index c = 0; c < b; ++c) {
      basis.col(built) = start.col(c);
      if (orthonormalize_column(basis, built) || fill_random(basis, built)) ++built;
    }
    // Krylov blocks Q^s V0 until the basis cap is reached.
    Index block_begin = 0;
    while (built < cap) {
      const Index block_end = built;
      MatrixXd next;
      q.multiply(basis.middleCols(block_begin, block_end - block_begin), next);
      for (Index c = 0; c < next.cols() && built < cap; ++c) {
        basis.col(built) = next.col(c);
        if (orthonormalize_column(basis, built)) ++built;
      }
      if (built == block_end) {
        // Invariant subspace: continue from fresh random directions.
        while (built < cap && built < block_end + b && fill_random(basis, built)) ++built;
        if (built == block_end) break;
      }
      block_begin = block_end;
    }
    basis.conservativeResize(Eigen::NoChange, built);

    MatrixXd qv;
    q.multiply(basis, qv);
    MatrixXd h = basis.transpose() * qv;
    h = (0.5 * (h + h.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
    // Eigenvalues ascend; take the last `rank` in descending order.
    const Index take = std::min<Index>(b, built);
    MatrixXd u(built, take);
    out.ritz.resize(take);
    for (Index t = 0; t < take; ++t) {
      u.col(t) = eig.eigenvectors().col(built - 1 - t);
      out.ritz[t] = eig.eigenvalues()[built - 1 - t];
    }
    out.v = basis * u;
    const MatrixXd resid = qv * u - out.v * out.ritz.asDiagonal();
    out.max_residual = resid.colwise().norm().maxCoeff();
    const double scale = std::max(std::abs(out.ritz.maxCoeff()), 1.0);
    if (out.max_residual <= tol * scale) {
      out.converged = true;
      break;
    }
    start = out.v;
  }
  return out;
}

void require_converged(const SpectralEmbedding& emb) {
  require(emb.converged, ErrorCode::NoConvergence,
          "top eigenvectors not converged after " + std::to_string(emb.cycles) + " cycles (residual " +
              std::to_string(emb.max_residual) + ")");
}

std::vector<double> spectral_scores(const MatrixXd& v, const CorrespondenceMatrix& q) {
  require(v.rows() == q.dim(), ErrorCode::DimensionMismatch, "embedding rows differ from L");
  const BlockPartition& part = q.partition();
  std::vector<double> out;
  out.reserve(q.num_matches());
  for (const Match& m : q.matches())
    out.push_back(v.row(part.global(m.a.image, m.a.index)).dot(v.row(part.global(m.b.image, m.b.index))));
  return out;
}

}  // namespace pps
