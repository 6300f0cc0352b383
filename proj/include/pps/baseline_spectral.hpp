#pragma once

#include "pps/core_types.hpp"

#include <cstdint>
#include <vector>

namespace pps {

struct SpectralEmbedding {
  MatrixXd v;          // L x rank, orthonormal columns
  int rank = 0;
  VectorXd ritz;       // descending
  bool converged = false;
  int cycles = 0;
  double max_residual = 0.0;  // max_i ||Q v_i - theta_i v_i||
};

// 2 * mean K, rounded, clamped to [1, L].
int default_spectral_rank(const BlockPartition& partition);

// Restarted block Lanczos with full reorthogonalization. A pair is accepted
// when ||Q v - theta v|| <= tol * theta_max. The result is flagged
// unconverged when `cycles` restarts are exhausted; use require_converged to
// turn that into NoConvergence.
SpectralEmbedding top_eigvecs(const CorrespondenceMatrix& q, int rank, int cycles = 50, double tol = 1e-6,
                              std::uint64_t seed = 0);
void require_converged(const SpectralEmbedding& emb);

// Entries of V V^T on the stored matches of q, aligned with q.matches().
std::vector<double> spectral_scores(const MatrixXd& v, const CorrespondenceMatrix& q);

}  // namespace pps
