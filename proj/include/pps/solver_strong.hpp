#pragma once

#include "pps/core_types.hpp"
#include "pps/expm_action.hpp"
#include "pps/solve_report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pps {

inline constexpr double kLogFloor = 1e-12;

// Stochastic: Gaussian panel with `samples` columns.
// Exact: the panel is the L x L identity, so B_i equals X^(i,i) up to the
// exponential-action tolerance. Only sensible for small L.
enum class EstimateMode { Stochastic, Exact };

struct StrongOptions {
  double beta = 1.0;
  int samples = 0;  // 0 selects 20 * max_i K_i
  double gamma = 5.0;
  int max_iter = 10;
  double tol = 1e-3;
  std::uint64_t seed = 0;
  EstimateMode mode = EstimateMode::Stochastic;
  ExpmOptions expm;
  std::optional<DualStrong> initial;
};

struct StrongResult {
  DualStrong duals;
  SolveReport report;
};

// U log(max(D, floor)) U^T for symmetric B = U D U^T.
MatrixXd block_log_psd(const MatrixXd& b, double floor = kLogFloor);

int default_strong_samples(const BlockPartition& partition);

// B_i = W_i W_i^T / S with W = exp(-(beta/2) C_eff) Z for the panel drawn
// from (seed, iteration).
std::vector<MatrixXd> estimate_blocks_strong(const CorrespondenceMatrix& q, const DualStrong& duals, double beta,
                                             int samples, std::uint64_t seed, int iteration,
                                             const ExpmOptions& expm = {});

// X^(i,i) through the identity panel.
std::vector<MatrixXd> exact_blocks_strong(const CorrespondenceMatrix& q, const DualStrong& duals, double beta,
                                          const ExpmOptions& expm = {});

double strong_residual(const std::vector<MatrixXd>& blocks);

// Randomized fixed-point solver for the strong regularized relaxation.
// Throws NonFiniteDual and propagates exponential-action errors.
StrongResult solve_strong(const CorrespondenceMatrix& q, const StrongOptions& options);

}  // namespace pps
