#pragma once

#include "pps/core_types.hpp"
#include "pps/expm_action.hpp"
#include "pps/solve_report.hpp"
#include "pps/solver_strong.hpp"

#include <cstdint>
#include <optional>

namespace pps {

struct WeakOptions {
  double beta = 1.0;
  int samples = 20;
  double gamma = 5.0;
  int max_iter = 20;
  double tol = 1e-3;
  std::uint64_t seed = 0;
  EstimateMode mode = EstimateMode::Stochastic;
  ExpmOptions expm;
  std::optional<DualWeak> initial;
};

struct WeakResult {
  DualWeak duals;
  SolveReport report;
};

// Diagonal estimate b of X and block-sum estimate b_block with
// b_block[i] = 1^T X^(i,i) 1 / K_i.
struct WeakEstimate {
  VectorXd diag;
  VectorXd block;
};

WeakEstimate estimate_weak(const CorrespondenceMatrix& q, const DualWeak& duals, double beta, int samples,
                           std::uint64_t seed, int iteration, const ExpmOptions& expm = {});

WeakEstimate exact_weak(const CorrespondenceMatrix& q, const DualWeak& duals, double beta,
                        const ExpmOptions& expm = {});

double weak_residual(const WeakEstimate& est);

// Randomized solver for the weak regularized relaxation.
// Throws NonPositiveEstimate, NonFiniteDual and propagates exponential-action errors.
WeakResult solve_weak(const CorrespondenceMatrix& q, const WeakOptions& options);

}  // namespace pps
