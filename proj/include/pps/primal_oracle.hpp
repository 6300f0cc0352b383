#pragma once

#include "pps/core_types.hpp"
#include "pps/expm_action.hpp"
#include "pps/linear_operator.hpp"

#include <cstdint>
#include <memory>
#include <optional>

namespace pps {

// Implicit access to X = exp(-beta C_eff) and X^{1/2} = exp(-(beta/2) C_eff)
// through panel products. The spectral interval is estimated once; each
// exponent gets its own Chebyshev plan, built on first use.
class PrimalOracle {
 public:
  PrimalOracle(EffectiveCost cost, double beta, ExpmOptions options = {}, std::uint64_t seed = 0);

  Index dim() const noexcept { return cost_->dim(); }
  double beta() const noexcept { return beta_; }
  const EffectiveCost& cost() const noexcept { return *cost_; }
  const SpectralInterval& interval() const noexcept { return interval_; }

  MatrixXd apply_x(const MatrixXd& v) const;
  MatrixXd apply_half(const MatrixXd& v) const;

  // Operators whose counters track X (resp. X^{1/2}) column products.
  LinearOperator x_operator() const;
  LinearOperator half_operator() const;

  const ChebPlan& full_plan() const;
  const ChebPlan& half_plan() const;

  // Column products by C_eff, including the interval estimate.
  std::uint64_t cost_matvecs() const noexcept { return cost_op_.column_matvecs(); }
  std::uint64_t lanczos_matvecs() const noexcept { return lanczos_matvecs_; }

 private:
  std::shared_ptr<const EffectiveCost> cost_;
  LinearOperator cost_op_;
  double beta_;
  ExpmOptions options_;
  SpectralInterval interval_;
  std::uint64_t lanczos_matvecs_ = 0;
  mutable std::optional<ChebPlan> full_;
  mutable std::optional<ChebPlan> half_;
};

}  // namespace pps
