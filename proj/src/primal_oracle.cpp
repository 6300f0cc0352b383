#include "pps/primal_oracle.hpp"

#include "pps/error.hpp"

namespace pps {

PrimalOracle::PrimalOracle(EffectiveCost cost, double beta, ExpmOptions options, std::uint64_t seed)
    : cost_(std::make_shared<const EffectiveCost>(std::move(cost))),
      cost_op_(cost_->as_operator()),
      beta_(beta),
      options_(options) {
  require(beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
  interval_ = estimate_interval(cost_op_, options_.probes, seed);
  lanczos_matvecs_ = cost_op_.column_matvecs();
}

const ChebPlan& PrimalOracle::full_plan() const {
  if (!full_) full_ = plan_cheb(-beta_, interval_, options_.tol);
  return *full_;
}

const ChebPlan& PrimalOracle::half_plan() const {
  if (!half_) half_ = plan_cheb(-0.5 * beta_, interval_, options_.tol);
  return *half_;
}

MatrixXd PrimalOracle::apply_x(const MatrixXd& v) const { return expm_multiply(cost_op_, full_plan(), v); }

MatrixXd PrimalOracle::apply_half(const MatrixXd& v) const { return expm_multiply(cost_op_, half_plan(), v); }

LinearOperator PrimalOracle::x_operator() const {
  // Plans are built eagerly so the captured copy never mutates state.
  const ChebPlan plan = full_plan();
  const LinearOperator op = cost_op_;
  return LinearOperator(dim(), [op, plan](const MatrixXd& in, MatrixXd& out) { out = expm_multiply(op, plan, in); });
}

LinearOperator PrimalOracle::half_operator() const {
  const ChebPlan plan = half_plan();
  const LinearOperator op = cost_op_;
  return LinearOperator(dim(), [op, plan](const MatrixXd& in, MatrixXd& out) { out = expm_multiply(op, plan, in); });
}

}  // namespace pps
