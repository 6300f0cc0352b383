#pragma once

#include <Eigen/Core>

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>

namespace pps {

// Symmetric operator accessed only through panel products. Copies share one
// column-matvec counter, so the cost of an algorithm can be read off after it
// runs.
class LinearOperator {
 public:
  using Apply = std::function<void(const Eigen::MatrixXd& in, Eigen::MatrixXd& out)>;

  LinearOperator(Eigen::Index dim, Apply apply);

  static LinearOperator dense(Eigen::MatrixXd a);

  Eigen::Index dim() const noexcept { return dim_; }

  // out = A * in. Throws DimensionMismatch when in.rows() != dim().
  void apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const;
  Eigen::MatrixXd operator()(const Eigen::MatrixXd& in) const;

  std::uint64_t column_matvecs() const noexcept { return counter_->load(); }
  void reset_counter() const noexcept { counter_->store(0); }

 private:
  Eigen::Index dim_;
  Apply apply_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

}  // namespace pps
