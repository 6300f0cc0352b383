#include "pps/dense_oracle.hpp"

#include "pps/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pps::dense {

namespace {

void guard(Index dim) {
  require(dim <= kDenseSizeLimit, ErrorCode::SizeGuardExceeded,
          "dense oracle limited to L <= " + std::to_string(kDenseSizeLimit) + ", got " + std::to_string(dim));
}

MatrixXd sym_log(const MatrixXd& b) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (b + b.transpose()));
  const VectorXd logs = eig.eigenvalues().array().max(std::numeric_limits<double>::min()).log();
  return eig.eigenvectors() * logs.asDiagonal() * eig.eigenvectors().transpose();
}

MatrixXd strong_cost(const CorrespondenceMatrix& q, const std::vector<MatrixXd>& lambda) {
  return EffectiveCost(q, DualStrong{lambda, 0}).dense();
}

MatrixXd weak_cost(const CorrespondenceMatrix& q, const VectorXd& lambda, const VectorXd& mu) {
  return EffectiveCost(q, DualWeak{lambda, mu, 0}).dense();
}

}  // namespace

MatrixXd sym_expm(const MatrixXd& a, double s) {
  guard(a.rows());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (a + a.transpose()));
  const VectorXd ex = (s * eig.eigenvalues().array()).exp();
  MatrixXd x = eig.eigenvectors() * ex.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (x + x.transpose());
}

DenseSolution dense_primal(const MatrixXd& a, double beta) {
  guard(a.rows());
  DenseSolution sol;
  sol.x = sym_expm(a, -beta);
  sol.objective = -sol.x.trace() / beta;
  return sol;
}

double dual_objective_strong(const BlockPartition& partition, const std::vector<MatrixXd>& lambda,
                             const MatrixXd& cost, double beta) {
  guard(cost.rows());
  require(static_cast<int>(lambda.size()) == partition.images() && cost.rows() == partition.total(),
          ErrorCode::DimensionMismatch, "dual blocks do not match the partition");
  MatrixXd shifted = cost;
  double trace = 0.0;
  for (int i = 0; i < partition.images(); ++i) {
    const auto& blk = lambda[static_cast<std::size_t>(i)];
    require(blk.rows() == partition.size(i) && blk.cols() == partition.size(i), ErrorCode::DimensionMismatch,
            "dual block shape");
    shifted.block(partition.offset(i), partition.offset(i), blk.rows(), blk.cols()) -= blk;
    trace += blk.trace();
  }
  return trace - sym_expm(shifted, -beta).trace() / beta;
}

double dual_objective_weak(const BlockPartition& partition, const VectorXd& lambda, const VectorXd& mu,
                           const MatrixXd& cost, double beta) {
  guard(cost.rows());
  require(lambda.size() == partition.total() && mu.size() == partition.images() && cost.rows() == partition.total(),
          ErrorCode::DimensionMismatch, "weak duals do not match the partition");
  MatrixXd shifted = cost;
  shifted.diagonal() -= lambda;
  for (int i = 0; i < partition.images(); ++i) {
    const Index k = partition.size(i);
    shifted.block(partition.offset(i), partition.offset(i), k, k).array() -= mu[i] / static_cast<double>(k);
  }
  return lambda.sum() + mu.sum() - sym_expm(shifted, -beta).trace() / beta;
}

double mixing_coefficient(int registry_block_size, double beta) {
  const double l = registry_block_size;
  return l / (l + std::expm1(beta * l));
}

MatrixXd closed_form_block(int registry_block_size, double beta) {
  const double tau = mixing_coefficient(registry_block_size, beta);
  const Index l = registry_block_size;
  MatrixXd block = MatrixXd::Constant(l, l, 1.0 - tau);
  block.diagonal().array() += tau;
  return block;
}

double assignment_cost(const MatrixXd& costs, const std::vector<int>& perm) {
  double total = 0.0;
  for (std::size_t k = 0; k < perm.size(); ++k) total += costs(static_cast<Index>(k), perm[k]);
  return total;
}

std::vector<int> brute_force_assignment(const MatrixXd& costs) {
  require(costs.rows() == costs.cols(), ErrorCode::DimensionMismatch, "brute force needs a square cost matrix");
  require(costs.rows() <= kBruteForceLimit, ErrorCode::SizeGuardExceeded,
          "brute force limited to K <= " + std::to_string(kBruteForceLimit));
  std::vector<int> perm(static_cast<std::size_t>(costs.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = assignment_cost(costs, perm);
  // next_permutation enumerates in lexicographic order; strict improvement
  // keeps the first minimizer.
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double c = assignment_cost(costs, perm);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  }
  return best;
}

std::vector<std::vector<Index>> registry_index_sets(const GroundTruth& truth) {
  std::vector<std::vector<Index>> sets(static_cast<std::size_t>(truth.registry_size()));
  const auto assign = truth.assignment();
  for (std::size_t g = 0; g < assign.size(); ++g) sets[static_cast<std::size_t>(assign[g])].push_back(static_cast<Index>(g));
  std::erase_if(sets, [](const auto& s) { return s.empty(); });
  return sets;
}

MatrixXd registry_block(const MatrixXd& x, const std::vector<Index>& members) {
  const Index n = static_cast<Index>(members.size());
  MatrixXd out(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) out(r, c) = x(members[static_cast<std::size_t>(r)], members[static_cast<std::size_t>(c)]);
  return out;
}

std::vector<MatrixXd> diagonal_blocks(const BlockPartition& partition, const MatrixXd& x) {
  std::vector<MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(partition.images()));
  for (int i = 0; i < partition.images(); ++i)
    blocks.push_back(x.block(partition.offset(i), partition.offset(i), partition.size(i), partition.size(i)));
  return blocks;
}

std::vector<MatrixXd> dense_strong_increment(const CorrespondenceMatrix& q, const std::vector<MatrixXd>& lambda,
                                             double beta) {
  const MatrixXd x = sym_expm(strong_cost(q, lambda), -beta);
  std::vector<MatrixXd> inc;
  for (const MatrixXd& b : diagonal_blocks(q.partition(), x)) inc.push_back(-sym_log(b) / beta);
  return inc;
}

DenseStrongRun dense_solve_strong(const CorrespondenceMatrix& q, double beta, int max_iter, double tol, double eta) {
  guard(q.dim());
  DenseStrongRun run;
  run.lambda = DualStrong::zeros(q.partition()).blocks;
  for (int it = 1; it <= max_iter; ++it) {
    const auto inc = dense_strong_increment(q, run.lambda, beta);
    double largest = 0.0;
    for (std::size_t i = 0; i < inc.size(); ++i) {
      run.lambda[i] += eta * inc[i];
      run.lambda[i] = 0.5 * (run.lambda[i] + run.lambda[i].transpose()).eval();
      largest = std::max(largest, inc[i].norm());
    }
    run.iterations = it;
    run.last_increment = largest;
    if (largest <= tol) break;
  }
  run.x = sym_expm(strong_cost(q, run.lambda), -beta);
  return run;
}

void dense_weak_step(const CorrespondenceMatrix& q, double beta, VectorXd& lambda, VectorXd& mu, WeakStep which,
                     double eta) {
  const BlockPartition& part = q.partition();
  const MatrixXd x = sym_expm(weak_cost(q, lambda, mu), -beta);
  VectorXd block_sums(part.images());
  for (int i = 0; i < part.images(); ++i) {
    const Index k = part.size(i);
    block_sums[i] = x.block(part.offset(i), part.offset(i), k, k).sum() / static_cast<double>(k);
  }
  if (which != WeakStep::Mu) lambda -= (eta / beta) * x.diagonal().array().log().matrix();
  if (which != WeakStep::Lambda) mu -= (eta / beta) * block_sums.array().log().matrix();
}

DenseWeakRun dense_solve_weak(const CorrespondenceMatrix& q, double beta, int max_iter, double tol, double eta) {
  guard(q.dim());
  DenseWeakRun run;
  run.lambda = VectorXd::Zero(q.dim());
  run.mu = VectorXd::Zero(q.partition().images());
  for (int it = 1; it <= max_iter; ++it) {
    const VectorXd lambda0 = run.lambda;
    const VectorXd mu0 = run.mu;
    dense_weak_step(q, beta, run.lambda, run.mu, WeakStep::Both, eta);
    run.iterations = it;
    run.last_increment =
        std::max((run.lambda - lambda0).lpNorm<Eigen::Infinity>(), (run.mu - mu0).lpNorm<Eigen::Infinity>());
    if (run.last_increment <= tol) break;
  }
  run.x = sym_expm(weak_cost(q, run.lambda, run.mu), -beta);
  return run;
}

}  // namespace pps::dense
