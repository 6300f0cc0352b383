#pragma once

// Exact small-instance computations. Everything here materializes L x L
// matrices and is guarded by kDenseSizeLimit; it exists to check the
// matvec-only code paths, never to replace them.

#include "pps/core_types.hpp"

#include <Eigen/Core>

#include <vector>

namespace pps::dense {

inline constexpr Index kDenseSizeLimit = 2000;
inline constexpr int kBruteForceLimit = 8;

struct DenseSolution {
  MatrixXd x;
  // -Tr[X] / beta, the exponential term shared by both dual objectives.
  double objective = 0.0;
};

// X = exp(-beta A) for symmetric A.
DenseSolution dense_primal(const MatrixXd& a, double beta);

// exp(s A) for symmetric A by eigendecomposition.
MatrixXd sym_expm(const MatrixXd& a, double s);

// sum_i Tr[Lambda_i] - Tr[exp(-beta (C - (+)Lambda_i))] / beta.
double dual_objective_strong(const BlockPartition& partition, const std::vector<MatrixXd>& lambda,
                             const MatrixXd& cost, double beta);

// 1.lambda + 1.mu - Tr[exp(-beta (C - diag(lambda) - (+)mu_i 11^T/K_i))] / beta.
double dual_objective_weak(const BlockPartition& partition, const VectorXd& lambda, const VectorXd& mu,
                           const MatrixXd& cost, double beta);

// Mixing coefficient tau = L_m / (L_m + e^{beta L_m} - 1).
double mixing_coefficient(int registry_block_size, double beta);

// tau I + (1 - tau) 11^T, the regularized optimum on one registry block.
MatrixXd closed_form_block(int registry_block_size, double beta);

// Exhaustive minimum-cost permutation (row k -> column perm[k]).
// Ties break towards the lexicographically smallest permutation.
std::vector<int> brute_force_assignment(const MatrixXd& costs);
double assignment_cost(const MatrixXd& costs, const std::vector<int>& perm);

// Keypoint sets sharing each registry point, as global indices. Empty sets
// are dropped.
std::vector<std::vector<Index>> registry_index_sets(const GroundTruth& truth);

// Reindexed diagonal block X[I_m, I_m].
MatrixXd registry_block(const MatrixXd& x, const std::vector<Index>& members);

// Exact diagonal blocks X^(i,i).
std::vector<MatrixXd> diagonal_blocks(const BlockPartition& partition, const MatrixXd& x);

struct DenseStrongRun {
  std::vector<MatrixXd> lambda;
  MatrixXd x;
  int iterations = 0;
  double last_increment = 0.0;  // max_i ||Delta Lambda_i||_F of the final step
};

// Fixed-point iteration Lambda_i <- Lambda_i - (eta / beta) log X^(i,i) with
// exact dense diagonal blocks. Stops when the increment drops below tol.
DenseStrongRun dense_solve_strong(const CorrespondenceMatrix& q, double beta, int max_iter, double tol,
                                  double eta = 1.0);

struct DenseWeakRun {
  VectorXd lambda;
  VectorXd mu;
  MatrixXd x;
  int iterations = 0;
  double last_increment = 0.0;
};

enum class WeakStep { Lambda, Mu, Both };

// One dense update of the weak duals; Both applies the two lines
// Jacobi-style from the same X.
void dense_weak_step(const CorrespondenceMatrix& q, double beta, VectorXd& lambda, VectorXd& mu, WeakStep which,
                     double eta = 1.0);

DenseWeakRun dense_solve_weak(const CorrespondenceMatrix& q, double beta, int max_iter, double tol,
                              double eta = 1.0);

// Strong-dual increment -(1/beta) log X^(i,i) at the given duals.
std::vector<MatrixXd> dense_strong_increment(const CorrespondenceMatrix& q, const std::vector<MatrixXd>& lambda,
                                             double beta);

}  // namespace pps::dense
