#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace pps {

struct IterationRecord {
  int iteration = 0;
  double eta = 0.0;
  // Strong: max_i ||B_i - I||_F / sqrt(K_i). Weak: max(|b - 1|_inf, |b_block - 1|_inf).
  // Measured on the estimate that drives the update of this iteration.
  double residual = 0.0;
  int degree = 0;             // Chebyshev degree of the panel exponential
  std::uint64_t matvecs = 0;  // samples * degree
  double seconds = 0.0;
};

struct SolveReport {
  std::vector<IterationRecord> records;
  std::uint64_t matvecs = 0;          // sum of records[t].matvecs
  std::uint64_t lanczos_matvecs = 0;  // interval estimation, counted separately
  double seconds = 0.0;
  bool converged = false;

  int iterations() const noexcept { return static_cast<int>(records.size()); }
  double final_residual() const noexcept { return records.empty() ? NAN : records.back().residual; }
};

// Default inverse temperature beta_scale * log(N) / N. Throws InvalidArgument
// for N < 2, where the formula gives 0.
double default_beta(int images, double beta_scale);

}  // namespace pps
