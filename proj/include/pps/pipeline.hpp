#pragma once

#include "pps/core_types.hpp"
#include "pps/expm_action.hpp"
#include "pps/metrics.hpp"
#include "pps/recovery.hpp"
#include "pps/solve_report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pps {

enum class Formulation { Weak, Strong };
enum class RecoveryMethod { Fast, Slow, Thresh };

struct Duals {
  double beta = 0.0;
  std::variant<DualStrong, DualWeak> values;
};

struct SolveConfig {
  Formulation formulation = Formulation::Weak;
  double beta_scale = 5.0;
  std::optional<double> beta;  // overrides beta_scale
  int samples = 0;             // 0: 20 (weak) or 20 * max K (strong)
  double gamma = 5.0;
  int max_iter = 0;            // 0: 20 (weak) or 10 (strong)
  double tol = 1e-3;
  std::uint64_t seed = 0;
  ExpmOptions expm;
};

struct RecoverConfig {
  RecoveryMethod method = RecoveryMethod::Fast;
  std::optional<PivotSelection> selection;  // default_selection(N) when unset
  int k_tilde_factor = 10;
  int masked_samples = 200;
  ThresholdOptions threshold;
  std::uint64_t seed = 0;
  ExpmOptions expm;
};

struct SolveOutput {
  Duals duals;
  SolveReport report;
};

double resolve_beta(const SolveConfig& cfg, int images);
SolveOutput solve(const CorrespondenceMatrix& q, const SolveConfig& cfg);

struct RecoverOutput {
  MatchMask selected;                       // aligned with q.matches()
  std::optional<RegistrationMap> registration;  // fast / slow
  std::optional<MaskedScores> masked;           // thresh
  RecoveryTrace trace;
};

// Rounds the primal solution defined by (q, duals).
RecoverOutput recover(const CorrespondenceMatrix& q, const Duals& duals, const RecoverConfig& cfg);

// Masked scores without thresholding side effects, for curves.
std::vector<double> masked_scores(const CorrespondenceMatrix& q, const Duals& duals, const RecoverConfig& cfg);

std::string to_string(Formulation f);
std::string to_string(RecoveryMethod m);

}  // namespace pps
