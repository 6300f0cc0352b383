#include "pps/solver_weak.hpp"

#include "pps/error.hpp"
#include "pps/parallel.hpp"
#include "pps/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace pps {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

struct PanelResult {
  WeakEstimate est;
  int degree = 0;
  std::uint64_t matvecs = 0;
  std::uint64_t lanczos = 0;
};

PanelResult weak_panel(const CorrespondenceMatrix& q, const DualWeak& duals, double beta, int samples,
                       std::uint64_t seed, int iteration, EstimateMode mode, const ExpmOptions& expm) {
  const BlockPartition& part = q.partition();
  const EffectiveCost cost(q, duals);
  const LinearOperator op = cost.as_operator();
  const std::uint64_t key = stream_key(seed, {stream_tag::kWeakPanel, static_cast<std::uint64_t>(iteration)});

  PanelResult out;
  const SpectralInterval interval = estimate_interval(op, expm.probes, key);
  out.lanczos = op.column_matvecs();
  const ChebPlan plan = plan_cheb(-0.5 * beta, interval, expm.tol);
  out.degree = plan.degree;

  MatrixXd z;
  double scale = 1.0;
  if (mode == EstimateMode::Exact) {
    z = MatrixXd::Identity(q.dim(), q.dim());
  } else {
    z = gaussian_panel(q.dim(), samples, key, {});
    scale = 1.0 / samples;
  }
  op.reset_counter();
  const MatrixXd w = expm_multiply(op, plan, z);
  out.matvecs = op.column_matvecs();

  out.est.diag = scale * w.rowwise().squaredNorm();
  out.est.block.resize(part.images());
  for (int i = 0; i < part.images(); ++i) {
    const Eigen::RowVectorXd sums = w.middleRows(part.offset(i), part.size(i)).colwise().sum();
    out.est.block[i] = scale * sums.squaredNorm() / part.size(i);
  }
  return out;
}

}  // namespace

WeakEstimate estimate_weak(const CorrespondenceMatrix& q, const DualWeak& duals, double beta, int samples,
                           std::uint64_t seed, int iteration, const ExpmOptions& expm) {
  require(samples >= 1, ErrorCode::InvalidArgument, "samples must be >= 1");
  return weak_panel(q, duals, beta, samples, seed, iteration, EstimateMode::Stochastic, expm).est;
}

WeakEstimate exact_weak(const CorrespondenceMatrix& q, const DualWeak& duals, double beta, const ExpmOptions& expm) {
  return weak_panel(q, duals, beta, 1, 0, 0, EstimateMode::Exact, expm).est;
}

double weak_residual(const WeakEstimate& est) {
  const double d = (est.diag.array() - 1.0).abs().maxCoeff();
  const double b = (est.block.array() - 1.0).abs().maxCoeff();
  return std::max(d, b);
}

WeakResult solve_weak(const CorrespondenceMatrix& q, const WeakOptions& options) {
  const BlockPartition& part = q.partition();
  require(options.beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
  require(options.gamma > 0.0, ErrorCode::InvalidArgument, "gamma must be positive");
  require(options.max_iter >= 1, ErrorCode::InvalidArgument, "max_iter must be >= 1");
  require(options.samples >= 1, ErrorCode::InvalidArgument, "samples must be >= 1");

  WeakResult result;
  result.duals = options.initial ? *options.initial : DualWeak::zeros(part);
  require(result.duals.lambda.size() == q.dim() && result.duals.mu.size() == part.images(),
          ErrorCode::DimensionMismatch, "initial duals do not match the partition");
  const int start = result.duals.iteration;
  const auto solve_start = Clock::now();

  for (int t = start + 1; t <= start + options.max_iter; ++t) {
    const auto iter_start = Clock::now();
    const double eta = std::min(options.gamma / t, 1.0);
    const PanelResult panel =
        weak_panel(q, result.duals, options.beta, options.samples, options.seed, t, options.mode, options.expm);
    require((panel.est.diag.array() > 0.0).all() && (panel.est.block.array() > 0.0).all(),
            ErrorCode::NonPositiveEstimate,
            "diagonal or block-sum estimate is not positive; increase samples");

    IterationRecord rec;
    rec.iteration = t;
    rec.eta = eta;
    rec.residual = weak_residual(panel.est);
    rec.degree = panel.degree;
    rec.matvecs = panel.matvecs;
    result.report.lanczos_matvecs += panel.lanczos;
    result.report.matvecs += panel.matvecs;

    if (rec.residual <= options.tol) {
      rec.seconds = elapsed(iter_start);
      result.report.records.push_back(rec);
      result.report.converged = true;
      break;
    }

    const double step = eta / options.beta;
    result.duals.lambda -= step * panel.est.diag.array().log().matrix();
    result.duals.mu -= step * panel.est.block.array().log().matrix();
    require(result.duals.lambda.allFinite() && result.duals.mu.allFinite(), ErrorCode::NonFiniteDual,
            "weak dual update produced non-finite values");
    result.duals.iteration = t;
    rec.seconds = elapsed(iter_start);
    result.report.records.push_back(rec);
  }
  result.report.seconds = elapsed(solve_start);
  return result;
}

}  // namespace pps
