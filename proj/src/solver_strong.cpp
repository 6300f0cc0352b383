#include "pps/solver_strong.hpp"

#include "pps/error.hpp"
#include "pps/parallel.hpp"
#include "pps/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace pps {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

struct PanelResult {
  std::vector<MatrixXd> blocks;
  int degree = 0;
  std::uint64_t matvecs = 0;
  std::uint64_t lanczos = 0;
};

PanelResult strong_panel(const CorrespondenceMatrix& q, const DualStrong& duals, double beta, int samples,
                         std::uint64_t seed, int iteration, EstimateMode mode, const ExpmOptions& expm) {
  const BlockPartition& part = q.partition();
  const EffectiveCost cost(q, duals);
  const LinearOperator op = cost.as_operator();
  const std::uint64_t key = stream_key(seed, {stream_tag::kStrongPanel, static_cast<std::uint64_t>(iteration)});

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

  out.blocks.resize(static_cast<std::size_t>(part.images()));
  parallel_for(0, part.images(), [&](Index i) {
    const int im = static_cast<int>(i);
    const auto rows = w.middleRows(part.offset(im), part.size(im));
    MatrixXd b = scale * (rows * rows.transpose());
    out.blocks[static_cast<std::size_t>(i)] = 0.5 * (b + b.transpose());
  });
  return out;
}

}  // namespace

double default_beta(int images, double beta_scale) {
  require(images >= 2, ErrorCode::InvalidArgument, "default beta needs N >= 2; pass beta explicitly");
  require(beta_scale > 0.0, ErrorCode::InvalidArgument, "beta scale must be positive");
  return beta_scale * std::log(static_cast<double>(images)) / images;
}

MatrixXd block_log_psd(const MatrixXd& b, double floor) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (b + b.transpose()));
  const VectorXd logs = eig.eigenvalues().array().max(floor).log();
  MatrixXd out = eig.eigenvectors() * logs.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

int default_strong_samples(const BlockPartition& partition) { return 20 * partition.max_size(); }

std::vector<MatrixXd> estimate_blocks_strong(const CorrespondenceMatrix& q, const DualStrong& duals, double beta,
                                             int samples, std::uint64_t seed, int iteration,
                                             const ExpmOptions& expm) {
  require(samples >= 1, ErrorCode::InvalidArgument, "samples must be >= 1");
  return strong_panel(q, duals, beta, samples, seed, iteration, EstimateMode::Stochastic, expm).blocks;
}

std::vector<MatrixXd> exact_blocks_strong(const CorrespondenceMatrix& q, const DualStrong& duals, double beta,
                                          const ExpmOptions& expm) {
  return strong_panel(q, duals, beta, 1, 0, 0, EstimateMode::Exact, expm).blocks;
}

double strong_residual(const std::vector<MatrixXd>& blocks) {
  double r = 0.0;
  for (const MatrixXd& b : blocks) {
    const double k = static_cast<double>(b.rows());
    r = std::max(r, (b - MatrixXd::Identity(b.rows(), b.cols())).norm() / std::sqrt(k));
  }
  return r;
}

StrongResult solve_strong(const CorrespondenceMatrix& q, const StrongOptions& options) {
  const BlockPartition& part = q.partition();
  require(options.beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
  require(options.gamma > 0.0, ErrorCode::InvalidArgument, "gamma must be positive");
  require(options.max_iter >= 1, ErrorCode::InvalidArgument, "max_iter must be >= 1");
  require(options.samples >= 0, ErrorCode::InvalidArgument, "samples must be >= 0");
  const int samples = options.samples > 0 ? options.samples : default_strong_samples(part);

  StrongResult result;
  result.duals = options.initial ? *options.initial : DualStrong::zeros(part);
  require(static_cast<int>(result.duals.blocks.size()) == part.images(), ErrorCode::DimensionMismatch,
          "initial duals do not match the partition");
  const int start = result.duals.iteration;
  const auto solve_start = Clock::now();

  for (int t = start + 1; t <= start + options.max_iter; ++t) {
    const auto iter_start = Clock::now();
    const double eta = std::min(options.gamma / t, 1.0);
    PanelResult panel = strong_panel(q, result.duals, options.beta, samples, options.seed, t, options.mode, options.expm);

    IterationRecord rec;
    rec.iteration = t;
    rec.eta = eta;
    rec.residual = strong_residual(panel.blocks);
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

    parallel_for(0, part.images(), [&](Index i) {
      MatrixXd& lam = result.duals.blocks[static_cast<std::size_t>(i)];
      lam -= (eta / options.beta) * block_log_psd(panel.blocks[static_cast<std::size_t>(i)]);
      lam = (0.5 * (lam + lam.transpose())).eval();
    });
    for (const MatrixXd& lam : result.duals.blocks)
      require(lam.allFinite(), ErrorCode::NonFiniteDual, "strong dual update produced non-finite values");
    result.duals.iteration = t;
    rec.seconds = elapsed(iter_start);
    result.report.records.push_back(rec);
  }
  result.report.seconds = elapsed(solve_start);
  return result;
}

}  // namespace pps
