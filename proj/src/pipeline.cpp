#include "pps/pipeline.hpp"

#include "pps/error.hpp"
#include "pps/primal_oracle.hpp"
#include "pps/solver_strong.hpp"
#include "pps/solver_weak.hpp"

namespace pps {

namespace {

EffectiveCost cost_for(const CorrespondenceMatrix& q, const Duals& duals) {
  if (const auto* s = std::get_if<DualStrong>(&duals.values)) return EffectiveCost(q, *s);
  return EffectiveCost(q, std::get<DualWeak>(duals.values));
}

}  // namespace

double resolve_beta(const SolveConfig& cfg, int images) {
  if (cfg.beta) {
    require(*cfg.beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
    return *cfg.beta;
  }
  return default_beta(images, cfg.beta_scale);
}

SolveOutput solve(const CorrespondenceMatrix& q, const SolveConfig& cfg) {
  SolveOutput out;
  out.duals.beta = resolve_beta(cfg, q.partition().images());
  if (cfg.formulation == Formulation::Strong) {
    StrongOptions opt;
    opt.beta = out.duals.beta;
    opt.samples = cfg.samples;
    opt.gamma = cfg.gamma;
    opt.max_iter = cfg.max_iter > 0 ? cfg.max_iter : 10;
    opt.tol = cfg.tol;
    opt.seed = cfg.seed;
    opt.expm = cfg.expm;
    StrongResult r = solve_strong(q, opt);
    out.duals.values = std::move(r.duals);
    out.report = std::move(r.report);
  } else {
    WeakOptions opt;
    opt.beta = out.duals.beta;
    opt.samples = cfg.samples > 0 ? cfg.samples : 20;
    opt.gamma = cfg.gamma;
    opt.max_iter = cfg.max_iter > 0 ? cfg.max_iter : 20;
    opt.tol = cfg.tol;
    opt.seed = cfg.seed;
    opt.expm = cfg.expm;
    WeakResult r = solve_weak(q, opt);
    out.duals.values = std::move(r.duals);
    out.report = std::move(r.report);
  }
  return out;
}

std::vector<double> masked_scores(const CorrespondenceMatrix& q, const Duals& duals, const RecoverConfig& cfg) {
  const PrimalOracle oracle(cost_for(q, duals), duals.beta, cfg.expm, cfg.seed);
  ThresholdOptions keep_all{ThresholdMode::Percentile, 50.0};
  return masked_recover(oracle.half_operator(), q, cfg.masked_samples, cfg.seed, keep_all).scores;
}

RecoverOutput recover(const CorrespondenceMatrix& q, const Duals& duals, const RecoverConfig& cfg) {
  const PrimalOracle oracle(cost_for(q, duals), duals.beta, cfg.expm, cfg.seed);
  RecoverOutput out;
  if (cfg.method == RecoveryMethod::Thresh) {
    MaskedScores scores = masked_recover(oracle.half_operator(), q, cfg.masked_samples, cfg.seed, cfg.threshold);
    out.selected = scores.retained;
    if (out.selected.empty()) out.selected.assign(q.num_matches(), 0);
    out.masked = std::move(scores);
    return out;
  }
  RecoveryOptions opt;
  opt.selection = cfg.selection.value_or(default_selection(q.partition().images()));
  opt.seed = cfg.seed;
  const LinearOperator x = oracle.x_operator();
  RegistrationMap r;
  if (cfg.method == RecoveryMethod::Slow) {
    r = recover_partial_slow(x, q, opt, &out.trace);
  } else {
    const auto enc = make_encodings(q.partition(), cfg.k_tilde_factor, cfg.seed);
    r = recover_partial_fast(x, q, enc, opt, &out.trace);
  }
  r.validate();
  out.selected = induced_matches(r, q);
  out.registration = std::move(r);
  return out;
}

std::string to_string(Formulation f) { return f == Formulation::Strong ? "strong" : "weak"; }

std::string to_string(RecoveryMethod m) {
  switch (m) {
    case RecoveryMethod::Fast:
      return "fast";
    case RecoveryMethod::Slow:
      return "slow";
    case RecoveryMethod::Thresh:
      return "thresh";
  }
  return "fast";
}

}  // namespace pps
