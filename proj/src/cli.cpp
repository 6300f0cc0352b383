#include "pps/cli.hpp"

#include "pps/baseline_spectral.hpp"
#include "pps/error.hpp"
#include "pps/io.hpp"
#include "pps/metrics.hpp"
#include "pps/pipeline.hpp"
#include "pps/random.hpp"
#include "pps/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace pps {

namespace {

using io::format_double;

// --- shared flag groups -------------------------------------------------------

struct SynthFlags {
  int n = 100;
  int m = 1000;
  int kmin = 100;
  int kmax = 200;
  double q = 0.0;
};

void add_synth(CLI::App* app, SynthFlags& s, bool with_q) {
  app->add_option("--n", s.n, "Number of images")->capture_default_str();
  app->add_option("--m", s.m, "Registry size")->capture_default_str();
  app->add_option("--kmin", s.kmin, "Minimum keypoints per image")->capture_default_str();
  app->add_option("--kmax", s.kmax, "Maximum keypoints per image")->capture_default_str();
  if (with_q) app->add_option("--q", s.q, "Corruption probability")->capture_default_str();
}

struct SolveFlags {
  std::string formulation = "weak";
  double beta_scale = 5.0;
  double beta = 0.0;
  int samples = 0;
  double gamma = 5.0;
  int max_iter = 0;
  double tol = 1e-3;
  double expm_tol = 1e-8;
  int probes = 40;
};

void add_expm(CLI::App* app, double& tol, int& probes) {
  app->add_option("--expm-tol", tol, "Chebyshev truncation tolerance")->capture_default_str();
  app->add_option("--probes", probes, "Lanczos steps for the spectral interval")->capture_default_str();
}

void add_solve(CLI::App* app, SolveFlags& s) {
  app->add_option("--formulation", s.formulation, "weak or strong")
      ->check(CLI::IsMember({"weak", "strong"}))
      ->capture_default_str();
  app->add_option("--beta-scale", s.beta_scale, "beta = scale * log N / N")
      ->check(CLI::IsMember({5.0, 10.0, 20.0}))
      ->capture_default_str();
  app->add_option("--beta", s.beta, "Explicit beta (overrides --beta-scale)");
  app->add_option("--samples", s.samples, "Gaussian samples per iteration (default 20 weak, 20*max K strong)");
  app->add_option("--gamma", s.gamma, "Damping parameter")->capture_default_str();
  app->add_option("--max-iter", s.max_iter, "Iterations (default 20 weak, 10 strong)");
  app->add_option("--tol", s.tol, "Residual tolerance")->capture_default_str();
  add_expm(app, s.expm_tol, s.probes);
}

SolveConfig solve_config(const SolveFlags& s, std::uint64_t seed) {
  SolveConfig c;
  c.formulation = s.formulation == "strong" ? Formulation::Strong : Formulation::Weak;
  c.beta_scale = s.beta_scale;
  if (s.beta > 0.0) c.beta = s.beta;
  c.samples = s.samples;
  c.gamma = s.gamma;
  c.max_iter = s.max_iter;
  c.tol = s.tol;
  c.seed = seed;
  c.expm = {s.expm_tol, s.probes};
  return c;
}

struct RecoverFlags {
  std::string method = "fast";
  std::string selection = "auto";
  int k_tilde_factor = 10;
  int samples = 200;
  std::string threshold = "gmm";
  double percentile = 90.0;
  double expm_tol = 1e-8;
  int probes = 40;
};

void add_recover(CLI::App* app, RecoverFlags& r, bool with_method) {
  if (with_method)
    app->add_option("--method", r.method, "fast, slow or thresh")
        ->check(CLI::IsMember({"fast", "slow", "thresh"}))
        ->capture_default_str();
  app->add_option("--selection", r.selection, "Pivot rule: auto, max-overlap or random")
      ->check(CLI::IsMember({"auto", "max-overlap", "random"}))
      ->capture_default_str();
  app->add_option("--k-tilde-factor", r.k_tilde_factor, "Code alphabet K~ = factor * max K")->capture_default_str();
  app->add_option("--masked-samples", r.samples, "Gaussian samples for masked scores")->capture_default_str();
  app->add_option("--threshold", r.threshold, "gmm or percentile")
      ->check(CLI::IsMember({"gmm", "percentile"}))
      ->capture_default_str();
  app->add_option("--percentile", r.percentile, "Percentage of scored matches kept in percentile mode")
      ->capture_default_str();
}

RecoverConfig recover_config(const RecoverFlags& r, std::uint64_t seed) {
  RecoverConfig c;
  c.method = r.method == "slow" ? RecoveryMethod::Slow : r.method == "thresh" ? RecoveryMethod::Thresh : RecoveryMethod::Fast;
  if (r.selection == "max-overlap") c.selection = PivotSelection::MaxOverlap;
  if (r.selection == "random") c.selection = PivotSelection::Random;
  c.k_tilde_factor = r.k_tilde_factor;
  c.masked_samples = r.samples;
  c.threshold = {r.threshold == "percentile" ? ThresholdMode::Percentile : ThresholdMode::Gmm, r.percentile};
  c.seed = seed;
  c.expm = {r.expm_tol, r.probes};
  return c;
}

// --- helpers ------------------------------------------------------------------

std::uint64_t effective_seed(std::uint64_t flag) {
  const char* env = std::getenv("PPS_SEED");
  if (!env || !*env) return flag;
  std::uint64_t v = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, v);
  require(ec == std::errc() && ptr == end, ErrorCode::InvalidArgument, "PPS_SEED must be an unsigned integer");
  return v;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    io::save_text(path, content);
}

Duals duals_from_file(const io::DualFile& f) { return Duals{f.beta, f.duals}; }

io::DualFile duals_to_file(const BlockPartition& part, const Duals& d) { return io::DualFile{part, d.beta, d.values}; }

std::string match_key(const Match& m) {
  return std::to_string(m.a.image + 1) + "," + std::to_string(m.b.image + 1) + "," + std::to_string(m.a.index + 1) +
         "," + std::to_string(m.b.index + 1);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      require(used == item.size(), ErrorCode::InvalidArgument, "bad list entry '" + item + "'");
    } catch (const std::logic_error&) {
      fail(ErrorCode::InvalidArgument, "bad list entry '" + item + "'");
    }
  }
  require(!out.empty(), ErrorCode::InvalidArgument, "empty list");
  return out;
}

std::string eval_header() { return "precision,recall,f1,retained,true_retained,total_true"; }

std::string eval_row(const MatchEvaluation& e) {
  return format_double(e.precision) + "," + format_double(e.recall) + "," + format_double(e.f1) + "," +
         std::to_string(e.retained) + "," + std::to_string(e.true_retained) + "," + std::to_string(e.total_true);
}

std::string histogram_csv(const std::vector<double>& scores, int bins) {
  std::ostringstream os;
  os << "bin_lo,bin_hi,count\n";
  if (scores.empty()) return os.str();
  const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
  for (double s : scores) {
    auto b = static_cast<std::size_t>((s - lo) / (hi - lo) * bins);
    ++count[std::min(b, count.size() - 1)];
  }
  for (int b = 0; b < bins; ++b)
    os << format_double(lo + (hi - lo) * b / bins) << ',' << format_double(lo + (hi - lo) * (b + 1) / bins) << ','
       << count[static_cast<std::size_t>(b)] << '\n';
  return os.str();
}

struct Trial {
  GroundTruth truth;
  CorrespondenceMatrix q;
  MatchMask truth_mask;
};

Trial make_trial(const SynthFlags& s, double q, std::uint64_t seed) {
  SynthConfig cfg{s.n, s.m, s.kmin, s.kmax, q, seed};
  Trial t;
  t.truth = gen_ground_truth(cfg);
  t.q = corrupt(t.truth, q, seed);
  t.truth_mask = truth_mask(t.q, t.truth);
  return t;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return trial == 0 ? seed : stream_key(seed, {0x545249414cULL, static_cast<std::uint64_t>(trial)});
}

// Method names: spectral, or <weak|strong>-<fast|slow|thresh>.
struct Method {
  std::string name;
  bool spectral = false;
  Formulation formulation = Formulation::Weak;
  RecoveryMethod recovery = RecoveryMethod::Fast;
};

Method parse_method(const std::string& name) {
  Method m;
  m.name = name;
  if (name == "spectral") {
    m.spectral = true;
    return m;
  }
  const auto dash = name.find('-');
  require(dash != std::string::npos, ErrorCode::InvalidArgument, "unknown method '" + name + "'");
  const std::string f = name.substr(0, dash), r = name.substr(dash + 1);
  require(f == "weak" || f == "strong", ErrorCode::InvalidArgument, "unknown formulation in '" + name + "'");
  require(r == "fast" || r == "slow" || r == "thresh", ErrorCode::InvalidArgument, "unknown recovery in '" + name + "'");
  m.formulation = f == "strong" ? Formulation::Strong : Formulation::Weak;
  m.recovery = r == "slow" ? RecoveryMethod::Slow : r == "thresh" ? RecoveryMethod::Thresh : RecoveryMethod::Fast;
  return m;
}

struct MethodRun {
  MatchEvaluation eval;
  std::vector<double> scores;  // thresh and spectral
  int registry = -1;
  double seconds = 0.0;
};

MethodRun run_method(const Method& method, const Trial& t, SolveConfig solve_cfg, RecoverConfig rec_cfg) {
  const auto start = std::chrono::steady_clock::now();
  MethodRun run;
  if (method.spectral) {
    const SpectralEmbedding emb = top_eigvecs(t.q, default_spectral_rank(t.q.partition()), 50, 1e-6, rec_cfg.seed);
    run.scores = spectral_scores(emb.v, t.q);
    const MaskedScores th = threshold_scores(run.scores, rec_cfg.threshold);
    run.eval = evaluate(th.retained.empty() ? MatchMask(t.q.num_matches(), 0) : th.retained, t.truth_mask);
  } else {
    solve_cfg.formulation = method.formulation;
    rec_cfg.method = method.recovery;
    const SolveOutput sol = solve(t.q, solve_cfg);
    const RecoverOutput rec = recover(t.q, sol.duals, rec_cfg);
    run.eval = evaluate(rec.selected, t.truth_mask);
    if (rec.masked) run.scores = rec.masked->scores;
    if (rec.registration) run.registry = rec.registration->registry_size;
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

// --- commands -----------------------------------------------------------------

struct Common {
  std::uint64_t seed = 0;
};

int cmd_gen(const SynthFlags& s, std::uint64_t seed, const std::string& q_out, const std::string& truth_out) {
  SynthConfig cfg{s.n, s.m, s.kmin, s.kmax, s.q, seed};
  const GroundTruth truth = gen_ground_truth(cfg);
  const CorrespondenceMatrix q = corrupt(truth, s.q, seed);
  io::save_correspondence(q_out, q);
  io::save_registration(truth_out, io::to_registration(truth));
  return kExitOk;
}

int cmd_solve(const SolveFlags& s, std::uint64_t seed, const std::string& input, const std::string& duals_out,
              const std::string& report_out, const std::string& timing_out) {
  const CorrespondenceMatrix q = io::load_correspondence(input);
  const SolveOutput sol = solve(q, solve_config(s, seed));
  io::save_duals(duals_out, duals_to_file(q.partition(), sol.duals));

  std::ostringstream rep;
  rep << "iteration,eta,residual,degree,matvecs\n";
  for (const IterationRecord& r : sol.report.records)
    rep << r.iteration << ',' << format_double(r.eta) << ',' << format_double(r.residual) << ',' << r.degree << ','
        << r.matvecs << '\n';
  if (!report_out.empty()) io::save_text(report_out, rep.str());
  if (!timing_out.empty()) {
    std::ostringstream tm;
    tm << "iteration,seconds\n";
    for (const IterationRecord& r : sol.report.records) tm << r.iteration << ',' << format_double(r.seconds) << '\n';
    tm << "total," << format_double(sol.report.seconds) << '\n';
    io::save_text(timing_out, tm.str());
  }
  return kExitOk;
}

int cmd_recover(const RecoverFlags& r, std::uint64_t seed, const std::string& input, const std::string& duals_in,
                const std::string& out_path, const std::string& scores_out, const std::string& hist_out) {
  const CorrespondenceMatrix q = io::load_correspondence(input);
  const io::DualFile df = io::load_duals(duals_in);
  require(df.partition == q.partition(), ErrorCode::DimensionMismatch, "duals do not match the correspondence file");
  const RecoverOutput rec = recover(q, duals_from_file(df), recover_config(r, seed));

  if (rec.registration) {
    io::save_registration(out_path, io::Registration{rec.registration->partition, rec.registration->registry_size,
                                                     rec.registration->assignment});
    return kExitOk;
  }
  std::vector<Match> kept;
  const auto matches = q.matches();
  for (std::size_t t = 0; t < matches.size(); ++t)
    if (rec.selected[t]) kept.push_back(matches[t]);
  io::save_correspondence(out_path, CorrespondenceMatrix::build(q.partition(), kept));
  const MaskedScores& ms = *rec.masked;
  if (!scores_out.empty()) {
    std::ostringstream os;
    os << "i,j,k,l,score,retained\n";
    for (std::size_t t = 0; t < matches.size(); ++t)
      os << match_key(matches[t]) << ',' << format_double(ms.scores[t]) << ',' << int(rec.selected[t]) << '\n';
    io::save_text(scores_out, os.str());
  }
  if (!hist_out.empty()) io::save_text(hist_out, histogram_csv(ms.scores, 20));
  return kExitOk;
}

int cmd_eval(const std::string& input, const std::string& truth_path, const std::string& registration,
             const std::string& matches_path, const std::string& out_path, std::ostream& out) {
  const CorrespondenceMatrix q = io::load_correspondence(input);
  const GroundTruth truth = io::to_ground_truth(io::load_registration(truth_path));
  require(registration.empty() != matches_path.empty(), ErrorCode::InvalidArgument,
          "pass exactly one of --registration or --matches");
  MatchMask selected;
  if (!registration.empty()) {
    const io::Registration reg = io::load_registration(registration);
    selected = induced_matches(registration_from_truth(io::to_ground_truth(reg)), q);
  } else {
    const CorrespondenceMatrix kept = io::load_correspondence(matches_path);
    require(kept.partition() == q.partition(), ErrorCode::DimensionMismatch, "filtered matches use another partition");
    selected = mask_from_matches(q, std::vector<Match>(kept.matches().begin(), kept.matches().end()));
  }
  const MatchEvaluation e = evaluate(selected, truth_mask(q, truth));
  emit(out_path, eval_header() + "\n" + eval_row(e) + "\n", out);
  return kExitOk;
}

std::vector<double> read_scores(const std::string& path, const CorrespondenceMatrix& q) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::Parse, path + ": empty scores file");
  std::vector<double> scores(q.num_matches(), std::nan(""));
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() >= 5, ErrorCode::Parse, path + ":" + std::to_string(number) + ": expected i,j,k,l,score");
    try {
      const Match m{{std::stoi(cells[0]) - 1, std::stoi(cells[2]) - 1}, {std::stoi(cells[1]) - 1, std::stoi(cells[3]) - 1}};
      const auto pos = q.find(m);
      require(pos.has_value(), ErrorCode::SupportViolation,
              path + ":" + std::to_string(number) + ": match is not stored in Q");
      scores[*pos] = std::stod(cells[4]);
    } catch (const std::logic_error&) {
      fail(ErrorCode::Parse, path + ":" + std::to_string(number) + ": malformed row");
    }
  }
  for (double s : scores) require(!std::isnan(s), ErrorCode::Parse, path + ": not every match of Q is scored");
  return scores;
}

int cmd_prcurve(const SynthFlags& s, const SolveFlags& sf, const RecoverFlags& rf, std::uint64_t seed,
                const std::string& input, const std::string& truth_path, const std::string& scores_path,
                const std::string& method_name, int trials, int thresholds, const std::string& out_path,
                std::ostream& out) {
  require(thresholds >= 1, ErrorCode::InvalidArgument, "--thresholds must be >= 1");
  std::vector<std::vector<double>> all_scores;
  std::vector<MatchMask> all_truth;
  if (!scores_path.empty()) {
    require(!input.empty() && !truth_path.empty(), ErrorCode::InvalidArgument,
            "--scores needs --input and --truth");
    const CorrespondenceMatrix q = io::load_correspondence(input);
    const GroundTruth truth = io::to_ground_truth(io::load_registration(truth_path));
    all_scores.push_back(read_scores(scores_path, q));
    all_truth.push_back(truth_mask(q, truth));
  } else {
    require(trials >= 1, ErrorCode::InvalidArgument, "--trials must be >= 1");
    const Method method = parse_method(method_name);
    require(method.spectral || method.recovery == RecoveryMethod::Thresh, ErrorCode::InvalidArgument,
            "prcurve needs a scoring method (spectral or *-thresh)");
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = trial_seed(seed, t);
      const Trial trial = make_trial(s, s.q, ts);
      MethodRun run = run_method(method, trial, solve_config(sf, ts), recover_config(rf, ts));
      all_scores.push_back(std::move(run.scores));
      all_truth.push_back(trial.truth_mask);
    }
  }
  std::vector<double> pooled;
  for (const auto& v : all_scores) pooled.insert(pooled.end(), v.begin(), v.end());
  require(!pooled.empty(), ErrorCode::EmptyInput, "no scored matches");
  const std::vector<double> grid = threshold_grid(pooled, thresholds);

  const std::size_t n = all_scores.size();
  std::vector<std::vector<PrPoint>> curves;
  for (std::size_t t = 0; t < n; ++t) curves.push_back(pr_curve(all_scores[t], all_truth[t], grid));

  std::ostringstream os;
  os << "threshold,precision_mean,precision_std,recall_mean,recall_std,retained_mean,trials\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double pm = 0, rm = 0, km = 0;
    for (std::size_t t = 0; t < n; ++t) {
      pm += curves[t][g].eval.precision;
      rm += curves[t][g].eval.recall;
      km += static_cast<double>(curves[t][g].eval.retained);
    }
    pm /= n;
    rm /= n;
    km /= n;
    double ps = 0, rs = 0;
    for (std::size_t t = 0; t < n; ++t) {
      ps += std::pow(curves[t][g].eval.precision - pm, 2);
      rs += std::pow(curves[t][g].eval.recall - rm, 2);
    }
    // Sample standard deviation; zero for a single trial.
    ps = n > 1 ? std::sqrt(ps / (n - 1)) : 0.0;
    rs = n > 1 ? std::sqrt(rs / (n - 1)) : 0.0;
    os << format_double(grid[g]) << ',' << format_double(pm) << ',' << format_double(ps) << ',' << format_double(rm)
       << ',' << format_double(rs) << ',' << format_double(km) << ',' << n << '\n';
  }
  emit(out_path, os.str(), out);
  return kExitOk;
}

int cmd_bench(const SynthFlags& s, const SolveFlags& sf, const RecoverFlags& rf, std::uint64_t seed,
              const std::string& q_list, const std::string& methods, int trials, bool timing,
              const std::string& out_path, std::ostream& out) {
  require(trials >= 1, ErrorCode::InvalidArgument, "--trials must be >= 1");
  const std::vector<double> qs = parse_list(q_list);
  std::vector<Method> ms;
  {
    std::stringstream ss(methods);
    std::string item;
    while (std::getline(ss, item, ',')) ms.push_back(parse_method(item));
    require(!ms.empty(), ErrorCode::InvalidArgument, "empty --methods");
  }
  std::ostringstream os;
  os << "q,trial,method," << eval_header() << ",registry,average_precision" << (timing ? ",seconds" : "") << '\n';
  for (double q : qs) {
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = trial_seed(seed, t);
      const Trial trial = make_trial(s, q, ts);
      for (const Method& m : ms) {
        const MethodRun run = run_method(m, trial, solve_config(sf, ts), recover_config(rf, ts));
        const double ap = run.scores.empty() ? std::nan("") : average_precision(run.scores, trial.truth_mask);
        os << format_double(q) << ',' << t + 1 << ',' << m.name << ',' << eval_row(run.eval) << ','
           << (run.registry >= 0 ? std::to_string(run.registry) : std::string()) << ','
           << (std::isnan(ap) ? std::string() : format_double(ap));
        if (timing) os << ',' << format_double(run.seconds);
        os << '\n';
      }
    }
  }
  emit(out_path, os.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy-regularized SDP solvers for partial permutation synchronization", "pps"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;

  SynthFlags synth;
  SolveFlags solve_flags;
  RecoverFlags rec_flags;
  std::string input, truth, duals, out_path, report, timing_out, scores, hist, registration, matches, method;
  std::string q_out = "q.ppsq", truth_out = "truth.ppsr";
  std::string q_list = "0,0.1,0.2,0.3,0.4,0.5", methods = "weak-fast,weak-thresh,spectral";
  int trials = 1;
  int thresholds = 50;
  bool timing = false;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Random seed (PPS_SEED overrides)")->capture_default_str();
  };

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  add_synth(gen, synth, true);
  add_seed(gen);
  gen->add_option("--q-out", q_out, "Correspondence file (PPSQ)")->capture_default_str();
  gen->add_option("--truth-out", truth_out, "Ground-truth file (PPSR)")->capture_default_str();

  CLI::App* solve_cmd = app.add_subcommand("solve", "Run the weak or strong solver");
  solve_cmd->add_option("--input", input, "Correspondence file (PPSQ)")->required();
  add_solve(solve_cmd, solve_flags);
  add_seed(solve_cmd);
  solve_cmd->add_option("--duals-out", duals, "Dual file to write")->required();
  solve_cmd->add_option("--report-out", report, "Per-iteration report CSV");
  solve_cmd->add_option("--timing-out", timing_out, "Per-iteration wall time CSV");

  CLI::App* rec = app.add_subcommand("recover", "Round a solved instance");
  rec->add_option("--input", input, "Correspondence file (PPSQ)")->required();
  rec->add_option("--duals", duals, "Dual file from solve")->required();
  add_recover(rec, rec_flags, true);
  add_expm(rec, rec_flags.expm_tol, rec_flags.probes);
  add_seed(rec);
  rec->add_option("--out", out_path, "Registration (fast, slow) or filtered matches (thresh)")->required();
  rec->add_option("--scores-out", scores, "Match scores CSV (thresh)");
  rec->add_option("--histogram-out", hist, "Score histogram CSV (thresh)");

  CLI::App* ev = app.add_subcommand("eval", "Precision, recall and F1 of a recovery");
  ev->add_option("--input", input, "Observed correspondence file (PPSQ)")->required();
  ev->add_option("--truth", truth, "Ground-truth file (PPSR)")->required();
  ev->add_option("--registration", registration, "Registration file (PPSR)");
  ev->add_option("--matches", matches, "Filtered matches (PPSQ)");
  ev->add_option("--out", out_path, "Metrics CSV (default stdout)");

  CLI::App* pr = app.add_subcommand("prcurve", "Precision-recall curve over a threshold grid");
  pr->add_option("--input", input, "Observed correspondence file, with --scores");
  pr->add_option("--truth", truth, "Ground-truth file, with --scores");
  pr->add_option("--scores", scores, "Scores CSV from recover --scores-out");
  add_synth(pr, synth, true);
  add_solve(pr, solve_flags);
  add_recover(pr, rec_flags, false);
  add_seed(pr);
  method = "weak-thresh";
  pr->add_option("--method", method, "weak-thresh, strong-thresh or spectral")->capture_default_str();
  pr->add_option("--trials", trials, "Independent synthetic trials")->capture_default_str();
  pr->add_option("--thresholds", thresholds, "Number of grid thresholds")->capture_default_str();
  pr->add_option("--out", out_path, "Curve CSV (default stdout)");

  CLI::App* bench = app.add_subcommand("bench", "Synthetic benchmark over a corruption grid");
  add_synth(bench, synth, false);
  add_solve(bench, solve_flags);
  add_recover(bench, rec_flags, false);
  add_seed(bench);
  bench->add_option("--q-list", q_list, "Comma-separated corruption probabilities")->capture_default_str();
  bench->add_option("--methods", methods, "Comma-separated methods: spectral or <weak|strong>-<fast|slow|thresh>")
      ->capture_default_str();
  bench->add_option("--trials", trials, "Trials per corruption level")->capture_default_str();
  bench->add_flag("--timing", timing, "Add a wall-time column");
  bench->add_option("--out", out_path, "Benchmark CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    seed = effective_seed(seed);
    if (gen->parsed()) return cmd_gen(synth, seed, q_out, truth_out);
    if (solve_cmd->parsed()) return cmd_solve(solve_flags, seed, input, duals, report, timing_out);
    if (rec->parsed()) return cmd_recover(rec_flags, seed, input, duals, out_path, scores, hist);
    if (ev->parsed()) return cmd_eval(input, truth, registration, matches, out_path, out);
    if (pr->parsed())
      return cmd_prcurve(synth, solve_flags, rec_flags, seed, input, truth, scores, method, trials, thresholds,
                         out_path, out);
    if (bench->parsed())
      return cmd_bench(synth, solve_flags, rec_flags, seed, q_list, methods, trials, timing, out_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pps
