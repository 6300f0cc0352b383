#include "pps/expm_action.hpp"

#include "pps/error.hpp"
#include "pps/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pps {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd random_unit(Index dim, Rng& rng) {
  VectorXd v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = rng.normal();
  return v / v.norm();
}

// Removes the components of v along the first `count` basis columns, twice.
void orthogonalize(const MatrixXd& basis, Index count, VectorXd& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (count == 0) return;
    const VectorXd proj = basis.leftCols(count).transpose() * v;
    v.noalias() -= basis.leftCols(count) * proj;
  }
}

}  // namespace

SpectralInterval estimate_interval(const LinearOperator& a, int probes, std::uint64_t seed) {
  const Index dim = a.dim();
  require(dim > 0, ErrorCode::BreakdownBeforeOneStep, "operator has dimension 0");
  require(probes >= 1, ErrorCode::InvalidArgument, "probes must be >= 1");

  const Index steps = std::min<Index>(probes, dim);
  Rng rng = Rng::stream(seed, {stream_tag::kLanczos});
  MatrixXd basis(dim, steps);
  VectorXd alpha = VectorXd::Zero(steps);
  VectorXd beta = VectorXd::Zero(steps);

  basis.col(0) = random_unit(dim, rng);
  Index built = 0;
  MatrixXd w(dim, 1);
  for (Index j = 0; j < steps; ++j) {
    a.apply(basis.col(j), w);
    VectorXd r = w.col(0);
    alpha[j] = basis.col(j).dot(r);
    built = j + 1;
    r -= alpha[j] * basis.col(j);
    if (j > 0) r -= beta[j - 1] * basis.col(j - 1);
    if (j + 1 == steps) break;
    double nrm = r.norm();
    const double scale = std::max(1.0, std::abs(alpha[j]));
    if (nrm <= 1e-10 * scale) {
      // Invariant subspace found: restart from a fresh direction. The
      // tridiagonal coupling is zero across the restart.
      r = random_unit(dim, rng);
      orthogonalize(basis, built, r);
      nrm = r.norm();
      beta[j] = 0.0;
      if (nrm <= 1e-12) break;
      basis.col(j + 1) = r / nrm;
      continue;
    }
    beta[j] = nrm;
    basis.col(j + 1) = r / nrm;
  }

  MatrixXd t = MatrixXd::Zero(built, built);
  for (Index j = 0; j < built; ++j) {
    t(j, j) = alpha[j];
    if (j + 1 < built) t(j, j + 1) = t(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(t, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double pad = kIntervalRelativePad * (hi - lo) + kIntervalAbsolutePad;
  SpectralInterval out;
  out.lo = lo - pad;
  out.hi = hi + pad;
  out.ritz_lo = lo;
  out.ritz_hi = hi;
  require(std::isfinite(out.lo) && std::isfinite(out.hi), ErrorCode::NonFiniteValue, "Lanczos produced non-finite Ritz values");
  return out;
}

ChebPlan plan_cheb(double t, const SpectralInterval& interval, double tol) {
  require(tol > 0.0 && tol < 1.0, ErrorCode::InvalidArgument, "tol must lie in (0,1)");
  require(std::isfinite(interval.lo) && std::isfinite(interval.hi) && interval.lo <= interval.hi,
          ErrorCode::InvalidArgument, "invalid spectral interval");

  ChebPlan plan;
  plan.interval = interval;
  plan.t = t;
  double lo = interval.lo;
  double hi = interval.hi;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
    plan.interval.lo = lo;
    plan.interval.hi = hi;
  }
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  // Reference magnitude on the Ritz range, if known.
  double reference = std::numeric_limits<double>::infinity();
  if (std::isfinite(interval.ritz_lo) && std::isfinite(interval.ritz_hi))
    reference = std::max(std::exp(t * interval.ritz_lo), std::exp(t * interval.ritz_hi)) ;

  for (int d = 8;; d *= 2) {
    require(d <= kMaxChebDegree, ErrorCode::DegreeOverflow,
            "Chebyshev degree exceeds " + std::to_string(kMaxChebDegree) + "; loosen tol or shrink |t|");
    const int n = d + 1;
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double theta = std::numbers::pi * (j + 0.5) / n;
      f[static_cast<std::size_t>(j)] = std::exp(t * (center + half * std::cos(theta)));
    }
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += f[static_cast<std::size_t>(j)] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
      c[static_cast<std::size_t>(k)] = 2.0 * acc / n;
    }
    c[0] *= 0.5;
    for (double v : c) require(std::isfinite(v), ErrorCode::NonFiniteValue, "exp(t x) overflows on the interval");

    double cmax = 0.0;
    for (double v : c) cmax = std::max(cmax, std::abs(v));
    const double threshold = tol * std::min(cmax, reference);
    if (std::abs(c[static_cast<std::size_t>(d)]) > threshold || std::abs(c[static_cast<std::size_t>(d - 1)]) > threshold)
      continue;

    // Reject samplings that miss a sharp endpoint peak.
    double at_hi = 0.0;
    double at_lo = 0.0;
    for (int k = 0; k < n; ++k) {
      at_hi += c[static_cast<std::size_t>(k)];
      at_lo += (k % 2 ? -1.0 : 1.0) * c[static_cast<std::size_t>(k)];
    }
    const double f_hi = std::exp(t * hi);
    const double f_lo = std::exp(t * lo);
    if (std::max(std::abs(at_hi - f_hi), std::abs(at_lo - f_lo)) > 100.0 * tol * std::max({cmax, f_hi, f_lo}))
      continue;

    // Smallest degree >= 1 past which every sampled coefficient is below threshold.
    int degree = d;
    while (degree > 1 && std::abs(c[static_cast<std::size_t>(degree - 1)]) <= threshold) --degree;
    c.resize(static_cast<std::size_t>(degree) + 1);
    plan.coeffs = std::move(c);
    plan.degree = degree;
    return plan;
  }
}

MatrixXd expm_multiply(const LinearOperator& a, const ChebPlan& plan, const MatrixXd& z) {
  require(z.rows() == a.dim(), ErrorCode::DimensionMismatch, "panel rows differ from operator dimension");
  const double center = 0.5 * (plan.interval.lo + plan.interval.hi);
  const double half = 0.5 * (plan.interval.hi - plan.interval.lo);
  const double inv_half = 1.0 / half;

  MatrixXd prev = z;
  MatrixXd result = plan.coeffs[0] * z;
  if (plan.degree >= 1 && plan.coeffs.size() > 1) {
    MatrixXd cur(z.rows(), z.cols());
    a.apply(prev, cur);
    cur = (cur - center * prev) * inv_half;
    result += plan.coeffs[1] * cur;
    MatrixXd next(z.rows(), z.cols());
    const double two_inv_half = 2.0 * inv_half;
    for (int k = 2; k <= plan.degree; ++k) {
      a.apply(cur, next);
      const double ck = plan.coeffs[static_cast<std::size_t>(k)];
      double* n = next.data();
      const double* c = cur.data();
      const double* p = prev.data();
      double* res = result.data();
      for (Index e = 0; e < next.size(); ++e) {
        n[e] = two_inv_half * (n[e] - center * c[e]) - p[e];
        res[e] += ck * n[e];
      }
      std::swap(prev, cur);
      std::swap(cur, next);
    }
  }
  require(result.allFinite(), ErrorCode::NonFiniteValue, "exponential action overflowed; spectral interval violated");
  return result;
}

double cheb_evaluate(const ChebPlan& plan, double x) {
  const double center = 0.5 * (plan.interval.lo + plan.interval.hi);
  const double half = 0.5 * (plan.interval.hi - plan.interval.lo);
  const double y = (x - center) / half;
  double t0 = 1.0;
  double t1 = y;
  double acc = plan.coeffs[0];
  if (plan.coeffs.size() > 1) acc += plan.coeffs[1] * t1;
  for (std::size_t k = 2; k < plan.coeffs.size(); ++k) {
    const double t2 = 2.0 * y * t1 - t0;
    acc += plan.coeffs[k] * t2;
    t0 = t1;
    t1 = t2;
  }
  return acc;
}

}  // namespace pps
