#pragma once

#include "pps/linear_operator.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <vector>

namespace pps {

// Eigenvalue enclosure [lo, hi] for a symmetric operator. ritz_lo/ritz_hi
// hold the unpadded Lanczos extremes when the interval came from
// estimate_interval; NaN otherwise.
struct SpectralInterval {
  double lo = 0.0;
  double hi = 0.0;
  double ritz_lo = std::numeric_limits<double>::quiet_NaN();
  double ritz_hi = std::numeric_limits<double>::quiet_NaN();

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

// Truncated Chebyshev expansion of x -> exp(t x) on interval.
struct ChebPlan {
  SpectralInterval interval;
  double t = 0.0;
  std::vector<double> coeffs;  // coeffs.size() == degree + 1
  int degree = 1;
};

struct ExpmOptions {
  double tol = 1e-8;
  int probes = 40;
};

inline constexpr double kIntervalRelativePad = 0.1;
inline constexpr double kIntervalAbsolutePad = 1.0;
inline constexpr int kMaxChebDegree = 20000;

// Three-term Lanczos sweep from a seeded random start.
// Returns the Ritz extremes padded by 10% of their spread plus 1.0 per side.
// Throws BreakdownBeforeOneStep when dim == 0.
SpectralInterval estimate_interval(const LinearOperator& a, int probes, std::uint64_t seed);

// Samples exp(t x) at Chebyshev points of degree 8, 16, 32, ... until the
// coefficient tail drops below tol, then trims the expansion. The tail is
// measured against max|coeffs| and, when the Ritz range is known, against the
// largest value of exp(t x) on it. Throws DegreeOverflow past 20000.
ChebPlan plan_cheb(double t, const SpectralInterval& interval, double tol);

// W ~= exp(t A) Z by the Chebyshev three-term recurrence over the rescaled
// operator. Uses exactly plan.degree column matvecs per column of Z.
// Throws NonFiniteValue if the result overflows (interval violated).
Eigen::MatrixXd expm_multiply(const LinearOperator& a, const ChebPlan& plan, const Eigen::MatrixXd& z);

// Evaluates the expansion at a scalar x in the plan's interval.
double cheb_evaluate(const ChebPlan& plan, double x);

}  // namespace pps
