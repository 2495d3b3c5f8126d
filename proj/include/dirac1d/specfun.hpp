#pragma once

// Special functions and numerical primitives used by the solvers.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dirac1d::specfun {

/// Associated Laguerre polynomial L_n^alpha(y) for real alpha > -1, evaluated
/// with the three-term recurrence.
double laguerre(int n, double alpha, double y);

/// Terminating confluent hypergeometric series 1F1(-n; c2; y).
double kummer_polynomial(int n, double c2, double y);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_floor = 1e-14;
  int max_depth = 15;
};

struct QuadratureResult {
  double value = 0.0;
  /// Upper end actually integrated to; equals x_hi for finite ranges.
  double truncation_point = 0.0;
  std::size_t evaluations = 0;
};

/// Tanh-sinh quadrature (Boost.Math) on [x_lo, x_hi]; tolerates integrable
/// endpoint singularities. x_hi may be +infinity, in which case the range is
/// walked in doubling segments and truncated once the integrand has dropped
/// below abs_floor times its running maximum. max_depth caps the refinement
/// levels (at most 15).
QuadratureResult integrate_halfline(const std::function<double(double)>& integrand, double x_lo,
                                    double x_hi, const QuadratureSpec& spec = {});

/// Composite Simpson rule over uniformly spaced samples (3/8 rule closes an
/// even sample count).
double integrate_samples(std::span<const double> samples, double h);

/// Central second differences at interior points; the output has
/// samples.size() - 2 entries.
std::vector<double> second_derivative(std::span<const double> samples, double h);

struct Derivatives {
  std::vector<double> first;
  std::vector<double> second;
};

/// Fourth-order finite-difference first and second derivatives at every
/// sample (central in the interior, one-sided near the ends). Needs >= 6 samples.
Derivatives derivatives_fourth_order(std::span<const double> samples, double h);

}  // namespace dirac1d::specfun
