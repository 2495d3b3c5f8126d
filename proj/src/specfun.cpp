#include "dirac1d/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dirac1d/error.hpp"

namespace dirac1d::specfun {

double laguerre(int n, double alpha, double y) {
  if (n < 0) throw Error(ErrorCode::DomainError, "laguerre: negative degree");
  if (!(alpha > -1.0)) {
    std::ostringstream msg;
    msg << "laguerre: alpha must exceed -1, got " << alpha;
    throw Error(ErrorCode::DomainError, msg.str());
  }
  if (!(y >= 0.0)) {
    std::ostringstream msg;
    msg << "laguerre: y must be non-negative, got " << y;
    throw Error(ErrorCode::DomainError, msg.str());
  }
  double prev = 1.0;
  if (n == 0) return prev;
  double curr = 1.0 + alpha - y;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - y) * curr - (k + alpha) * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

double kummer_polynomial(int n, double c2, double y) {
  if (n < 0) throw Error(ErrorCode::DomainError, "kummer_polynomial: negative degree");
  for (int k = 0; k < n; ++k) {
    if (c2 + k == 0.0) {
      std::ostringstream msg;
      msg << "(c2)_k vanishes for c2 = " << c2 << " at k = " << k + 1;
      throw Error(ErrorCode::PochhammerPole, msg.str());
    }
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (k - n) / ((c2 + k) * (k + 1.0)) * y;
    sum += term;
  }
  return sum;
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "log_gamma: argument must be positive, got " << x;
    throw Error(ErrorCode::DomainError, msg.str());
  }
  return std::lgamma(x);
}

namespace {

struct SegmentState {
  const std::function<double(double)>& f;
  const QuadratureSpec& spec;
  boost::math::quadrature::tanh_sinh<double> rule;
  std::size_t evaluations = 0;
  double running_max = 0.0;
  bool converged = true;

  SegmentState(const std::function<double(double)>& fn, const QuadratureSpec& s)
      : f(fn), spec(s), rule(static_cast<std::size_t>(std::min(s.max_depth, 15))) {}

  double eval(double x) {
    ++evaluations;
    const double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrand is not finite at x = " << x;
      throw Error(ErrorCode::NonConvergence, msg.str());
    }
    running_max = std::max(running_max, std::abs(v));
    return v;
  }

  // tanh-sinh never samples the endpoints themselves, so x_lo = 0 is fine for
  // integrands that are only singular in the limit
  double segment(double a, double b) {
    double err = 0.0;
    double l1 = 0.0;
    const double value =
        rule.integrate([this](double x) { return eval(x); }, a, b, 0.1 * spec.rel_tol, &err, &l1);
    if (err > std::max(spec.rel_tol * l1, spec.abs_floor)) converged = false;
    return value;
  }
};

}  // namespace

QuadratureResult integrate_halfline(const std::function<double(double)>& integrand, double x_lo,
                                    double x_hi, const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0) || !(spec.abs_floor > 0.0) || spec.max_depth < 1) {
    throw Error(ErrorCode::InvalidConfig, "quadrature tolerances must be positive, depth >= 1");
  }
  if (!(x_lo >= 0.0) || !(x_hi > x_lo)) {
    throw Error(ErrorCode::DomainError, "integrate_halfline needs 0 <= x_lo < x_hi");
  }
  SegmentState state(integrand, spec);
  QuadratureResult result;

  if (std::isfinite(x_hi)) {
    result.value = state.segment(x_lo, x_hi);
    result.truncation_point = x_hi;
  } else {
    constexpr int kMaxSegments = 200;
    double a = x_lo;
    double width = 1.0;
    double total = 0.0;
    int quiet_segments = 0;
    int k = 0;
    for (; k < kMaxSegments; ++k) {
      const double b = a + width;
      const double part = state.segment(a, b);
      total += part;
      const double f_end = std::abs(state.eval(b));
      const bool small_end = f_end <= spec.abs_floor * state.running_max;
      const bool small_part = std::abs(part) <= spec.rel_tol * std::abs(total);
      quiet_segments = (small_end && small_part) ? quiet_segments + 1 : 0;
      a = b;
      width *= 2.0;
      if (quiet_segments >= 2) break;
    }
    if (k == kMaxSegments) {
      throw Error(ErrorCode::NonConvergence, "integrand does not decay on the half line");
    }
    result.value = total;
    result.truncation_point = a;
  }
  if (!state.converged) {
    std::ostringstream msg;
    msg << "tanh-sinh refinement limit " << std::min(spec.max_depth, 15) << " reached before tolerance";
    throw Error(ErrorCode::NonConvergence, msg.str());
  }
  result.evaluations = state.evaluations;
  return result;
}

double integrate_samples(std::span<const double> s, double h) {
  const std::size_t n = s.size();
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "integration needs at least 2 samples");
  if (n == 2) return 0.5 * h * (s[0] + s[1]);
  if (n == 4) return 3.0 * h / 8.0 * (s[0] + 3.0 * s[1] + 3.0 * s[2] + s[3]);

  // Simpson over an odd number of points, then 3/8 over the last three intervals if needed.
  const std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 4;
  double acc = s[0] + s[simpson_end];
  for (std::size_t i = 1; i < simpson_end; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * s[i];
  double total = acc * h / 3.0;
  if (n % 2 == 0) {
    const std::size_t j = n - 4;
    total += 3.0 * h / 8.0 * (s[j] + 3.0 * s[j + 1] + 3.0 * s[j + 2] + s[j + 3]);
  }
  return total;
}

std::vector<double> second_derivative(std::span<const double> samples, double h) {
  if (samples.size() < 3) {
    throw Error(ErrorCode::TooFewSamples, "second_derivative needs at least 3 samples");
  }
  if (!(h > 0.0)) throw Error(ErrorCode::DomainError, "step must be positive");
  const double inv = 1.0 / (h * h);
  std::vector<double> out(samples.size() - 2);
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    out[i - 1] = (samples[i - 1] - 2.0 * samples[i] + samples[i + 1]) * inv;
  }
  return out;
}

Derivatives derivatives_fourth_order(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 6) throw Error(ErrorCode::TooFewSamples, "fourth-order stencils need at least 6 samples");
  if (!(h > 0.0)) throw Error(ErrorCode::DomainError, "step must be positive");
  Derivatives d{std::vector<double>(n), std::vector<double>(n)};
  const double i1 = 1.0 / (12.0 * h);
  const double i2 = 1.0 / (12.0 * h * h);

  for (std::size_t i = 2; i + 2 < n; ++i) {
    d.first[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * i1;
    d.second[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * i2;
  }

  // one-sided closures; `g(k)` walks inward from either end
  auto closure = [&](auto g, double sign, std::size_t at0, std::size_t at1) {
    d.first[at0] = sign * (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) * i1;
    d.first[at1] = sign * (-3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) * i1;
    d.second[at0] =
        (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5)) * i2;
    d.second[at1] =
        (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) * i2;
  };
  closure([&](std::size_t k) { return f[k]; }, 1.0, 0, 1);
  closure([&](std::size_t k) { return f[n - 1 - k]; }, -1.0, n - 1, n - 2);
  return d;
}

}  // namespace dirac1d::specfun
