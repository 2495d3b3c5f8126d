#include "dirac1d/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dirac1d/error.hpp"
#include "dirac1d/wavefunction.hpp"

namespace dirac1d {

namespace {

constexpr int kShiftRetries = 4;
constexpr int kMaxBisections = 2000;
constexpr int kInverseIterations = 3;

struct CountAttempt {
  std::size_t negatives = 0;
  bool breakdown = false;
};

CountAttempt count_once(const TridiagonalPencil& pencil, double shift) {
  CountAttempt out;
  double pivot = 0.0;
  const std::size_t size = pencil.diag.size();
  for (std::size_t i = 0; i < size; ++i) {
    double d = pencil.diag[i] - shift * pencil.weight[i];
    if (i > 0) d -= pencil.off[i - 1] * pencil.off[i - 1] / pivot;
    if (d == 0.0 || !std::isfinite(d)) {
      out.breakdown = true;
      return out;
    }
    if (d < 0.0) ++out.negatives;
    pivot = d;
  }
  return out;
}

void gershgorin(const TridiagonalPencil& pencil, double& lo, double& hi) {
  const std::size_t size = pencil.diag.size();
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (std::size_t i = 0; i < size; ++i) {
    const double w = pencil.weight[i];
    double radius = 0.0;
    if (i > 0) radius += std::abs(pencil.off[i - 1]) / std::sqrt(pencil.weight[i - 1] * w);
    if (i + 1 < size) radius += std::abs(pencil.off[i]) / std::sqrt(pencil.weight[i + 1] * w);
    const double centre = pencil.diag[i] / w;
    lo = std::min(lo, centre - radius);
    hi = std::max(hi, centre + radius);
  }
  const double pad = 1e-8 * std::max({1.0, std::abs(lo), std::abs(hi)});
  lo -= pad;
  hi += pad;
}

void check_pencil(const TridiagonalPencil& pencil) {
  const std::size_t size = pencil.diag.size();
  if (size == 0 || pencil.weight.size() != size || pencil.off.size() + 1 != size) {
    throw Error(ErrorCode::InvalidGrid, "pencil arrays have inconsistent sizes");
  }
  for (double w : pencil.weight) {
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidGrid, "pencil weights must be positive");
  }
}

// Gaussian elimination with partial pivoting for a general tridiagonal system.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> sup, std::vector<double> rhs) {
  const std::size_t size = diag.size();
  std::vector<double> sup2(size, 0.0);
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  for (std::size_t i = 0; i + 1 < size; ++i) {
    if (std::abs(diag[i]) >= std::abs(sub[i])) {
      if (diag[i] == 0.0) diag[i] = tiny;
      const double factor = sub[i] / diag[i];
      diag[i + 1] -= factor * sup[i];
      rhs[i + 1] -= factor * rhs[i];
      sub[i] = 0.0;
    } else {
      const double factor = diag[i] / sub[i];
      diag[i] = sub[i];
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= factor * rhs[i];
      const double old_sup = sup[i];
      sup[i] = diag[i + 1];
      diag[i + 1] = old_sup - factor * diag[i + 1];
      if (i + 2 < size) {
        sup2[i] = sup[i + 1];
        sup[i + 1] = -factor * sup[i + 1];
      }
    }
  }
  if (diag[size - 1] == 0.0) diag[size - 1] = tiny;
  std::vector<double> x(size);
  for (std::size_t k = size; k-- > 0;) {
    double v = rhs[k];
    if (k + 1 < size) v -= sup[k] * x[k + 1];
    if (k + 2 < size) v -= sup2[k] * x[k + 2];
    x[k] = v / diag[k];
  }
  return x;
}

}  // namespace

void check_config(const OracleConfig& cfg) {
  if (cfg.points < 256 || !(cfg.domain_factor >= 10.0) || !(cfg.x_min_factor > 0.0) ||
      !(cfg.x_min_factor < 1.0) || !(cfg.eigen_tol > 0.0) || !(cfg.pass_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidConfig,
                "oracle needs >= 256 points, domain factor >= 10, 0 < x_min factor < 1 and "
                "positive tolerances");
  }
}

std::vector<double> effective_potential(const PotentialParams& params, Regime regime,
                                        Component component, double energy,
                                        std::span<const double> xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) {
      throw Error(ErrorCode::GridTouchesOrigin, "potential is singular at x <= 0",
                  std::vector<std::size_t>{i});
    }
    out[i] = effective_potential_at(params, regime, component, energy, xs[i]);
  }
  return out;
}

std::size_t sturm_count(const TridiagonalPencil& pencil, double shift) {
  double s = shift;
  for (int attempt = 0; attempt <= kShiftRetries; ++attempt) {
    const auto res = count_once(pencil, s);
    if (!res.breakdown) return res.negatives;
    const double nudge = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(shift)) * (attempt + 1);
    s = shift + ((attempt % 2 == 0) ? nudge : -nudge);
  }
  std::ostringstream msg;
  msg << "LDL^T pivot breakdown at shift " << shift;
  throw Error(ErrorCode::IndefiniteCount, msg.str());
}

double pencil_eigenvalue(const TridiagonalPencil& pencil, int n, double tol) {
  check_pencil(pencil);
  if (n < 0 || static_cast<std::size_t>(n) >= pencil.diag.size()) {
    throw Error(ErrorCode::DomainError, "eigenvalue index outside the matrix");
  }
  double lo = 0.0;
  double hi = 0.0;
  gershgorin(pencil, lo, hi);
  const auto target = static_cast<std::size_t>(n);
  std::size_t count_lo = sturm_count(pencil, lo);
  std::size_t count_hi = sturm_count(pencil, hi);
  if (count_lo > target || count_hi <= target) {
    throw Error(ErrorCode::BisectionStall, "Gershgorin interval does not bracket the eigenvalue");
  }
  for (int step = 0; step < kMaxBisections; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid <= lo || mid >= hi) return mid;
    const std::size_t c = sturm_count(pencil, mid);
    if (c < count_lo || c > count_hi) {
      std::ostringstream msg;
      msg << "Sturm count not monotone near " << mid;
      throw Error(ErrorCode::BisectionStall, msg.str());
    }
    if (c > target) {
      hi = mid;
      count_hi = c;
    } else {
      lo = mid;
      count_lo = c;
    }
  }
  throw Error(ErrorCode::BisectionStall, "bisection did not reach the tolerance");
}

std::vector<double> pencil_eigenvector(const TridiagonalPencil& pencil, double eigenvalue) {
  check_pencil(pencil);
  const std::size_t size = pencil.diag.size();
  const double sigma = eigenvalue + 1e-10 * std::max(1.0, std::abs(eigenvalue));
  std::vector<double> sub(pencil.off);
  std::vector<double> sup(pencil.off);
  sub.push_back(0.0);
  sup.push_back(0.0);
  std::vector<double> diag(size);
  for (std::size_t i = 0; i < size; ++i) diag[i] = pencil.diag[i] - sigma * pencil.weight[i];

  std::vector<double> v(size, 1.0);
  for (int it = 0; it < kInverseIterations; ++it) {
    std::vector<double> rhs(size);
    for (std::size_t i = 0; i < size; ++i) rhs[i] = pencil.weight[i] * v[i];
    v = solve_tridiagonal(sub, diag, sup, rhs);
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    if (!(peak > 0.0) || !std::isfinite(peak)) {
      throw Error(ErrorCode::NonConvergence, "inverse iteration lost the eigenvector");
    }
    for (double& x : v) x /= peak;
  }
  return v;
}

double sturm_eigenvalue(std::span<const double> potential, double x_lo, double x_hi, int n,
                        double tol) {
  if (potential.size() < 3 || !(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
    throw Error(ErrorCode::InvalidGrid, "uniform grid needs >= 3 nodes and x_hi > x_lo");
  }
  const std::size_t nodes = potential.size();
  const double h = (x_hi - x_lo) / static_cast<double>(nodes - 1);
  const double inv_h2 = 1.0 / (h * h);
  TridiagonalPencil pencil;
  pencil.diag.resize(nodes - 2);
  pencil.weight.assign(nodes - 2, 1.0);
  pencil.off.assign(nodes - 3, -inv_h2);
  for (std::size_t i = 0; i + 2 < nodes; ++i) pencil.diag[i] = 2.0 * inv_h2 + potential[i + 1];
  return pencil_eigenvalue(pencil, n, tol);
}

TridiagonalPencil log_mesh_pencil(const PotentialParams& params, Regime regime,
                                  Component component, double energy, double x_min,
                                  double x_max, std::size_t points, std::vector<double>* nodes) {
  if (!(x_min > 0.0) || !(x_max > x_min) || !std::isfinite(x_max) || points < 4) {
    throw Error(ErrorCode::InvalidGrid, "log mesh needs 0 < x_min < x_max and >= 4 points");
  }
  const double t0 = std::log(x_min);
  const double t1 = std::log(x_max);
  const double h = (t1 - t0) / static_cast<double>(points - 1);
  const double inv_h2 = 1.0 / (h * h);
  // unknowns are nodes 1 .. points-2
  const std::size_t size = points - 2;
  TridiagonalPencil pencil;
  pencil.diag.resize(size);
  pencil.weight.resize(size);
  pencil.off.assign(size - 1, -inv_h2);
  if (nodes) nodes->resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double x = std::exp(t0 + static_cast<double>(k + 1) * h);
    const double u = effective_potential_at(params, regime, component, energy, x);
    pencil.diag[k] = 2.0 * inv_h2 + x * x * u + 0.25;
    pencil.weight[k] = x * x;
    if (nodes) (*nodes)[k] = x;
  }
  const double u0 = effective_potential_at(params, regime, component, energy, x_min);
  const double s = std::sqrt(std::max(0.25 + x_min * x_min * u0, 0.0));
  pencil.diag[0] -= std::exp(-s * h) * inv_h2;
  return pencil;
}

VerificationReport verify_level(const ValidatedProblem& problem, int n, int sign,
                                const OracleConfig& cfg, double energy_offset,
                                const RootSolveConfig& root_cfg) {
  check_config(cfg);
  const auto& params = problem.params;
  VerificationReport report;
  report.level = solve_level(problem, n, sign, root_cfg);
  const double energy = report.level.energy + energy_offset * params.mass;
  const double kappa = decay_constant(params, problem.regime, energy);
  report.epsilon_analytic = eigen_parameter(params, problem.regime, energy);

  const double x_min = cfg.x_min_factor / kappa;
  const double x_max = cfg.domain_factor / kappa;
  const double tol = cfg.eigen_tol * kappa * kappa;
  const Component component = problem.component;

  std::vector<double> nodes;
  const auto fine = log_mesh_pencil(params, problem.regime, component, energy, x_min, x_max,
                                    cfg.points, &nodes);
  report.epsilon_fine = pencil_eigenvalue(fine, n, tol);
  if (cfg.richardson) {
    const auto coarse = log_mesh_pencil(params, problem.regime, component, energy, x_min, x_max,
                                        cfg.points / 2);
    report.epsilon_coarse = pencil_eigenvalue(coarse, n, tol);
    report.epsilon_oracle = (4.0 * report.epsilon_fine - report.epsilon_coarse) / 3.0;
  } else {
    report.epsilon_coarse = report.epsilon_fine;
    report.epsilon_oracle = report.epsilon_fine;
  }

  const auto vec = pencil_eigenvector(fine, report.epsilon_fine);
  report.oracle_nodes = count_nodes(vec);

  const double m = params.mass;
  report.abs_error = std::abs(report.epsilon_oracle - report.epsilon_analytic);
  report.rel_error = report.abs_error / std::abs(report.epsilon_analytic);
  if (!is_relativistic(problem.regime)) {
    report.energy_error = report.abs_error / (2.0 * m);
  } else if (std::abs(energy) < 1e-3 * m) {
    const double e_oracle = std::sqrt(std::max(m * m + report.epsilon_oracle, 0.0));
    const double e_analytic = std::sqrt(std::max(m * m + report.epsilon_analytic, 0.0));
    report.energy_error = std::abs(e_oracle - e_analytic);
  } else {
    report.energy_error = report.abs_error / (2.0 * std::abs(energy));
  }
  report.pass = report.rel_error <= cfg.pass_tolerance && report.oracle_nodes == n;
  return report;
}

}  // namespace dirac1d
