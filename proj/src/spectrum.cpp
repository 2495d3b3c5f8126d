#include "dirac1d/spectrum.hpp"

#include <cmath>
#include <sstream>

#include "dirac1d/error.hpp"

namespace dirac1d {

namespace {

// 1 + 4 xi may land a few ulps below zero when xi = -1/4 exactly in theory.
constexpr double kRadicandSlack = 1e-14;

void require_level_index(int n) {
  if (n < 0) throw Error(ErrorCode::DomainError, "quantum number n must be non-negative");
}

std::string boundary_note(double xi_value) {
  return exponent_at_boundary(xi_value) ? ";xi_boundary=1" : "";
}

}  // namespace

double xi(const PotentialParams& params, Component component, double energy) {
  const double b = params.pseudoscalar;
  const double a = params.length;
  const double kratzer = params.dissociation * (energy + params.mass) * params.shape * a * a;
  return kratzer + (component == Component::Upper ? b * (b + 1.0) : b * (b - 1.0));
}

double exponent_p(double xi_value) {
  double radicand = 1.0 + 4.0 * xi_value;
  if (radicand < 0.0) {
    if (radicand < -kRadicandSlack) {
      std::ostringstream msg;
      msg << "1 + 4 xi = " << radicand << " < 0; no normalizable exponent";
      throw Error(ErrorCode::NegativeRadicand, msg.str());
    }
    radicand = 0.0;
  }
  return 0.5 * (1.0 + std::sqrt(radicand));
}

bool exponent_at_boundary(double xi_value) {
  return std::abs(1.0 + 4.0 * xi_value) <= kRadicandSlack;
}

EnergyLevel solve_level_kratzer(const PotentialParams& params, Component component, int n,
                                const RootSolveConfig& cfg) {
  require_level_index(n);
  if (cfg.scan_points < 16 || !(cfg.bisection_tol > 0.0) || !(cfg.bracket_margin > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "root solver needs >= 16 scan points, positive tolerances");
  }
  const double m = params.mass;
  const double da = params.dissociation * params.length;
  auto residual = [&](double e) {
    return da * std::sqrt((m + e) / (m - e)) - (n + 0.5 + std::sqrt(0.25 + xi(params, component, e)));
  };

  const double lo = -m + cfg.bracket_margin * m;
  const double hi = m - cfg.bracket_margin * m;
  const double tol = cfg.bisection_tol * m;

  auto bisect = [&](double a, double fa, double b, int& steps) {
    // Runs past `tol` until the bracket stops shrinking, so roots of two
    // residuals that agree to rounding come out identical.
    steps = 0;
    while (true) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (b - a <= tol && steps >= 200) break;
      const double fm = residual(mid);
      ++steps;
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  struct Bracket { double a, fa, b; };
  std::vector<Bracket> brackets;
  std::vector<double> exact_roots;
  const int count = cfg.scan_points;
  double prev_e = lo;
  double prev_f = residual(lo);
  if (prev_f == 0.0) exact_roots.push_back(lo);
  for (int i = 1; i < count; ++i) {
    const double e = (i + 1 == count) ? hi : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    const double f = residual(e);
    if (f == 0.0) {
      exact_roots.push_back(e);
    } else if (prev_f != 0.0 && ((f < 0.0) != (prev_f < 0.0))) {
      brackets.push_back({prev_e, prev_f, e});
    }
    prev_e = e;
    prev_f = f;
  }

  std::vector<double> roots = exact_roots;
  int steps = 0;
  for (const auto& br : brackets) roots.push_back(bisect(br.a, br.fa, br.b, steps));

  if (roots.empty()) {
    throw Error(ErrorCode::NoRootFound,
                "no sign change of the eigenvalue residual on (-M, M); check the inputs");
  }
  if (roots.size() > 1) {
    std::ostringstream msg;
    msg << roots.size() << " candidate energies for n = " << n << ":";
    for (double r : roots) msg << ' ' << r;
    throw Error(ErrorCode::MultipleRoots, msg.str(), roots);
  }

  const double energy = roots.front();
  const double xi_value = xi(params, component, energy);
  EnergyLevel level;
  level.n = n;
  level.energy = energy;
  level.regime = Regime::SpinSymmetricKratzer;
  level.component = component;
  level.p = exponent_p(xi_value);
  level.alpha = 2.0 * level.p - 1.0;
  level.kappa = decay_constant(params, Regime::SpinSymmetricKratzer, energy);
  std::ostringstream diag;
  diag << "brackets=1;bisection_steps=" << steps << ";residual=" << residual(energy)
       << boundary_note(xi_value);
  level.diagnostics = diag.str();
  return level;
}

EnergyLevel level_coulomb(const PotentialParams& params, Component component, int n) {
  require_level_index(n);
  const double b = params.pseudoscalar;
  // Regular root of p (p - 1) = b (b -/+ 1): 1 + b upper, max(b, 1 - b) lower.
  const double p = component == Component::Upper ? 1.0 + b : (b >= 0.5 ? b : 1.0 - b);
  const double k = n + p;
  const double lambda = params.dissociation * params.length;
  const double k2 = k * k;
  const double l2 = lambda * lambda;
  EnergyLevel level;
  level.n = n;
  level.energy = params.mass * (k2 - l2) / (k2 + l2);
  level.regime = Regime::CoulombLimit;
  level.component = component;
  level.p = p;
  level.alpha = 2.0 * p - 1.0;
  // sqrt(M^2 - E^2) written without cancellation
  level.kappa = params.mass * 2.0 * k * lambda / (k2 + l2);
  level.diagnostics = "closed_form=1";
  if (component == Component::Lower && b < 0.5) level.diagnostics += ";b_below_half=1";
  return level;
}

EnergyLevel level_scalar_only(const PotentialParams& params, int n, int sign) {
  require_level_index(n);
  if (sign != 1 && sign != -1) throw Error(ErrorCode::DomainError, "sign must be +1 or -1");
  const double b = params.pseudoscalar;
  const double k = n + 1.0 + b;
  const double ratio = 2.0 * params.dissociation * params.length / k;
  if (ratio > 1.0) {
    std::ostringstream msg;
    msg << "2Da = " << 2.0 * params.dissociation * params.length << " exceeds n + 1 + b = " << k
        << "; level n = " << n << " does not exist";
    throw Error(ErrorCode::NoBoundState, msg.str());
  }
  const double radicand = (1.0 - ratio) * (1.0 + ratio);
  EnergyLevel level;
  level.n = n;
  level.energy = radicand == 0.0 ? 0.0 : sign * params.mass * std::sqrt(radicand);
  level.regime = Regime::ScalarOnly;
  level.component = Component::Upper;
  level.p = 1.0 + b;
  level.alpha = 2.0 * b + 1.0;
  level.kappa = params.mass * ratio;
  level.branch = sign;
  level.diagnostics = sign > 0 ? "closed_form=1;branch=+" : "closed_form=1;branch=-";
  return level;
}

EnergyLevel level_nonrel(const PotentialParams& params, int n) {
  require_level_index(n);
  const double b = params.pseudoscalar;
  const double a = params.length;
  const double m = params.mass;
  const double index =
      std::sqrt((2.0 * b + 1.0) * (2.0 * b + 1.0) + 8.0 * m * params.dissociation * params.shape * a * a);
  const double x = 2.0 * params.dissociation * a / (2.0 * n + 1.0 + index);
  EnergyLevel level;
  level.n = n;
  level.energy = m * (1.0 - 2.0 * x * x);
  level.regime = Regime::NonRelativistic;
  level.component = Component::Upper;
  level.p = 0.5 * (1.0 + index);
  level.alpha = index;
  level.kappa = 2.0 * m * x;
  level.diagnostics = "closed_form=1";
  return level;
}

EnergyLevel solve_level(const ValidatedProblem& problem, int n, int sign,
                        const RootSolveConfig& cfg) {
  switch (problem.regime) {
    case Regime::SpinSymmetricKratzer:
      return solve_level_kratzer(problem.params, problem.component, n, cfg);
    case Regime::CoulombLimit:
      return level_coulomb(problem.params, problem.component, n);
    case Regime::ScalarOnly:
      return level_scalar_only(problem.params, n, sign);
    case Regime::NonRelativistic:
      return level_nonrel(problem.params, n);
  }
  throw Error(ErrorCode::RegimeMismatch, "unknown regime");
}

std::vector<SpectrumEntry> spectrum_range(const ValidatedProblem& problem, int n_min, int n_max,
                                          int sign, const RootSolveConfig& cfg) {
  if (n_min < 0 || n_max < n_min) {
    throw Error(ErrorCode::InvalidConfig, "level range must satisfy 0 <= n_min <= n_max");
  }
  std::vector<SpectrumEntry> out;
  out.reserve(static_cast<std::size_t>(n_max - n_min + 1));
  for (int n = n_min; n <= n_max; ++n) {
    SpectrumEntry entry;
    entry.n = n;
    try {
      entry.level = solve_level(problem, n, sign, cfg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoBoundState) throw;
      entry.marker = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace dirac1d
