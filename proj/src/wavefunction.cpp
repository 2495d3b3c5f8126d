#include "dirac1d/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dirac1d/error.hpp"
#include "dirac1d/specfun.hpp"

namespace dirac1d {

namespace {

constexpr std::size_t kResidualBuffer = 5;
constexpr double kNodeDeadBand = 1e-12;
constexpr double kTailFraction = 1e-10;
// panels near the origin integrated against x^s exactly
constexpr std::size_t kProductIntervals = 128;

void require_samples(std::span<const double> samples, const Grid& grid) {
  if (samples.size() != grid.count) {
    throw Error(ErrorCode::InvalidGrid, "sample count does not match the grid");
  }
}

// ln of the envelope x^p e^{-kappa x}
double log_envelope(const EnergyLevel& level, double x) {
  return level.p * std::log(x) - level.kappa * x;
}

// phi = g f with g = x^p e^{-kappa x}; returns f and its first two derivatives.
specfun::Derivatives smooth_factor_derivatives(const EnergyLevel& level,
                                               std::span<const double> phi, const Grid& grid,
                                               std::vector<double>& f) {
  f.resize(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    f[i] = phi[i] * std::exp(-log_envelope(level, grid.at(i)));
  }
  return specfun::derivatives_fourth_order(f, grid.step());
}

// h * integral over [x_j, x_j + 2h] of (x_j + h t)^s times the quadratic
// Lagrange basis on t = 0, 1, 2
void product_weights(double xj, double h, double s, double w[3]) {
  const double c = xj / h;
  auto moment = [&](int power) {
    const double e = s + power + 1.0;
    return (std::pow(c + 2.0, e) - std::pow(c, e)) / e;
  };
  const double m0 = moment(0);
  const double m1 = moment(1) - c * m0;
  const double m2 = moment(2) - 2.0 * c * moment(1) + c * c * m0;
  const double scale = h * std::pow(h, s);
  w[0] = scale * 0.5 * (m2 - 3.0 * m1 + 2.0 * m0);
  w[1] = scale * (2.0 * m1 - m2);
  w[2] = scale * 0.5 * (m2 - m1);
}

double estimate_origin_exponent(std::span<const double> density, const Grid& grid) {
  if (density.size() < 2 || !(density[0] > 0.0) || !(density[1] > 0.0)) return 0.0;
  const double s = std::log(density[1] / density[0]) / std::log(grid.at(1) / grid.at(0));
  return std::isfinite(s) && s > 0.0 ? s : 0.0;
}

}  // namespace

double Grid::at(std::size_t i) const {
  if (i + 1 == count) return x_max;
  return x_min + static_cast<double>(i) * step();
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = at(i);
  return xs;
}

Grid make_grid(double x_min, double x_max, std::size_t count) {
  if (!(x_min > 0.0) || !std::isfinite(x_max) || !(x_max > x_min) || count < 3) {
    std::ostringstream msg;
    msg << "grid needs 0 < x_min < x_max and >= 3 points, got [" << x_min << ", " << x_max
        << "] with " << count << " points";
    throw Error(ErrorCode::InvalidGrid, msg.str());
  }
  return Grid{x_min, x_max, count};
}

Grid default_grid(const EnergyLevel& level, std::size_t count, double x_min_factor,
                  double x_max_factor) {
  if (!(level.kappa > 0.0) || !std::isfinite(level.kappa)) {
    throw Error(ErrorCode::InvalidGrid, "decay constant must be positive");
  }
  return make_grid(x_min_factor / level.kappa, x_max_factor / level.kappa, count);
}

double component_value(const EnergyLevel& level, double x) {
  const double y = 2.0 * level.kappa * x;
  return std::exp(level.p * std::log(y) - 0.5 * y) * specfun::laguerre(level.n, level.alpha, y);
}

double component_slope(const EnergyLevel& level, double x) {
  const double y = 2.0 * level.kappa * x;
  const double lag = specfun::laguerre(level.n, level.alpha, y);
  const double dlag = level.n > 0 ? -specfun::laguerre(level.n - 1, level.alpha + 1.0, y) : 0.0;
  const double envelope = std::exp(level.p * std::log(y) - 0.5 * y);
  return 2.0 * level.kappa * envelope * ((level.p / y - 0.5) * lag + dlag);
}

std::vector<double> eval_component(const EnergyLevel& level, const PotentialParams& params,
                                   const Grid& grid) {
  if ((level.regime == Regime::CoulombLimit || level.regime == Regime::ScalarOnly) &&
      params.shape != 0.0) {
    throw Error(ErrorCode::RegimeMismatch, "level regime requires q = 0");
  }
  double expected = 0.0;
  try {
    expected = decay_constant(params, level.regime, level.energy);
  } catch (const Error&) {
    throw Error(ErrorCode::RegimeMismatch, "level energy is not a bound state for these parameters");
  }
  if (std::abs(expected - level.kappa) > 1e-8 * std::max(expected, level.kappa)) {
    throw Error(ErrorCode::RegimeMismatch, "level decay constant does not match the parameters");
  }
  std::vector<double> out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) out[i] = component_value(level, grid.at(i));
  return out;
}

std::vector<double> partner_component(const EnergyLevel& level, std::span<const double> phi1,
                                      const PotentialParams& params, const Grid& grid) {
  require_samples(phi1, grid);
  const double m = params.mass;
  const double e = level.energy;
  const bool relativistic = is_relativistic(level.regime);
  if (relativistic && std::abs(e + m) <= 4.0 * std::numeric_limits<double>::epsilon() * m) {
    throw Error(ErrorCode::EplusMZero, "E + M = 0: partner relation undefined");
  }

  std::vector<double> denom(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid.at(i);
    if (!relativistic) {
      denom[i] = 2.0 * m;
    } else if (level.regime == Regime::ScalarOnly) {
      denom[i] = e + m + sigma_potential(params, x);
    } else {
      denom[i] = e + m;
    }
  }
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < grid.count; ++i) {
    const bool zero = denom[i] == 0.0;
    const bool flips = i + 1 < grid.count && ((denom[i] < 0.0) != (denom[i + 1] < 0.0)) &&
                       denom[i + 1] != 0.0;
    if (zero || flips) {
      if (bad.empty() || bad.back() != i) bad.push_back(i);
      if (flips) bad.push_back(i + 1);
    }
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "E + M + V_S changes sign on the grid near x = " << grid.at(bad.front())
        << "; grid indices:";
    for (std::size_t i : bad) msg << ' ' << i;
    throw Error(ErrorCode::SingularDenominator, msg.str(), std::move(bad));
  }

  std::vector<double> f;
  const auto d = smooth_factor_derivatives(level, phi1, grid, f);
  std::vector<double> out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid.at(i);
    const double g = std::exp(log_envelope(level, x));
    const double slope = g * (d.first[i] + (level.p / x - level.kappa) * f[i]);
    const double shift = relativistic ? -pseudoscalar_potential(params, x) * phi1[i] : 0.0;
    out[i] = (slope + shift) / denom[i];
  }
  return out;
}

Normalization normalize(std::span<double> phi1, std::span<double> phi2, const Grid& grid,
                        std::optional<double> origin_exponent) {
  if (phi1.size() != grid.count || phi2.size() != grid.count) {
    throw Error(ErrorCode::InvalidGrid, "sample count does not match the grid");
  }
  const std::size_t count = grid.count;
  const double h = grid.step();
  std::vector<double> density(count);
  for (std::size_t i = 0; i < count; ++i) density[i] = phi1[i] * phi1[i] + phi2[i] * phi2[i];

  const double s = origin_exponent ? *origin_exponent : estimate_origin_exponent(density, grid);
  if (!(s > -1.0)) throw Error(ErrorCode::DomainError, "density exponent must exceed -1");

  Normalization out;
  out.head = density[0] * grid.x_min / (s + 1.0);

  std::size_t product_end = std::min(kProductIntervals, count - 1);
  product_end -= product_end % 2;
  double body = 0.0;
  for (std::size_t j = 0; j < product_end; j += 2) {
    double w[3];
    product_weights(grid.at(j), h, s, w);
    for (int k = 0; k < 3; ++k) {
      const double xk = grid.at(j + k);
      body += w[k] * density[j + k] / std::pow(xk, s);
    }
  }
  if (count - product_end >= 2) {
    body += specfun::integrate_samples(std::span<const double>(density).subspan(product_end), h);
  }

  const double last = density[count - 1];
  const double before = density[count - 2];
  if (last > 0.0) {
    const double rate = std::log(before / last) / h;
    if (!(rate > 0.0)) {
      throw Error(ErrorCode::TailTooLarge, "density is not decaying at x_max; extend the grid");
    }
    out.tail = last / rate;
  }

  out.raw_integral = out.head + body + out.tail;
  if (!(out.raw_integral > 0.0) || !std::isfinite(out.raw_integral)) {
    throw Error(ErrorCode::ZeroNorm, "density integrates to zero");
  }
  if (out.tail > kTailFraction * out.raw_integral) {
    std::ostringstream msg;
    msg << "tail beyond x_max is " << out.tail / out.raw_integral
        << " of the integral; extend the grid";
    throw Error(ErrorCode::TailTooLarge, msg.str());
  }
  out.constant = 1.0 / std::sqrt(out.raw_integral);
  for (auto& v : phi1) v *= out.constant;
  for (auto& v : phi2) v *= out.constant;
  return out;
}

int count_nodes(std::span<const double> samples) {
  double peak = 0.0;
  for (double v : samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0;
  const double floor = kNodeDeadBand * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double v : samples) {
    if (std::abs(v) < floor) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

ResidualResult ode_residual(const EnergyLevel& level, std::span<const double> samples,
                            const PotentialParams& params, const Grid& grid) {
  require_samples(samples, grid);
  if (grid.count < 2 * kResidualBuffer + 1 || grid.count < 6) {
    throw Error(ErrorCode::TooFewSamples, "residual needs at least 11 samples");
  }
  if (std::all_of(samples.begin(), samples.end(), [](double v) { return v == 0.0; })) {
    return {0.0, true};
  }
  std::vector<double> f;
  const auto d = smooth_factor_derivatives(level, samples, grid, f);
  const double eps = eigen_parameter(params, level.regime, level.energy);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = kResidualBuffer; i + kResidualBuffer < grid.count; ++i) {
    const double x = grid.at(i);
    const double g = std::exp(log_envelope(level, x));
    const double lg = level.p / x - level.kappa;
    const double second = g * (d.second[i] + 2.0 * lg * d.first[i] + (lg * lg - level.p / (x * x)) * f[i]);
    const double u = effective_potential_at(params, level.regime, level.component, level.energy, x);
    const double r = -second + u * samples[i] - eps * samples[i];
    num += r * r;
    den += eps * eps * samples[i] * samples[i];
  }
  if (den == 0.0) return {0.0, true};
  return {std::sqrt(num / den), false};
}

WavefunctionTable build_table(const ValidatedProblem& problem, const EnergyLevel& level,
                              const Grid& grid) {
  const auto& params = problem.params;
  WavefunctionTable table;
  table.grid = grid;
  table.level = level;
  table.x = grid.points();

  auto primary = eval_component(level, params, grid);
  table.nodes = count_nodes(primary);
  table.residual = ode_residual(level, primary, params, grid).value;

  double origin_exponent = 0.0;
  if (level.component == Component::Lower) {
    table.phi2 = std::move(primary);
    table.phi1.assign(grid.count, 0.0);
    table.phi1_available = false;
    table.phi2_source = "independent";
    origin_exponent = 2.0 * level.p;
  } else {
    table.phi2 = partner_component(level, primary, params, grid);
    table.phi1 = std::move(primary);
    table.phi2_source = "partner";
    // the partner behaves like x^(p-1) at the origin
    origin_exponent = 2.0 * level.p - 2.0;
  }

  const auto norm = normalize(table.phi1, table.phi2, grid, origin_exponent);
  table.norm_constant = norm.constant;
  table.tail_estimate = norm.tail * norm.constant * norm.constant;
  table.density.resize(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    table.density[i] = table.phi1[i] * table.phi1[i] + table.phi2[i] * table.phi2[i];
  }
  return table;
}

}  // namespace dirac1d
