#pragma once

// Eigenfunction sampling, partner components, normalization and ODE residuals.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirac1d/model.hpp"

namespace dirac1d {

/// Uniform grid on [x_min, x_max], x_min > 0.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t count = 0;

  double step() const { return (x_max - x_min) / static_cast<double>(count - 1); }
  double at(std::size_t i) const;
  std::vector<double> points() const;
};

/// Throws InvalidGrid unless 0 < x_min < x_max (finite) and count >= 3.
Grid make_grid(double x_min, double x_max, std::size_t count);

/// x_min = x_min_factor / kappa, x_max = x_max_factor / kappa.
Grid default_grid(const EnergyLevel& level, std::size_t count = 16384,
                  double x_min_factor = 1e-6, double x_max_factor = 40.0);

/// e^{-y/2} y^p L_n^alpha(y) at y = 2 kappa x (unnormalized).
double component_value(const EnergyLevel& level, double x);
/// d/dx of component_value, via dL_n^alpha/dy = -L_{n-1}^{alpha+1}.
double component_slope(const EnergyLevel& level, double x);

/// Samples of component_value on the grid. RegimeMismatch when the level was
/// not solved for these parameters.
std::vector<double> eval_component(const EnergyLevel& level, const PotentialParams& params,
                                   const Grid& grid);

/// Lower amplitude from the upper one via the first-order relation:
///   (phi1' - V_P phi1) / (E + M)         spin-symmetric regimes
///   (phi1' - V_P phi1) / (E + M + V_S)   scalar-only
///   phi1' / (2M)                         non-relativistic
/// The factor i between components is dropped. The derivative is taken on
/// phi1 / (x^p e^{-kappa x}) with the level's p and kappa.
std::vector<double> partner_component(const EnergyLevel& level, std::span<const double> phi1,
                                      const PotentialParams& params, const Grid& grid);

struct Normalization {
  double constant = 1.0;      ///< N; inputs were multiplied by it
  double raw_integral = 0.0;  ///< integral of the unscaled density, head and tail included
  double head = 0.0;          ///< contribution of [0, x_min]
  double tail = 0.0;          ///< estimate for [x_max, inf)
};

/// Scales phi1, phi2 in place so that the density integrates to one on the half
/// line. `origin_exponent` is s in density ~ x^s near 0; estimated from the
/// first samples when absent. TailTooLarge if the tail estimate exceeds 1e-10
/// of the integral, ZeroNorm for a vanishing density.
Normalization normalize(std::span<double> phi1, std::span<double> phi2, const Grid& grid,
                        std::optional<double> origin_exponent = std::nullopt);

/// Sign changes between consecutive samples, ignoring |v| < 1e-12 max|v|.
int count_nodes(std::span<const double> samples);

struct ResidualResult {
  double value = 0.0;
  bool degenerate = false;  ///< all samples zero; value is 0
};

/// Relative L2 norm of -phi'' + U phi - eps phi over ||eps phi||, on the
/// interior minus 5 points at each end. U and eps are built from level.energy;
/// phi'' uses the same envelope factoring as partner_component.
ResidualResult ode_residual(const EnergyLevel& level, std::span<const double> samples,
                            const PotentialParams& params, const Grid& grid);

struct WavefunctionTable {
  Grid grid;
  EnergyLevel level;
  std::vector<double> x;
  std::vector<double> phi1;
  std::vector<double> phi2;
  std::vector<double> density;
  double norm_constant = 1.0;
  double tail_estimate = 0.0;
  int nodes = 0;
  double residual = 0.0;
  /// "partner": phi2 from the first-order relation. "independent": phi2 is the
  /// lower-component eigenfunction at its own energy and phi1 is not available.
  std::string phi2_source;
  bool phi1_available = true;
  std::string phase_convention = "phi2 stored as real amplitude; spinor lower component = -i*phi2";
};

/// Samples, partners, normalizes and checks one level.
WavefunctionTable build_table(const ValidatedProblem& problem, const EnergyLevel& level,
                              const Grid& grid);

}  // namespace dirac1d
