#pragma once

// Analytical energy levels for the four solvable regimes.

#include <optional>
#include <string>
#include <vector>

#include "dirac1d/model.hpp"

namespace dirac1d {

/// Scan-and-bisect settings for the implicit Kratzer eigenvalue condition.
/// Tolerances are in units of M.
struct RootSolveConfig {
  int scan_points = 2000;
  double bisection_tol = 1e-12;
  double bracket_margin = 1e-10;
};

/// xi = D (E + M) q a^2 + b (b + 1) for the upper component, b (b - 1) for the lower.
double xi(const PotentialParams& params, Component component, double energy);

/// Positive root of p (p - 1) = xi. Throws NegativeRadicand for xi < -1/4.
double exponent_p(double xi_value);

/// xi == -1/4 (double root p = 1/2); callers decide whether that is acceptable.
bool exponent_at_boundary(double xi_value);

/// Root of  D a sqrt((M+E)/(M-E)) - (n + 1/2 + sqrt(1/4 + xi(E)))  on (-M, M).
/// Refuses to choose when the scan finds more than one sign change.
EnergyLevel solve_level_kratzer(const PotentialParams& params, Component component, int n,
                                const RootSolveConfig& cfg = {});

/// Closed-form q = 0 spectrum E = M (k^2 - D^2 a^2) / (k^2 + D^2 a^2), k = n + p.
EnergyLevel level_coulomb(const PotentialParams& params, Component component, int n);

/// E = sign * M sqrt(1 - 4 D^2 a^2 / (n + 1 + b)^2); NoBoundState when the radicand is negative.
EnergyLevel level_scalar_only(const PotentialParams& params, int n, int sign);

/// E = M [1 - 2 (2 D a / (2n + 1 + sqrt((2b + 1)^2 + 8 M D q a^2)))^2].
EnergyLevel level_nonrel(const PotentialParams& params, int n);

/// Dispatches on the problem's regime. `sign` is only read by ScalarOnly.
EnergyLevel solve_level(const ValidatedProblem& problem, int n, int sign = +1,
                        const RootSolveConfig& cfg = {});

struct SpectrumEntry {
  int n = 0;
  std::optional<EnergyLevel> level;
  std::string marker;  ///< reason the level is absent, empty when present
};

/// Levels n_min..n_max; scalar-only levels that do not exist become markers.
std::vector<SpectrumEntry> spectrum_range(const ValidatedProblem& problem, int n_min, int n_max,
                                          int sign = +1, const RootSolveConfig& cfg = {});

}  // namespace dirac1d
