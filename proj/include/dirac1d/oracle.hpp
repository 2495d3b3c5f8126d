#pragma once

// Independent check of analytic levels: discretize -phi'' + U phi = eps phi at
// the analytic energy and count eigenvalues with Sturm sequences.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dirac1d/model.hpp"
#include "dirac1d/spectrum.hpp"

namespace dirac1d {

struct OracleConfig {
  std::size_t points = 32768;
  double domain_factor = 40.0;   ///< x_max = domain_factor / kappa
  double x_min_factor = 1e-12;   ///< x_min = x_min_factor / kappa
  double eigen_tol = 1e-12;      ///< bisection width, units of kappa^2
  bool richardson = true;        ///< combine N and N/2 solves
  double pass_tolerance = 1e-4;  ///< on the relative error of eps
};

/// Throws InvalidConfig unless points >= 256, domain_factor >= 10, 0 < x_min_factor < 1,
/// eigen_tol > 0, pass_tolerance > 0.
void check_config(const OracleConfig& cfg);

/// U sampled at the given abscissae. GridTouchesOrigin for any x <= 0.
std::vector<double> effective_potential(const PotentialParams& params, Regime regime,
                                        Component component, double energy,
                                        std::span<const double> xs);

/// Symmetric tridiagonal pencil A - s W with diagonal W > 0. off[i] couples i and i+1.
struct TridiagonalPencil {
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> weight;
};

/// Number of pencil eigenvalues strictly below `shift` (LDL^T pivot signs).
/// A zero pivot nudges the shift by a few ulps; IndefiniteCount if that keeps failing.
std::size_t sturm_count(const TridiagonalPencil& pencil, double shift);

/// n-th smallest eigenvalue (n from 0) by bisection down to `tol`.
double pencil_eigenvalue(const TridiagonalPencil& pencil, int n, double tol);

/// Eigenvector for an eigenvalue estimate, by inverse iteration.
std::vector<double> pencil_eigenvector(const TridiagonalPencil& pencil, double eigenvalue);

/// n-th eigenvalue of -d^2/dx^2 + U on a uniform grid over [x_lo, x_hi] with
/// Dirichlet ends. `potential` holds U at all grid nodes; the end values are unused.
double sturm_eigenvalue(std::span<const double> potential, double x_lo, double x_hi, int n,
                        double tol = 1e-12);

/// Log-mesh discretization (x = e^t, phi = sqrt(x) u) of -phi'' + U phi = eps phi on
/// [x_min, x_max]: -u'' + (x^2 U + 1/4) u = eps x^2 u. The node at x_min is
/// eliminated with the regular local solution u ~ e^{s t}; Dirichlet at x_max.
/// `nodes` receives the x of each unknown.
TridiagonalPencil log_mesh_pencil(const PotentialParams& params, Regime regime,
                                  Component component, double energy, double x_min,
                                  double x_max, std::size_t points,
                                  std::vector<double>* nodes = nullptr);

struct VerificationReport {
  EnergyLevel level;
  double epsilon_analytic = 0.0;
  double epsilon_oracle = 0.0;  ///< extrapolated when Richardson is on
  double epsilon_fine = 0.0;
  double epsilon_coarse = 0.0;  ///< same as fine when Richardson is off
  double abs_error = 0.0;
  double rel_error = 0.0;
  double energy_error = 0.0;
  int oracle_nodes = 0;
  bool pass = false;
  std::string boundary = "regular solution at x_min, Dirichlet at x_max";
};

/// Solves level n analytically, freezes U at that energy and compares eps with the
/// oracle. `energy_offset` (units of M) is added to the analytic energy first; it
/// exists to prove the comparison can fail.
VerificationReport verify_level(const ValidatedProblem& problem, int n, int sign = +1,
                                const OracleConfig& cfg = {}, double energy_offset = 0.0,
                                const RootSolveConfig& root_cfg = {});

}  // namespace dirac1d
