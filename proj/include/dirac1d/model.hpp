#pragma once

// Domain types shared by every solver stage. Natural units (hbar = c = 1):
// energies and the mass share one unit, lengths are inverse energies.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirac1d {

/// Inputs of the Kratzer (scalar + vector) and Coulomb (pseudoscalar) potentials:
///   Sigma(x) = -2D (a/|x| - q a^2 / (2 x^2)),   V_P(x) = -b/|x|.
struct PotentialParams {
  double mass = 1.0;          ///< M > 0
  double dissociation = 1.0;  ///< D > 0
  double length = 1.0;        ///< a > 0
  double pseudoscalar = 0.5;  ///< b >= 0 (0 switches the term off)
  double shape = 0.0;         ///< q >= 0; 0 is the Coulomb limit, 1 the standard Kratzer form
};

enum class Regime { SpinSymmetricKratzer, CoulombLimit, ScalarOnly, NonRelativistic };
enum class Component { Upper, Lower };

/// Whether the lower Coulomb component is restricted to b > 1/2 (non-negative
/// Laguerre index) or only to b > 0 (index > -1, still normalizable).
enum class BPolicy { Strict, Permissive };

std::string_view to_string(Regime regime);
std::string_view to_string(Component component);
std::optional<Regime> parse_regime(std::string_view text);
std::optional<Component> parse_component(std::string_view text);

inline bool is_relativistic(Regime regime) { return regime != Regime::NonRelativistic; }

struct ValidatedProblem {
  PotentialParams params;
  Regime regime = Regime::SpinSymmetricKratzer;
  Component component = Component::Upper;
  BPolicy policy = BPolicy::Strict;
  std::vector<std::string> warnings;
};

/// Checks parameter signs and the regime/component combination. Throws
/// dirac1d::Error on failure; never modifies the inputs.
ValidatedProblem validate(const PotentialParams& params, Regime regime, Component component,
                          BPolicy policy = BPolicy::Strict);

/// kappa = sqrt(M^2 - E^2) (relativistic) or sqrt(2M(M - E)) (non-relativistic).
/// Eigenfunctions are sampled in y = 2 kappa x.
double decay_constant(const PotentialParams& params, Regime regime, double energy);

/// Sum of vector and scalar potentials at x > 0.
double sigma_potential(const PotentialParams& params, double x);
double pseudoscalar_potential(const PotentialParams& params, double x);
double pseudoscalar_potential_derivative(const PotentialParams& params, double x);

/// Bracket U(x) of the second-order equation -phi'' + U phi = eps phi at fixed E.
/// Relativistic: (E+M) Sigma + V_P^2 +/- V_P' (upper/lower); scalar-only and
/// non-relativistic: 2M Sigma + V_P^2 + V_P'.
double effective_potential_at(const PotentialParams& params, Regime regime, Component component,
                              double energy, double x);

/// Spectral parameter eps: E^2 - M^2 relativistic, 2M(E - M) non-relativistic.
double eigen_parameter(const PotentialParams& params, Regime regime, double energy);

/// A solved bound state. `branch` is the sign of the scalar-only spectrum and
/// +1 everywhere else.
struct EnergyLevel {
  int n = 0;
  double energy = 0.0;
  Regime regime = Regime::SpinSymmetricKratzer;
  Component component = Component::Upper;
  double p = 1.0;      ///< near-origin exponent, phi ~ y^p
  double alpha = 1.0;  ///< Laguerre upper index, 2p - 1
  double kappa = 1.0;
  int branch = +1;
  std::string diagnostics;
};

}  // namespace dirac1d
