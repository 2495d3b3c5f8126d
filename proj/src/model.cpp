#include "dirac1d/model.hpp"

#include <cmath>
#include <sstream>

#include "dirac1d/error.hpp"

namespace dirac1d {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::SpinSymmetricKratzer: return "kratzer";
    case Regime::CoulombLimit: return "coulomb";
    case Regime::ScalarOnly: return "scalar";
    case Regime::NonRelativistic: return "nonrel";
  }
  return "unknown";
}

std::string_view to_string(Component component) {
  return component == Component::Upper ? "upper" : "lower";
}

std::optional<Regime> parse_regime(std::string_view text) {
  if (text == "kratzer") return Regime::SpinSymmetricKratzer;
  if (text == "coulomb") return Regime::CoulombLimit;
  if (text == "scalar") return Regime::ScalarOnly;
  if (text == "nonrel") return Regime::NonRelativistic;
  return std::nullopt;
}

std::optional<Component> parse_component(std::string_view text) {
  if (text == "upper") return Component::Upper;
  if (text == "lower") return Component::Lower;
  return std::nullopt;
}

namespace {

void require_positive(double value, const char* name) {
  // !(v > 0) also rejects NaN
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << value;
    throw Error(ErrorCode::NonPositiveParameter, msg.str());
  }
}

// b = 0 only switches the pseudoscalar term off
void require_non_negative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be non-negative and finite, got " << value;
    throw Error(ErrorCode::NonPositiveParameter, msg.str());
  }
}

}  // namespace

ValidatedProblem validate(const PotentialParams& params, Regime regime, Component component,
                          BPolicy policy) {
  require_positive(params.mass, "M");
  require_positive(params.dissociation, "D");
  require_positive(params.length, "a");
  require_non_negative(params.pseudoscalar, "b");
  require_non_negative(params.shape, "q");

  if ((regime == Regime::CoulombLimit || regime == Regime::ScalarOnly) && params.shape != 0.0) {
    std::ostringstream msg;
    msg << "regime " << to_string(regime) << " requires q = 0, got q = " << params.shape;
    throw Error(ErrorCode::RegimeParamMismatch, msg.str());
  }

  if (component == Component::Lower && regime == Regime::NonRelativistic) {
    throw Error(ErrorCode::UnsupportedCombination,
                "the non-relativistic regime defines only the upper component");
  }
  if (component == Component::Lower && regime == Regime::ScalarOnly) {
    throw Error(ErrorCode::UnsupportedCombination,
                "the scalar-only regime quantizes the upper component; the lower one is its "
                "partner (see the wavefunction command)");
  }

  ValidatedProblem out{params, regime, component, policy, {}};
  if (params.pseudoscalar == 0.0) out.warnings.emplace_back("b = 0: no pseudoscalar term");
  if (component == Component::Lower && regime == Regime::CoulombLimit &&
      params.pseudoscalar <= 0.5) {
    if (policy == BPolicy::Strict) {
      std::ostringstream msg;
      msg << "lower Coulomb component needs b > 1/2 in strict mode, got b = "
          << params.pseudoscalar;
      throw Error(ErrorCode::RestrictedParameterB, msg.str());
    }
    out.warnings.emplace_back("b <= 1/2: lower component uses the regular exponent p = 1 - b");
  }
  return out;
}

double decay_constant(const PotentialParams& params, Regime regime, double energy) {
  const double m = params.mass;
  if (is_relativistic(regime)) {
    if (!(std::abs(energy) < m)) {
      std::ostringstream msg;
      msg << "relativistic bound states need |E| < M, got E = " << energy;
      throw Error(ErrorCode::OutOfBoundRange, msg.str());
    }
    return std::sqrt((m - energy) * (m + energy));
  }
  if (!(energy < m)) {
    std::ostringstream msg;
    msg << "non-relativistic bound states need E < M, got E = " << energy;
    throw Error(ErrorCode::OutOfBoundRange, msg.str());
  }
  return std::sqrt(2.0 * m * (m - energy));
}

double sigma_potential(const PotentialParams& params, double x) {
  const double a = params.length;
  return -2.0 * params.dissociation * (a / x - 0.5 * params.shape * a * a / (x * x));
}

double pseudoscalar_potential(const PotentialParams& params, double x) {
  return -params.pseudoscalar / x;
}

double pseudoscalar_potential_derivative(const PotentialParams& params, double x) {
  return params.pseudoscalar / (x * x);
}

double effective_potential_at(const PotentialParams& params, Regime regime, Component component,
                              double energy, double x) {
  const double vp = pseudoscalar_potential(params, x);
  const double dvp = pseudoscalar_potential_derivative(params, x);
  const double sigma = sigma_potential(params, x);
  switch (regime) {
    case Regime::SpinSymmetricKratzer:
    case Regime::CoulombLimit:
      return (energy + params.mass) * sigma + vp * vp + (component == Component::Upper ? dvp : -dvp);
    case Regime::ScalarOnly:
    case Regime::NonRelativistic:
      return 2.0 * params.mass * sigma + vp * vp + dvp;
  }
  return 0.0;
}

double eigen_parameter(const PotentialParams& params, Regime regime, double energy) {
  const double m = params.mass;
  if (is_relativistic(regime)) return (energy - m) * (energy + m);
  return 2.0 * m * (energy - m);
}

}  // namespace dirac1d
