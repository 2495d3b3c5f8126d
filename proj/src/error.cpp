#include "dirac1d/error.hpp"

#include <utility>

namespace dirac1d {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::RegimeParamMismatch: return "RegimeParamMismatch";
    case ErrorCode::RestrictedParameterB: return "RestrictedParameterB";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OutOfBoundRange: return "OutOfBoundRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PochhammerPole: return "PochhammerPole";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::NoRootFound: return "NoRootFound";
    case ErrorCode::NoBoundState: return "NoBoundState";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::EplusMZero: return "EplusMZero";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::GridTouchesOrigin: return "GridTouchesOrigin";
    case ErrorCode::BisectionStall: return "BisectionStall";
    case ErrorCode::IndefiniteCount: return "IndefiniteCount";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveParameter:
    case ErrorCode::RegimeParamMismatch:
    case ErrorCode::RestrictedParameterB:
    case ErrorCode::UnsupportedCombination:
    case ErrorCode::InvalidGrid:
    case ErrorCode::InvalidConfig:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, std::vector<double> values)
    : Error(code, message) {
  values_ = std::move(values);
}

Error::Error(ErrorCode code, const std::string& message, std::vector<std::size_t> indices)
    : Error(code, message) {
  indices_ = std::move(indices);
}

}  // namespace dirac1d
