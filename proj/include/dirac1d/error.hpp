#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dirac1d {

enum class ErrorCode {
  // input validation
  NonPositiveParameter,
  RegimeParamMismatch,
  RestrictedParameterB,
  UnsupportedCombination,
  InvalidGrid,
  InvalidConfig,
  // numerical / solver
  OutOfBoundRange,
  DomainError,
  PochhammerPole,
  NonConvergence,
  TooFewSamples,
  NegativeRadicand,
  MultipleRoots,
  NoRootFound,
  NoBoundState,
  RegimeMismatch,
  SingularDenominator,
  EplusMZero,
  TailTooLarge,
  ZeroNorm,
  GridTouchesOrigin,
  BisectionStall,
  IndefiniteCount,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by bad user input rather than by a failed computation.
bool is_validation_error(ErrorCode code);

/// Exception carrying a machine-readable code plus optional payload: candidate
/// energies for MultipleRoots, offending grid indices for SingularDenominator.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, std::vector<double> values);
  Error(ErrorCode code, const std::string& message, std::vector<std::size_t> indices);

  ErrorCode code() const noexcept { return code_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  ErrorCode code_;
  std::vector<double> values_;
  std::vector<std::size_t> indices_;
};

}  // namespace dirac1d
