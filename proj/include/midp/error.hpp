#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace midp {

enum class ErrorCode {
  EmptyDistribution,
  NegativeProbability,
  ProbabilitySumOutOfTolerance,
  DegenerateDistribution,
  EmptyInput,
  ValueOutOfRange,
  AtomOutOfUnitInterval,
  WeightSumOutOfTolerance,
  InvalidDegreesOfFreedom,
  NegativeArgument,
  NegativeParameter,
  NegativeT,
  SigmaOutOfRange,
  NonPositivePValue,
  InvalidAlpha,
  X1OutOfRange,
  AlternativeViolatesPrecondition,
  InvalidConfig,
  ParseError,
  MissingSigmaColumn,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. The code is stable and machine-readable; the
/// message carries context (offending value, file path, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace midp
