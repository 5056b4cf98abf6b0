#include "midp/error.hpp"

namespace midp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::ProbabilitySumOutOfTolerance: return "ProbabilitySumOutOfTolerance";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::AtomOutOfUnitInterval: return "AtomOutOfUnitInterval";
    case ErrorCode::WeightSumOutOfTolerance: return "WeightSumOutOfTolerance";
    case ErrorCode::InvalidDegreesOfFreedom: return "InvalidDegreesOfFreedom";
    case ErrorCode::NegativeArgument: return "NegativeArgument";
    case ErrorCode::NegativeParameter: return "NegativeParameter";
    case ErrorCode::NegativeT: return "NegativeT";
    case ErrorCode::SigmaOutOfRange: return "SigmaOutOfRange";
    case ErrorCode::NonPositivePValue: return "NonPositivePValue";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::X1OutOfRange: return "X1OutOfRange";
    case ErrorCode::AlternativeViolatesPrecondition: return "AlternativeViolatesPrecondition";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingSigmaColumn: return "MissingSigmaColumn";
  }
  return "Unknown";
}

}  // namespace midp
