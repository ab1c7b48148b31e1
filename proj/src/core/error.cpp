#include "qnet/error.hpp"

namespace qnet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::NonUnitVector: return "NonUnitVector";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::ZeroProbability: return "ZeroProbability";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::EmptyRow: return "EmptyRow";
    case ErrorCode::NonPositivePower: return "NonPositivePower";
    case ErrorCode::InvalidIndices: return "InvalidIndices";
    case ErrorCode::NoTIRPossible: return "NoTIRPossible";
    case ErrorCode::FrequencyMismatch: return "FrequencyMismatch";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::NegativeMean: return "NegativeMean";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::UnreachableThreshold: return "UnreachableThreshold";
    case ErrorCode::Unroutable: return "Unroutable";
    case ErrorCode::InvalidState: return "InvalidState";
  }
  return "Unknown";
}

}  // namespace qnet
