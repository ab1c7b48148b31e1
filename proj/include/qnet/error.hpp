#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnet {

enum class ErrorCode {
  DimensionMismatch,
  NonUnitary,
  NonUnitVector,
  InvalidProbability,
  NegativeInput,
  ZeroProbability,
  ZeroProbabilityBranch,
  InvalidSize,
  InvalidGraph,
  EmptyRow,
  NonPositivePower,
  InvalidIndices,
  NoTIRPossible,
  FrequencyMismatch,
  ZeroDenominator,
  NegativeMean,
  ConfigInvalid,
  UnreachableThreshold,
  Unroutable,
  InvalidState,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; `code()` identifies the
// failure class named in the module contracts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qnet
