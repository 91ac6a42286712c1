#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ess {

enum class ErrorCode {
  // input validation
  DuplicateFacilityId,
  UnknownFacilityInOffer,
  UnknownFacility,
  PriceOutOfBounds,
  InvariantViolation,
  ParseError,
  ValidationError,
  HorizonMismatch,
  InvalidTrace,
  EmptyTable,
  // runtime
  UnboundedProblem,
  NumericalFailure,
  MismatchedInterval,
  ZeroInertiaWithContingency,
  NonPositiveInertia,
  InvalidStep,
  NonPositiveLimit,
  DegenerateTrace,
  NoConvergence,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// True for codes caused by bad input (CLI exit code 1); false for runtime failures (exit code 2).
bool is_validation_error(ErrorCode code);

/// Single exception type for the library. The message always carries a locator
/// (file/field, facility id or interval index) when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ess
