#include "ess/error.hpp"

namespace ess {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateFacilityId: return "DuplicateFacilityId";
    case ErrorCode::UnknownFacilityInOffer: return "UnknownFacilityInOffer";
    case ErrorCode::UnknownFacility: return "UnknownFacility";
    case ErrorCode::PriceOutOfBounds: return "PriceOutOfBounds";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::UnboundedProblem: return "UnboundedProblem";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::MismatchedInterval: return "MismatchedInterval";
    case ErrorCode::ZeroInertiaWithContingency: return "ZeroInertiaWithContingency";
    case ErrorCode::NonPositiveInertia: return "NonPositiveInertia";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::NonPositiveLimit: return "NonPositiveLimit";
    case ErrorCode::DegenerateTrace: return "DegenerateTrace";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateFacilityId:
    case ErrorCode::UnknownFacilityInOffer:
    case ErrorCode::UnknownFacility:
    case ErrorCode::PriceOutOfBounds:
    case ErrorCode::InvariantViolation:
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::HorizonMismatch:
    case ErrorCode::InvalidTrace:
    case ErrorCode::EmptyTable:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

}  // namespace ess
