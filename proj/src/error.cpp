#include "pps/error.hpp"

namespace pps {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BreakdownBeforeOneStep: return "BreakdownBeforeOneStep";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::SizeGuardExceeded: return "SizeGuardExceeded";
    case ErrorCode::NonFiniteDual: return "NonFiniteDual";
    case ErrorCode::NonPositiveEstimate: return "NonPositiveEstimate";
    case ErrorCode::NonTermination: return "NonTermination";
    case ErrorCode::DegenerateGMM: return "DegenerateGMM";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::BreakdownBeforeOneStep:
    case ErrorCode::DegreeOverflow:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::NonFiniteDual:
    case ErrorCode::NonPositiveEstimate:
    case ErrorCode::NonTermination:
    case ErrorCode::DegenerateGMM:
    case ErrorCode::NoConvergence:
      return true;
    default:
      return false;
  }
}

}  // namespace pps
