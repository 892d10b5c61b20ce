#include "hoopflux/error.hpp"

namespace hoopflux {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Chaining: return "ChainingError";
    case ErrorCode::UnknownSegment: return "UnknownSegment";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::NotIndependent: return "NotIndependent";
    case ErrorCode::NotInSpan: return "NotInSpan";
    case ErrorCode::NoWitness: return "NoWitness";
    case ErrorCode::UncertifiedFrame: return "UncertifiedFrame";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NoLoops: return "NoLoops";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::Parse: return "ParseError";
  }
  return "Error";
}

bool is_domain_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotInSpan:
    case ErrorCode::NotInvariant:
    case ErrorCode::NoWitness:
    case ErrorCode::NotComparable:
    case ErrorCode::NoLoops:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace hoopflux
