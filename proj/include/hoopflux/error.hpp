#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hoopflux {

enum class ErrorCode {
  Chaining,
  UnknownSegment,
  UnknownName,
  NotIndependent,
  NotInSpan,
  NoWitness,
  UncertifiedFrame,
  DimensionMismatch,
  NotComparable,
  EmptyInput,
  FrameMismatch,
  NotInvariant,
  NoLoops,
  InvalidArgument,
  Validation,
  Parse,
};

std::string_view to_string(ErrorCode code);

// Domain errors are negative answers to a well-posed question (exit status 1
// in the CLI); everything else is bad input (exit status 2).
bool is_domain_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the error-kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace hoopflux
