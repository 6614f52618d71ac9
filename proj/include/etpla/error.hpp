#pragma once

#include <stdexcept>
#include <string>

namespace etpla {

enum class ErrorCode {
  Malformed,
  DuplicateRow,
  MissingRow,
  BadSymbol,
  LengthMismatch,
  DimensionMismatch,
  ConstantTerm,
  DanglingTerm,
  EmptyTerm,
  OutOfRange,
  FaninExceeded,
  EmptyMatrix,
  UnroutedNet,
  NoConvergence,
  SingularSystem,
  PanelTooSmall,
  UnsupportedScale,
  UnknownLed,
  EmptyInput,
  Internal,
};

const char* error_code_name(ErrorCode code);

/// Process exit code the CLI maps this error to: 2 = input validation,
/// 3 = solver failure, 4 = internal invariant violation.
int error_exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace etpla
