#include "etpla/error.hpp"

namespace etpla {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Malformed: return "MALFORMED";
    case ErrorCode::DuplicateRow: return "DUPLICATE_ROW";
    case ErrorCode::MissingRow: return "MISSING_ROW";
    case ErrorCode::BadSymbol: return "BAD_SYMBOL";
    case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::ConstantTerm: return "CONSTANT_TERM";
    case ErrorCode::DanglingTerm: return "DANGLING_TERM";
    case ErrorCode::EmptyTerm: return "EMPTY_TERM";
    case ErrorCode::OutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::FaninExceeded: return "FANIN_EXCEEDED";
    case ErrorCode::EmptyMatrix: return "EMPTY_MATRIX";
    case ErrorCode::UnroutedNet: return "UNROUTED_NET";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::SingularSystem: return "SINGULAR_SYSTEM";
    case ErrorCode::PanelTooSmall: return "PANEL_TOO_SMALL";
    case ErrorCode::UnsupportedScale: return "UNSUPPORTED_SCALE";
    case ErrorCode::UnknownLed: return "UNKNOWN_LED";
    case ErrorCode::EmptyInput: return "EMPTY_INPUT";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::SingularSystem:
      return 3;
    case ErrorCode::Internal:
      return 4;
    default:
      return 2;
  }
}

}  // namespace etpla
