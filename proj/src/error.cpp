#include "gbench/error.hpp"

namespace gbench {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::DegenerateReferences: return "degenerate references";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::OutOfBounds: return "out of bounds";
    case ErrorKind::DegeneratePath: return "degenerate path";
    case ErrorKind::UnknownFamily: return "unknown family";
    case ErrorKind::UnknownMethod: return "unknown method";
    case ErrorKind::UnknownProblem: return "unknown problem";
    case ErrorKind::BudgetExceeded: return "budget exceeded";
    case ErrorKind::Protocol: return "protocol violation";
    case ErrorKind::MissingReferences: return "missing references";
    case ErrorKind::InvalidPlan: return "invalid plan";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace gbench
