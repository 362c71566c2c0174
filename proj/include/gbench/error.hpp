#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gbench {

enum class ErrorKind {
  InvalidInput,
  DegenerateReferences,
  DimensionMismatch,
  OutOfBounds,
  DegeneratePath,
  UnknownFamily,
  UnknownMethod,
  UnknownProblem,
  BudgetExceeded,
  Protocol,
  MissingReferences,
  InvalidPlan,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gbench
