#pragma once
#include <stdexcept>
#include <string>

namespace pi4 {

enum class ErrorKind {
  Syntax,                // parse error with position
  UnknownInstance,
  UnknownField,
  DuplicateDeclaration,
  SliceOutOfBounds,
  UnboundVariable,
  OverlappingInstances,
  Underflow,
  WidthMismatch,
  EnumerationSpaceExceeded,
  SolverUnavailable,
  SolverError,
  EncodingOverflow,
  FreeVariableCapture,
  Internal,
};

// Infrastructure and input errors. Domain-level negative results
// (type errors, Stuck configs) are values, not exceptions.
class Pi4Error : public std::runtime_error {
public:
  Pi4Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) {
  throw Pi4Error(k, msg);
}

} // namespace pi4
