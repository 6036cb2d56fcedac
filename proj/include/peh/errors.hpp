#pragma once

#include <stdexcept>
#include <string>

namespace peh {

enum class ErrorKind {
  ComplexInvalid,
  NotACycle,
  NotAChainMap,
  HorizonExceeded,
  NotClassified,
  NotStabilized,
  InconsistentCycle,
  ParseError,
  InvariantViolation,
  DivisibilityError,
  ExpectationMismatch,
  DimensionMismatch,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace peh
