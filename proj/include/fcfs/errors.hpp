#pragma once

#include <stdexcept>
#include <string>

namespace fcfs {

enum class ErrorCode {
  InvalidModel,
  UnknownIdentifier,
  DuplicateType,
  UnstableModel,
  TooManyTypes,
  ZeroRate,
  DomainError,
  UnstableGridPoint,
  OpenWindow,
};

const char* to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is what
/// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class UnstableGridPoint : public Error {
 public:
  explicit UnstableGridPoint(double rho, const std::string& detail);

  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

}  // namespace fcfs
