#pragma once

#include <stdexcept>
#include <string>

namespace prefnet {

/// Failure category. The C API maps each one to a distinct status code.
enum class ErrorKind {
  invalid_argument,
  io,
  parse,
  validation,
  domain,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace prefnet
