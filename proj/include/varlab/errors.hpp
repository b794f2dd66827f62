#pragma once

#include <stdexcept>
#include <string>

namespace varlab {

enum class ErrorKind {
  invalid_parameter,
  unknown_lagrangian,
  inversion_failure,
  out_of_domain,
  boundary_evaluation_failure,
  parse_error,
  evaluation_error,
  invalid_test_function,
  not_applicable,
  insufficient_resolution,
  empty_cloud,
  singular_point,
  not_elliptic,
  io_error,
};

const char* to_string(ErrorKind kind);

/// Single exception type for all domain errors; `kind` identifies the
/// failure class so callers (and the CLI exit-code mapping) can dispatch
/// without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace varlab
