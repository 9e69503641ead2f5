#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace noether {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed expression, unknown name, inconsistent definition.
struct UsageError : Error {
  using Error::Error;
};

/// Expression source could not be parsed. Carries the byte offset of the
/// failure and a hint describing what was expected there.
struct ParseError : UsageError {
  std::size_t offset;
  std::string expected;
  ParseError(std::size_t off, std::string what_expected)
      : UsageError("syntax error at offset " + std::to_string(off) +
                   ": expected " + what_expected),
        offset(off),
        expected(std::move(what_expected)) {}
};

/// Evaluation left the domain of a primitive (log of non-positive value,
/// division by zero, ...).
struct DomainError : Error {
  using Error::Error;
};

/// A linear solve or inversion met a singular matrix.
struct SingularError : Error {
  using Error::Error;
};

/// An iterative solve did not reach its tolerance.
struct ConvergenceError : Error {
  double last_residual;
  ConvergenceError(const std::string& msg, double residual)
      : Error(msg), last_residual(residual) {}
};

/// A phase point lies outside the requested action-angle chart. The message
/// names the violated inequality.
struct ChartError : Error {
  using Error::Error;
};

/// Adaptive integration failed (step underflow near a singularity, or a
/// domain error mid-flow). Carries the time at which integration stopped.
struct IntegrationError : Error {
  double t_reached;
  IntegrationError(const std::string& msg, double t)
      : Error(msg), t_reached(t) {}
};

}  // namespace noether
