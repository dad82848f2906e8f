#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace motorpose {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented invariant (non-unit quaternion, bad lambda, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A sphere point sits at (or numerically next to) the antipode of the origin.
class DegeneratePointError : public Error {
 public:
  using Error::Error;
};

/// A motor's sandwich action left the vector grade by more than tolerance.
class InvalidMotorError : public Error {
 public:
  using Error::Error;
};

/// Decode produced a rotor with residual components for a unit input motor.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number (0 when not line-oriented).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Inconsistent inputs across files (missing or duplicate frame ids).
class InputError : public Error {
 public:
  InputError(const std::string& what, std::vector<std::string> offenders)
      : Error(what), offenders_(std::move(offenders)) {}

  const std::vector<std::string>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

}  // namespace motorpose
