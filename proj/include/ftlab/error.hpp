#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ftlab {

// Base of every error raised by the library. The CLI maps ValidationError
// subclasses to exit status 2 and NumericError subclasses to exit status 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (non-finite input,
// time outside a pulse window, ...).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Inconsistent model or backend configuration.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ValidationError(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class DataIntegrityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CompileError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The postselection rule discarded all probability mass.
class EmptyPostselectionError : public NumericError {
 public:
  using NumericError::NumericError;
};

class FitError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateStateError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace ftlab
