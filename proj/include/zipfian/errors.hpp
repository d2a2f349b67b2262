// Error hierarchy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace zipfian {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (XML, CSV, JSON). Carries a 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Well-formed input that violates the expected document structure.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Unknown symbol in a lookup table (yulmyeong, instrument names).
class MappingError : public Error {
 public:
  using Error::Error;
};

/// Scope selector does not match any events.
class ScopeError : public Error {
 public:
  using Error::Error;
};

/// Empty or insufficient data for the requested computation.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Lattice enumeration would exceed the configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace zipfian
