#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uniwkb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Result not representable in double precision.
class OverflowError : public Error {
public:
  using Error::Error;
};

/// Expression text that does not match the potential grammar.
class ParseError : public Error {
public:
  ParseError(std::size_t column, const std::string& message)
      : Error("column " + std::to_string(column) + ": " + message), column_(column) {}

  /// 1-based column of the offending character.
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t column_;
};

/// No bound state exists for the requested energy or level.
class NoBoundStateError : public Error {
public:
  using Error::Error;
};

/// An iterative method (root finder, quadrature, shooting) failed to converge.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// A data file failed its embedded checksum or could not be read.
class IntegrityError : public Error {
public:
  using Error::Error;
};

}  // namespace uniwkb
