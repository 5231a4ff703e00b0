#pragma once

#include <stdexcept>
#include <string>

namespace barron {

/// Base class for every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A target representation the requested operation cannot handle.
class UnsupportedTarget : public Error {
 public:
  using Error::Error;
};

/// The requested Barron norm is infinite for this target.
class DivergentNorm : public Error {
 public:
  using Error::Error;
};

/// An argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON or a file that violates its schema.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace barron
