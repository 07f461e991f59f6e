#pragma once

#include <stdexcept>
#include <string>

namespace qjacobi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text or JSON input.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Operands that cannot be combined (alphabet, dimension or kind mismatch).
class MismatchError : public Error {
public:
  using Error::Error;
};

/// A mathematical precondition failed (division by zero, non-unit constant term, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

} // namespace qjacobi
