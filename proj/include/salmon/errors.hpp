#pragma once

#include <stdexcept>
#include <string>

namespace salmon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different scalar fields (rational vs GF(p) vs float, or two primes).
class ModeMismatch : public Error {
 public:
  using Error::Error;
};

/// Shape or argument outside an operation's domain (non-square, bad direction, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exact polynomial division found a non-zero remainder.
class NotDivisible : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (polynomial line, tensor file, scalar literal).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition (e.g. extract_lr on a rank-9 system).
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// A symbolic expansion hit its configured term cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Data file failed structural validation (count, degree, independence).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace salmon
