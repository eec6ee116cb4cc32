#pragma once

#include <stdexcept>
#include <string>

namespace tdisp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: ring specs, literals, JSON documents.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation received arguments that violate its precondition
/// (ring or level mismatch, reducible modulus, non-invertible matrix, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured resource guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// The Newton polygon is not determined at the available level.
class InsufficientLevel : public Error {
 public:
  using Error::Error;
};

/// An internal self-check failed. This signals a bug, never bad input.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace tdisp
