#pragma once

#include <stdexcept>
#include <string>

namespace pdp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A character or parameter lies outside its permitted domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// User-supplied data violates an invariant (repeated RS character, duplicate username, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A chain cannot be walked from the requested start without revisiting a cell.
class InvalidChainError : public Error {
 public:
  using Error::Error;
};

/// Malformed file, message or configuration text.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// The requested service is temporarily refusing work (e.g. logins during a rekey epoch).
class UnavailableError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdp
