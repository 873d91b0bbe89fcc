#pragma once

#include <stdexcept>
#include <string>

namespace warpmin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A derivative order beyond the closed-form tables was requested.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

/// A profile could not be certified positive over the period.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Sign or zero structure could not be certified at the requested resolution.
/// Analyses that can return partial results attach them to a subclass.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (e.g. a non-critical slice).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was not met.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The fiber spectrum does not reach the eigenvalue range needed for an index.
class CutoffError : public Error {
 public:
  CutoffError(const std::string& what, double needed)
      : Error(what), needed_(needed) {}
  double needed() const noexcept { return needed_; }

 private:
  double needed_;
};

/// A structural invariant failed on an encoded instance. Always an encoding bug.
class ModelInconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (JSON, CSV, flags).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace warpmin
