#pragma once

#include <stdexcept>
#include <string>

namespace deltakit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold
/// (unknown point, x == y, element not on the unit sphere, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input: JSON documents, rational strings, tables.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A resource bound of the exact machinery would be exceeded
/// (dyadic resolution, tree depth, iteration caps).
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace deltakit
