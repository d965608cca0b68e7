#pragma once

#include <stdexcept>
#include <string>

namespace pse {

/// Base class for every error raised on bad input. Anything else escaping the
/// library is an internal failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (negative weight, unnormalized
/// distribution, out-of-range parameter, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A scoring operation received a map with zero total weight.
class EmptyMapError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed content in a format the loader does not handle.
class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pse
