#pragma once

#include <stdexcept>
#include <string>

namespace physpline {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller passed an invalid value (bad basis index, negative weight, ...).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// File contents could not be parsed (bad number, missing column,
/// unsupported format version, truncated file).
class ParseError : public Error {
public:
  using Error::Error;
};

/// The fit has no position-type measurements, so the constant modes of the
/// model are unconstrained and the normal equations are singular.
class UnanchoredProblemError : public Error {
public:
  using Error::Error;
};

/// The normal equations could not be solved to tolerance.
class SingularSystemError : public Error {
public:
  using Error::Error;
};

/// Heading magnitude too small to reconstruct an angle at the requested time.
class UndefinedHeadingError : public Error {
public:
  using Error::Error;
};

}  // namespace physpline
