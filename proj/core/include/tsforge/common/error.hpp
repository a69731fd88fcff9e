#pragma once

#include <stdexcept>
#include <string>

namespace tsforge {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV cell, JSON document, artifact file).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Violated precondition on argument values (too short, out of range, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Tensor shapes that do not compose.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A NaN/Inf appeared, or a computation divided by a near-zero quantity.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Persisted artifact uses a schema this build cannot read.
class MigrationError : public Error {
public:
    using Error::Error;
};

}  // namespace tsforge
