#pragma once

#include <stdexcept>
#include <string>

namespace copyqnn {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Shape or qubit-count mismatch between operands.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A value is outside its documented domain (e.g. feature not in [-1,1]).
class RangeError : public Error {
  public:
    using Error::Error;
};

/// Input that would silently collapse to a meaningless state (all-zero
/// amplitude-encoding vector). Rejected instead of falling back.
class DegenerateInputError : public Error {
  public:
    using Error::Error;
};

/// Invalid argument to an operation (shots < 1, rr outside (0,1], ...).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Dataset file could not be parsed.
class ParseError : public Error {
  public:
    using Error::Error;
};

class BadMagicError : public ParseError {
  public:
    using ParseError::ParseError;
};

class TruncatedFileError : public ParseError {
  public:
    using ParseError::ParseError;
};

class CountMismatchError : public ParseError {
  public:
    using ParseError::ParseError;
};

/// Service-side failure (e.g. querying an untrained victim).
class ServiceError : public Error {
  public:
    using Error::Error;
};

/// Training cannot continue (non-finite gradient, empty training set).
class TrainingError : public Error {
  public:
    using Error::Error;
};

} // namespace copyqnn
