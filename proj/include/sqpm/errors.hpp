#pragma once

#include <stdexcept>
#include <string>

namespace sqpm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Input that violates a domain invariant (state, POVM, behaviour, channel).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotInSpan : public Error {
 public:
  using Error::Error;
};

class WitnessUnavailable : public Error {
 public:
  using Error::Error;
};

class MotherTooLarge : public Error {
 public:
  using Error::Error;
};

class DegenerateScaling : public Error {
 public:
  using Error::Error;
};

class BehaviourMeasurementMismatch : public Error {
 public:
  using Error::Error;
};

class NonMonotoneDetected : public Error {
 public:
  using Error::Error;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

/// The SDP solver did not return an optimal certificate.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; `what()` carries the field path.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& msg)
      : Error(path.empty() ? msg : path + ": " + msg), path_(std::move(path)), message_(msg) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

}  // namespace sqpm
