#pragma once

#include <stdexcept>
#include <string>

namespace ancilla {

/// A caller-side contract was violated (bad dimension, label out of range,
/// non-unitary input, malformed circuit, ...).
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InvalidDimensionError : public PreconditionError {
  public:
    using PreconditionError::PreconditionError;
};

/// A register or oracle computation would exceed its amplitude cap.
class SizeCapError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// A circuit document could not be read. The message carries the location
/// (byte offset or JSON path) of the problem.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ancilla
