#pragma once

#include <stdexcept>
#include <string>

namespace relctrl {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible (multiply, add, solve, ...).
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A square system has no unique solution.
class SingularMatrixError : public Error {
  public:
    using Error::Error;
};

/// The binomial kernel formula was requested for matrices with AB != BA.
class NonCommutingError : public Error {
  public:
    using Error::Error;
};

/// The Kalman-type rank condition fails: no control can reach every target.
class NotControllableError : public Error {
  public:
    using Error::Error;
};

/// The requested horizon is below the minimal steering horizon.
class HorizonTooShortError : public Error {
  public:
    using Error::Error;
};

/// The controllability Gramian is singular at the requested horizon.
class SingularGramianError : public Error {
  public:
    using Error::Error;
};

/// A system spec file failed to parse or validate.
class SpecParseError : public Error {
  public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace relctrl
