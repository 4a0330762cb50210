#pragma once

#include <stdexcept>
#include <string>

namespace sga {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a geometric function (e.g. time outside the aperture).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration, invalid parameters or malformed files.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for the acquisition mode (e.g. centroid removal on spotlight data).
class UnsupportedModeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Axis domain of a raster does not match what the operation consumes.
class PreconditionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Resampling or simulation would need samples outside the recorded window.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: degenerate filter, missing peak, non-monotonic mapping.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace sga
