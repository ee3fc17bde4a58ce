#pragma once

#include <stdexcept>
#include <string>

namespace medrisk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument supplied by the caller (exit code 2 in the CLI).
class UsageError : public Error {
public:
    using Error::Error;
};

class NegativeRadius : public UsageError {
public:
    explicit NegativeRadius(double r)
        : UsageError("contamination radius must be >= 0, got " + std::to_string(r)) {}
};

/// Sample size parity does not match the requested estimator.
class ParityError : public UsageError {
public:
    using UsageError::UsageError;
};

using WrongParity = ParityError;

class IndexOutOfRange : public UsageError {
public:
    using UsageError::UsageError;
};

class DomainError : public UsageError {
public:
    using UsageError::UsageError;
};

class NonMedianCentered : public UsageError {
public:
    using UsageError::UsageError;
};

class InvalidDensity : public UsageError {
public:
    using UsageError::UsageError;
};

/// Numerical failure (exit code 3 in the CLI).
class NumericalError : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The rejection sampler for the thinned model did not accept a draw.
class DegenerateConfig : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A search did not find a solution below its cap.
class NotReached : public Error {
public:
    using Error::Error;
};

}  // namespace medrisk
