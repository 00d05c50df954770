#pragma once

#include <stdexcept>
#include <string>

namespace pathforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Weighted least-squares design matrix is rank deficient.
class SingularFitError : public Error {
public:
    using Error::Error;
};

/// Input data violates a documented contract (lengths, spacing, coverage).
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration file or override.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace pathforge
