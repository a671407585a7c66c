#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace siegel {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: malformed matrices, characteristics, curves, files.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An enumeration would exceed its configured ceiling.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// The requested tolerance cannot be met under the configured norm ceiling.
class CutoffInfeasibleError : public ResourceLimitError {
public:
    using ResourceLimitError::ResourceLimitError;
};

/// A numerical procedure failed its own convergence or consistency gate.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Argument outside the supported evaluation domain.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Input is numerically degenerate for the requested operation.
class DegenerateError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Short scientific rendering of a number for error messages.
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace siegel
