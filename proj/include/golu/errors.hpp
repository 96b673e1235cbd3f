#pragma once

#include <stdexcept>
#include <string>

namespace golu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise out-of-domain numeric input.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A derivative was requested at a point where it does not exist.
class UndefinedDerivativeError : public Error {
public:
    using Error::Error;
};

/// Caller violated an API precondition (shapes, ordering of calls, flags).
class UsageError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not reach its accuracy target at the requested resolution.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Timer too coarse for the requested workload.
class MeasurementError : public Error {
public:
    using Error::Error;
};

/// Training diverged.
class TrainingFailure : public Error {
public:
    TrainingFailure(const std::string& what, std::size_t epoch) : Error(what), epoch_(epoch) {}
    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

/// Malformed input data (NaN scores, ragged CSV rows).
class DataError : public Error {
public:
    using Error::Error;
};

/// Parameter outside a tabulated range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Loss surface with too many NaN cells to summarize.
class DegenerateSurfaceError : public Error {
public:
    using Error::Error;
};

} // namespace golu
