#pragma once

#include <stdexcept>
#include <string>

namespace fcorr {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operator/space dimension mismatch, invalid slot, dim < 2, etc.
struct DimensionError : Error {
    using Error::Error;
};

/// A model or config violates its documented invariants.
struct ValidationError : Error {
    using Error::Error;
};

/// The trace-replaced steady-state system is singular.
struct DegenerateSteadyStateError : Error {
    using Error::Error;
};

/// Correlation requested where a population or numerator vanishes.
struct UndefinedCorrelationError : Error {
    using Error::Error;
};

/// Monte Carlo step size too large to resolve a jump.
struct StepSizeError : Error {
    using Error::Error;
};

} // namespace fcorr
