// ============================================================================
// nsch/errors.hpp - exception hierarchy shared by every module
// ============================================================================
#pragma once

#include <stdexcept>
#include <string>

namespace nsch {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation of a singular potential at or beyond the pure phases.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Invalid model, scheme or preparation parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input data violates a documented precondition (e.g. negative concentration).
class DataError : public Error {
public:
    using Error::Error;
};

/// Mismatched grids or array sizes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Operation not available for the grid's domain mode.
class UnsupportedModeError : public Error {
public:
    using Error::Error;
};

/// A caller-side precondition failed (e.g. non-solenoidal input to a dual norm).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The regularized potential does not dominate the coercivity target below the horizon.
class CoercivityError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared during time stepping.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, long step) : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// Energy-law residual stayed above the trigger after all allowed step halvings.
class StabilityError : public Error {
public:
    StabilityError(const std::string& what, long step) : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// Configuration parse or validation failure.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File system or serialization failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace nsch
