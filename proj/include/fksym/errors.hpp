#pragma once

#include <stdexcept>
#include <string>

namespace fksym {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (x <= 0, 1+4εt <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Parameters violate a documented validity constraint of an entry or construction.
class ValidityError : public Error {
public:
    using Error::Error;
};

// The requested combination is not implemented (e.g. an expectation with no integrable kernel).
class CapabilityError : public Error {
public:
    using Error::Error;
};

// Numerical failures. The CLI maps these to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConditioningError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Monte Carlo scheme produced too many NaN or exploded paths.
class SchemeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// build_drift: y(x) vanishes inside the evaluation domain.
class SingularDriftError : public NumericalError {
public:
    SingularDriftError(const std::string& what, double location)
        : NumericalError(what), location_(location) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

// stationary_solution: candidate fails the ODE residual check.
class ConstructionError : public NumericalError {
public:
    ConstructionError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace fksym
