#pragma once

#include <stdexcept>
#include <string>

namespace gcp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Arguments or configuration outside the domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed run configuration (schema, unknown keys, kernel/grid mismatch).
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

// Failures that only show up while computing: invariant violations,
// non-convergence, fronts leaving the measurement window.
class NumericalError : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, int iterations, double residual)
        : NumericalError(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

class MeasurementError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace gcp
