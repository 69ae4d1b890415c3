#pragma once

#include <stdexcept>
#include <string>

namespace scordant {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite value produced by an oracle; message carries the offending point.
struct EvaluationError : Error {
    using Error::Error;
};

struct SingularHessianError : Error {
    SingularHessianError(const std::string& what, double lambda_min)
        : Error(what), lambda_min(lambda_min) {}
    double lambda_min;
};

/// Thrown when a checker is asked to evaluate a bound whose premise fails.
struct PremiseError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

}  // namespace scordant
