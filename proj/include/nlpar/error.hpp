#pragma once

#include <stdexcept>
#include <string>

namespace nlpar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Kernel evaluated on the diagonal x = y.
class SingularEvaluationError : public Error {
public:
    using Error::Error;
};

/// A tail or exterior integral does not converge for the declared decay.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// A cylinder, ball or time window does not fit the field it is applied to.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Factorization of a time-step system failed.
class LinearSolveError : public Error {
public:
    using Error::Error;
};

/// Requested feature is not available for this kernel or dimension.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Run configuration is malformed or out of range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class BudgetExceededError : public Error {
public:
    BudgetExceededError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

}  // namespace nlpar
