#pragma once

#include <stdexcept>
#include <string>

namespace degcalc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range user input (configs, serialized text).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A mathematical precondition does not hold: non-complete weight,
/// non-elliptic sector, discontinuous coefficient, domain mismatch.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iterative procedure failed to converge.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations)
        : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations_(iterations) {}
    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

/// Two groupoid elements that cannot be multiplied.
class ComposabilityError : public Error {
public:
    ComposabilityError(const std::string& what, double mismatch)
        : Error(what + " (mismatch " + std::to_string(mismatch) + ")"), mismatch_(mismatch) {}
    double mismatch() const noexcept { return mismatch_; }

private:
    double mismatch_;
};

/// A point outside the domain of a chart or a map.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A checked mathematical identity failed beyond its tolerance.
class PropertyViolation : public Error {
public:
    using Error::Error;
};

}  // namespace degcalc
