#pragma once

#include <stdexcept>
#include <string>

namespace lgsim {

/// Base class for all failures this library reports by exception.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A refined quadrature grid disagreed with the requested one beyond tolerance.
class NonConvergedError : public Error {
public:
    NonConvergedError(const std::string& msg, double difference)
        : Error(msg), difference(difference) {}
    double difference;
};

/// MUB construction requested for a composite dimension.
class NotPrimeError : public Error {
public:
    using Error::Error;
};

/// Visibility failed the monotonicity pre-pass of the beta bisection.
class NonMonotoneError : public Error {
public:
    using Error::Error;
};

/// Target visibility not reachable within the beta search range.
class UnachievableError : public Error {
public:
    using Error::Error;
};

/// Crosstalk matrix with zero total signal.
class DegenerateMatrixError : public Error {
public:
    using Error::Error;
};

/// A tomography basis whose raw outcome probabilities all vanish.
class DegenerateBasisError : public Error {
public:
    using Error::Error;
};

/// Exhaustive subset enumeration would exceed the configured cap.
class TooManySubsetsError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration; carries the offending line when known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg, int line = -1)
        : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line(line) {}
    int line;
};

} // namespace lgsim
