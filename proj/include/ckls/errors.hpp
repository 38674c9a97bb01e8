#pragma once

#include <stdexcept>
#include <string>

namespace ckls {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model or configuration parameter violates its constraint.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A simulated value overflowed or became non-finite.
class NonFinite : public Error {
public:
    using Error::Error;
};

/// A grid value of 0 was raised to a negative power; the requested
/// functional is undefined on this path.
class ZeroValueNegativePower : public Error {
public:
    using Error::Error;
};

/// The estimator's denominator collapsed (Cauchy-Schwarz equality case,
/// e.g. a constant path).
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

/// A quadratic-variation window increment was zero (flat window).
class ZeroQvIncrement : public Error {
public:
    using Error::Error;
};

/// The log-denominator of a ratio estimator is too close to zero; the
/// probe values are too close to 1 (or to each other) to identify beta.
class LogDenominatorNearZero : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance within
/// its subdivision budget.
class QuadratureNotConverged : public Error {
public:
    using Error::Error;
};

/// The computed information matrix is not positive definite; signals a
/// quadrature failure, since the true matrix always is.
class SingularSigma : public Error {
public:
    using Error::Error;
};

} // namespace ckls
