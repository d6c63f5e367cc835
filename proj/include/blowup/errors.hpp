#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the declared domain of a function or operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A structural hypothesis of an operation does not hold (e.g. b not non-decreasing).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Quadrature, root finding or time stepping failed to reach the requested accuracy.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Target value lies outside the attained range of a monotone map.
class OutOfRangeError : public Error {
public:
    OutOfRangeError(const std::string& what, double range_lo, double range_hi)
        : Error(what), range_lo_(range_lo), range_hi_(range_hi) {}

    double range_lo() const noexcept { return range_lo_; }
    double range_hi() const noexcept { return range_hi_; }

private:
    double range_lo_;
    double range_hi_;
};

/// Three sampled points violate the declared monotonicity.
class NonMonotoneError : public Error {
public:
    using Error::Error;
};

}  // namespace blowup
