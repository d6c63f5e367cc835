#pragma once

#include <limits>

#include "blowup/quadrature.hpp"

namespace blowup {

enum class Direction { increasing, decreasing };

struct Bracket {
    double lo;
    double hi;
};

/// Solves f(x) = target for a monotone f.
///
/// The bracket's upper end is pushed out by doubling its width (never past
/// upper_limit) until it encloses the target. The root is then refined by
/// alternating bisection and secant steps. Returns once |f(x) − target| ≤ tol
/// and successive secant iterates agree to tol·(1+|x|); if the bracket
/// collapses first, its midpoint is returned.
///
/// Throws OutOfRangeError when the target is outside the attained range and
/// NonMonotoneError when a sample contradicts the declared direction.
double invert_monotone(const RealFn& f, double target, Bracket bracket, double tol, Direction direction,
                       double upper_limit = std::numeric_limits<double>::infinity());

}  // namespace blowup
