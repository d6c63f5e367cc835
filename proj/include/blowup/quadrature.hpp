#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>

#include "blowup/function_spec.hpp"

namespace blowup {

using RealFn = std::function<double(double)>;

inline constexpr double kProperTolerance = 1e-9;
inline constexpr double kImproperTolerance = 1e-7;
inline constexpr int kMaxCutoffDoublings = 60;

struct QuadratureResult {
    double value = 0.0;  ///< +∞ when the divergence detector fired
    double abs_error_estimate = 0.0;
    bool converged = false;
    double cutoff_used = 0.0;  ///< last upper cutoff for improper integrals, hi otherwise

    bool is_infinite() const noexcept { return value == std::numeric_limits<double>::infinity(); }
};

/// ∫_lo^hi f. Uses the closed-form antiderivative when the kind has one,
/// adaptive Gauss–Kronrod (7/15) otherwise.
QuadratureResult integrate(const FunctionSpec& f, double lo, double hi, double tol = kProperTolerance);

/// ∫_lo^∞ f by cutoff doubling (lo+1, lo+2, lo+4, ...) with the kind's tail metadata.
QuadratureResult integrate_improper(const FunctionSpec& f, double lo, double tol = kImproperTolerance);

/// Globally adaptive Gauss–Kronrod on [lo, hi]. Interior breakpoints start
/// as subinterval boundaries, which matters for piecewise-smooth integrands.
/// converged=false when the subdivision budget runs out.
QuadratureResult integrate_adaptive(const RealFn& f, double lo, double hi, double tol,
                                    std::span<const double> breakpoints = {});

/// Upper bound on ∫_cutoff^∞ f, if one is known.
using TailBound = std::function<std::optional<double>(double cutoff)>;

/// Improper integral of an arbitrary callable. Without a tail bound a
/// contracting sequence of increments is ambiguous and reported as
/// converged=false.
QuadratureResult integrate_improper(const RealFn& f, double lo, double tol, const TailBound& tail = {});

/// 15-point Kronrod rule on [lo, hi] with no adaptivity; exact for polynomials of degree ≤ 22.
double kronrod15(const RealFn& f, double lo, double hi);

}  // namespace blowup
