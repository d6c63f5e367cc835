#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "blowup/interpolation.hpp"

namespace blowup {

/// Numeric evidence of blow-up.
///
/// t_cross is the first accepted grid time with Y ≥ Y_cap (value y_cap_hit).
/// The certified bracket is [t_lo, t_hi] = [t_cross − m, t_cross + tail + m],
/// where tail = ∫_{y_cap_hit}^∞ ds / (a(t_cross) b(s)) and m is the
/// accumulated integration-error margin.
struct BlowUp {
    double t_lo;
    double t_hi;
    double t_cross;
    double y_cap_hit;
    double tail_correction;

    double midpoint() const noexcept { return 0.5 * (t_lo + t_hi); }
    double width() const noexcept { return t_hi - t_lo; }
};

enum class StopReason { reached_t_max, blow_up, step_underflow, step_budget };

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double max_local_error = 0.0;
    /// First-order estimate of the explosion-time error: Σ |local error| / (dY/dt).
    double time_error_estimate = 0.0;
};

/// Discretized solution of dY/dt = a(t) b(Y + g(t)), Y_0 = x0.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> slopes;        ///< dY/dt at each node
    std::vector<double> local_errors;  ///< error estimate of the step ending at each node (0 at t=0)
    std::optional<BlowUp> blow_up;
    StopReason stop = StopReason::reached_t_max;
    StepStats stats;

    double t_end() const { return times.back(); }
    double y_end() const { return values.back(); }

    /// Y(t) by monotone cubic Hermite interpolation through the nodes and slopes.
    MonotoneCubic interpolant() const;
    /// t(Y), the inverse path, with slopes 1/(dY/dt).
    MonotoneCubic inverse_interpolant() const;

    /// First time Y reaches `level`, or nullopt if the trajectory never does.
    std::optional<double> crossing_time(double level) const;
};

}  // namespace blowup
