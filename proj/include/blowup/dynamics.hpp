#pragma once

#include <cstddef>

#include "blowup/osgood.hpp"
#include "blowup/trajectory.hpp"
#include "blowup/transforms.hpp"

namespace blowup {

struct SolveControls {
    double h0 = 1e-3;
    double tol = 1e-10;   ///< local error per step, mixed absolute/relative
    double y_cap = 1e10;  ///< blow-up candidate once Y reaches this level
    double t_max = 10.0;
    /// Also treat Y as blown up once ∫_Y^∞ ds/(a(t) b(s)) drops below this,
    /// or below 4096 ulp of t, whichever is larger; catches drifts that
    /// overflow or outrun the time resolution before y_cap.
    double tail_floor = 1e-13;
    std::size_t max_steps = 20'000'000;
    /// Multiplier on the accumulated time-error estimate that widens the bracket.
    double bracket_safety = 10.0;
};

/// Integrates dY/dt = a(t) b(Y + g(t)), Y_0 = x0, with a Dormand–Prince
/// 5(4) pair and PI step control. For a sampled noise path every step ends
/// on a grid point of the path, so the right-hand side is smooth within
/// each step. Stops at blow-up, at t_max, or when the step size underflows
/// (partial trajectory, StopReason::step_underflow).
Trajectory solve_noisy(const ProblemSpec& p, const SolveControls& controls);

/// B̄(y) = ∫_{x0}^{y} ds / b(s + g(Y⁻¹(s))), with Y⁻¹ the monotone cubic inverse of the trajectory.
double effective_potential(const ProblemSpec& p, const Trajectory& traj, double y);

/// B̄(∞): B̄ up to the last node plus the tail with g frozen at its final value.
double effective_potential_limit(const ProblemSpec& p, const Trajectory& traj);

/// Explosion time A⁻¹(B̄(∞)) computed along a blown-up trajectory.
/// Needs a non-decreasing b and B(∞) < A(∞).
ExplosionReport explosion_time_from_trajectory(const ProblemSpec& p, const Trajectory& traj);

/// ĝ(t) < b(x0) ∫_t^∞ a(s) ds, with ĝ the running supremum of g.
bool partial_converse_hypothesis(const ProblemSpec& p, double t);

}  // namespace blowup
