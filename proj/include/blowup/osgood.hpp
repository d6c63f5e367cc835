#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blowup/function_spec.hpp"
#include "blowup/trajectory.hpp"
#include "blowup/transforms.hpp"

namespace blowup {

enum class ExplosionMethod { osgood_exact, numeric_blowup, epa_bounds, submult_bound, bbar_identity };

struct Interval {
    double lo;
    double hi;
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Verdict on finite-time explosion and, when it happens, the explosion time.
struct ExplosionReport {
    bool explodes = false;
    double time = std::numeric_limits<double>::infinity();
    std::optional<Interval> bracket;
    ExplosionMethod method = ExplosionMethod::osgood_exact;
    Tolerances tolerances;
    double potential_limit = 0.0;  ///< B(∞)
    double intensity_limit = 0.0;  ///< A(∞)
    std::vector<std::string> notes;
};

enum class NoisePolicy { require_noiseless, ignore_noise };

/// Osgood test with time-dependent intensity: the noiseless problem explodes
/// iff B(∞) < A(∞), and then at A⁻¹(B(∞)).
ExplosionReport osgood_test(const ProblemSpec& p, NoisePolicy policy = NoisePolicy::require_noiseless);

struct NoiselessPoint {
    double value;
    bool saturated;  ///< A(t) was within tol of B(∞) and got capped
};

/// y(t) = B⁻¹(A(t)) for 0 ≤ t < T, ignoring g.
NoiselessPoint noiseless_point(const ProblemSpec& p, double t);
inline double noiseless_solution(const ProblemSpec& p, double t) { return noiseless_point(p, t).value; }

struct ComparisonViolation {
    double t;
    double u;
    double v;
};

struct ComparisonReport {
    bool precondition_ok = true;
    std::vector<ComparisonViolation> violations;
    bool explosion_order_ok = true;  ///< explosion time of v does not exceed that of u
    std::size_t points_checked = 0;

    bool ok() const noexcept { return precondition_ok && violations.empty() && explosion_order_ok; }
};

/// Checks v ≥ u on the union of both grids (each resampled by monotone
/// interpolation), ignoring differences below 1e-6·(1+|u|), and that v does
/// not outlive u's blow-up. u solves the equality with x0; v the inequality
/// with x1 ≥ x0; both share the non-decreasing drift b.
ComparisonReport check_comparison(const Trajectory& u, const Trajectory& v, const FunctionSpec& b);

}  // namespace blowup
