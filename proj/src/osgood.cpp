#include "blowup/osgood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/errors.hpp"

namespace blowup {
namespace {

constexpr double kComparisonTolerance = 1e-6;

}  // namespace

ExplosionReport osgood_test(const ProblemSpec& p, NoisePolicy policy) {
    if (policy == NoisePolicy::require_noiseless && !p.noiseless())
        throw PreconditionError("osgood_test: problem has noise; request NoisePolicy::ignore_noise for the baseline");

    ExplosionReport report;
    report.method = ExplosionMethod::osgood_exact;
    report.tolerances = p.tol();

    const QuadratureResult b_total = drift_potential_limit(p, 0.0);
    const QuadratureResult a_total = intensity_total(p);
    if (!b_total.converged) throw ConvergenceError("osgood_test: B(inf) did not converge");
    if (!a_total.converged) throw ConvergenceError("osgood_test: A(inf) did not converge");
    report.potential_limit = b_total.value;
    report.intensity_limit = a_total.value;

    if (b_total.is_infinite()) {
        report.notes.emplace_back("B(inf) diverges: no finite-time explosion");
        return report;
    }
    if (!(b_total.value < a_total.value)) {
        report.notes.emplace_back("B(inf) >= A(inf): no finite-time explosion");
        return report;
    }
    report.explodes = true;
    report.time = intensity_integral_inverse(p, b_total.value);
    return report;
}

NoiselessPoint noiseless_point(const ProblemSpec& p, double t) {
    if (!(t >= 0.0)) throw DomainError("noiseless_solution: t must be >= 0");
    const ExplosionReport test = osgood_test(p, NoisePolicy::ignore_noise);
    if (t >= test.time) throw DomainError("noiseless_solution: t is at or past the explosion time");
    double level = intensity_integral(p, t);
    bool saturated = false;
    const double cap = test.potential_limit - p.tol().inverse;
    if (std::isfinite(test.potential_limit) && level > cap) {
        level = cap;
        saturated = true;
    }
    return {drift_potential_inverse(p, 0.0, level), saturated};
}

ComparisonReport check_comparison(const Trajectory& u, const Trajectory& v, const FunctionSpec& b) {
    ComparisonReport report;
    if (!b.is_nondecreasing()) {
        report.precondition_ok = false;
        return report;
    }
    if (u.times.size() < 2 || v.times.size() < 2) throw DomainError("check_comparison: trajectories too short");

    const double end = std::min(u.t_end(), v.t_end());
    const MonotoneCubic u_of = u.interpolant();
    const MonotoneCubic v_of = v.interpolant();

    std::vector<double> grid;
    grid.reserve(u.times.size() + v.times.size());
    for (double t : u.times)
        if (t <= end) grid.push_back(t);
    for (double t : v.times)
        if (t <= end) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    for (double t : grid) {
        const double uu = u_of(t);
        const double vv = v_of(t);
        if (vv < uu - kComparisonTolerance * (1.0 + std::fabs(uu))) report.violations.push_back({t, uu, vv});
    }
    report.points_checked = grid.size();

    if (u.blow_up) {
        if (v.blow_up)
            report.explosion_order_ok = v.blow_up->t_lo <= u.blow_up->t_hi;
        else
            report.explosion_order_ok = v.t_end() < u.blow_up->t_hi;
    }
    return report;
}

}  // namespace blowup
