#include "blowup/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blowup/errors.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTimeResolution = 4096.0;

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller exponents (Hairer–Wanner, order 5).
constexpr double kAlpha = 0.7 / 5.0;
constexpr double kBeta = 0.4 / 5.0;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

class Rhs {
public:
    explicit Rhs(const ProblemSpec& p) : p_(p) {}

    // NaN signals an evaluation failure (overflow or domain), which rejects the step.
    double operator()(double t, double y) const {
        try {
            return p_.a()(t) * p_.b()(y + p_.g()(t));
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }

private:
    const ProblemSpec& p_;
};

void push_node(Trajectory& traj, double t, double y, double slope, double err) {
    traj.times.push_back(t);
    traj.values.push_back(y);
    traj.slopes.push_back(slope);
    traj.local_errors.push_back(err);
}

}  // namespace

Trajectory solve_noisy(const ProblemSpec& p, const SolveControls& c) {
    if (!(c.h0 > 0.0 && c.tol > 0.0 && c.y_cap > p.x0() && c.t_max > 0.0))
        throw DomainError("solve_noisy: need h0 > 0, tol > 0, y_cap > x0, t_max > 0");

    double t_max = c.t_max;
    const NoisePath* path = p.g().path();
    if (path) {
        if (t_max > path->horizon() * (1.0 + 1e-12))
            throw DomainError("solve_noisy: t_max exceeds the noise path horizon");
        t_max = std::min(t_max, path->horizon());
    }

    const Rhs f(p);
    Trajectory traj;
    double t = 0.0;
    double y = p.x0();
    double k1 = f(t, y);
    if (!std::isfinite(k1) || !(k1 > 0.0)) throw DomainError("solve_noisy: right-hand side invalid at t=0");
    push_node(traj, t, y, k1, 0.0);

    std::size_t next_break = 1;
    double h = std::min(c.h0, t_max);
    double err_prev = 1e-4;
    const FunctionSpec& inv_b = p.reciprocal_b();

    while (t < t_max) {
        if (traj.stats.accepted + traj.stats.rejected >= c.max_steps) {
            traj.stop = StopReason::step_budget;
            return traj;
        }
        double t_next_target = t_max;
        if (path) t_next_target = std::min(t_next_target, path->time_at(next_break));
        bool lands = false;
        if (h >= t_next_target - t) {
            h = t_next_target - t;
            lands = true;
        }
        if (h <= 16.0 * kEps * std::max(1.0, std::fabs(t))) {
            traj.stop = StopReason::step_underflow;
            return traj;
        }

        const double k2 = f(t + c2 * h, y + h * a21 * k1);
        const double k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const double k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double t_new = lands ? t_next_target : t + h;
        const double k6 = f(t_new, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const double k7 = f(t_new, y_new);
        const double err = std::fabs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));

        const double scale = c.tol * (1.0 + std::max(std::fabs(y), std::fabs(y_new)));
        const double err_norm = err / scale;
        const bool finite = std::isfinite(y_new) && std::isfinite(k7) && std::isfinite(err) && y_new > y;

        if (!finite || err_norm > 1.0) {
            ++traj.stats.rejected;
            const double shrink = finite ? std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2)) : kMinFactor;
            h *= shrink;
            continue;
        }

        ++traj.stats.accepted;
        traj.stats.max_local_error = std::max(traj.stats.max_local_error, err);
        traj.stats.time_error_estimate += err / k7;
        t = t_new;
        y = y_new;
        k1 = k7;
        push_node(traj, t, y, k1, err);
        if (path && lands && t == path->time_at(next_break)) ++next_break;

        const double e = std::max(err_norm, 1e-4);
        double factor = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev, kBeta);
        factor = std::clamp(factor, kMinFactor, kMaxFactor);
        err_prev = e;
        h *= factor;

        bool capped = y >= c.y_cap;
        const double a_now = p.a()(t);
        if (!capped) {
            const TailInfo tail = inv_b.tail(y);
            const double floor = std::max(c.tail_floor, kTimeResolution * kEps * std::max(1.0, t));
            capped = tail.status == TailInfo::Status::exact && tail.value / a_now <= floor;
        }
        if (capped) {
            const QuadratureResult tail = integrate_improper(inv_b, y, kImproperTolerance * 1e-6);
            const double correction = tail.converged && !tail.is_infinite() ? tail.value / a_now : kInf;
            const double margin = c.bracket_safety * traj.stats.time_error_estimate + 4.0 * kEps * std::max(1.0, t);
            BlowUp bu;
            bu.t_cross = t;
            bu.y_cap_hit = y;
            bu.tail_correction = correction;
            bu.t_lo = t - margin;
            bu.t_hi = std::isfinite(correction) ? t + correction + margin : std::max(t_max, t + margin);
            traj.blow_up = bu;
            traj.stop = StopReason::blow_up;
            return traj;
        }
    }
    traj.stop = StopReason::reached_t_max;
    return traj;
}

double effective_potential(const ProblemSpec& p, const Trajectory& traj, double y) {
    if (!(y >= p.x0())) throw DomainError("effective_potential: y must be >= x0");
    if (y > traj.y_end()) throw DomainError("effective_potential: y beyond the attained trajectory range");
    if (y == p.x0()) return 0.0;

    const MonotoneCubic time_of = traj.inverse_interpolant();
    const RealFn integrand = [&](double s) { return 1.0 / p.b()(s + p.g()(time_of(s))); };

    // Integrate segment by segment so each piece sees a smooth integrand.
    std::vector<double> breaks;
    for (double v : time_of.knots())
        if (v > p.x0() && v < y) breaks.push_back(v);
    const QuadratureResult q = integrate_adaptive(integrand, p.x0(), y, p.tol().proper, breaks);
    if (!q.converged) throw ConvergenceError("effective_potential: quadrature did not converge");
    return q.value;
}

double effective_potential_limit(const ProblemSpec& p, const Trajectory& traj) {
    if (!traj.blow_up) throw ConvergenceError("effective_potential_limit: trajectory did not blow up");
    const double body = effective_potential(p, traj, traj.y_end());
    const double g_end = p.g()(traj.t_end());
    const auto frozen = p.b().shifted(g_end);
    if (!frozen) throw DomainError("effective_potential_limit: b(s + g) has no catalog form");
    const auto inv = frozen->reciprocal();
    if (!inv) throw DomainError("effective_potential_limit: 1/b(s + g) has no catalog form");
    const QuadratureResult tail = integrate_improper(*inv, traj.y_end(), p.tol().improper);
    if (!tail.converged) throw ConvergenceError("effective_potential_limit: tail did not converge");
    return body + tail.value;
}

ExplosionReport explosion_time_from_trajectory(const ProblemSpec& p, const Trajectory& traj) {
    p.require_nondecreasing_drift("explosion_time_from_trajectory");
    const ExplosionReport baseline = osgood_test(p, NoisePolicy::ignore_noise);
    if (!baseline.explodes)
        throw PreconditionError("explosion_time_from_trajectory: hypothesis B(inf) < A(inf) does not hold");
    if (!traj.blow_up)
        throw ConvergenceError(
            "explosion_time_from_trajectory: B(inf) < A(inf) but the trajectory reached t_max without blowing up");

    const double limit = effective_potential_limit(p, traj);
    ExplosionReport report;
    report.method = ExplosionMethod::bbar_identity;
    report.tolerances = p.tol();
    report.potential_limit = baseline.potential_limit;
    report.intensity_limit = baseline.intensity_limit;
    report.explodes = true;
    report.time = intensity_integral_inverse(p, limit);
    report.notes.push_back("effective potential limit " + std::to_string(limit));
    return report;
}

bool partial_converse_hypothesis(const ProblemSpec& p, double t) {
    if (!(t >= 0.0)) throw DomainError("partial_converse_hypothesis: t must be >= 0");
    const double noise_sup = p.g().sup_on(0.0, t);
    const QuadratureResult remaining = integrate_improper(p.a(), t, p.tol().improper);
    if (!remaining.converged) throw ConvergenceError("partial_converse_hypothesis: tail of a did not converge");
    if (remaining.is_infinite()) return true;
    return noise_sup < p.b()(p.x0()) * remaining.value;
}

}  // namespace blowup
