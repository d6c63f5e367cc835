#include "blowup/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "blowup/errors.hpp"
#include "blowup/inversion.hpp"
#include "blowup/osgood.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::optional<double> analytic_constant(const FunctionSpec& b) {
    return std::visit(overloaded{
                          [](const Constant& f) -> std::optional<double> { return 1.0 / f.k; },
                          [](const Power& f) -> std::optional<double> { return 1.0 / f.k; },
                          [](const ShiftedPower& f) -> std::optional<double> {
                              // xy + σ ≤ max(1, 1/σ)·(x + σ)(y + σ) with σ = −s0 > 0
                              if (f.s0 > 0.0 || f.p < 0.0) return std::nullopt;
                              if (f.s0 == 0.0) return 1.0 / f.k;
                              return std::pow(std::max(1.0, -1.0 / f.s0), f.p) / f.k;
                          },
                          [](const Exponential& f) -> std::optional<double> {
                              if (f.c == 0.0) return 1.0 / f.k;
                              return std::nullopt;
                          },
                          [](const AbsBrownianSample&) -> std::optional<double> { return std::nullopt; },
                      },
                      b.kind());
}

// sup of b(xy)/(b(x)b(y)) over seeded probes in [0, range]².
double probe_ratio(const FunctionSpec& b, double range, std::uint64_t seed, int probes) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
        const double x = range * u(rng);
        const double y = range * u(rng);
        double ratio;
        try {
            ratio = b(x * y) / (b(x) * b(y));
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
        if (!std::isfinite(ratio)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, ratio);
    }
    return worst;
}

}  // namespace

SubmultiplicativeCheck submultiplicative_constant(const FunctionSpec& b, std::uint64_t probe_seed, int probes) {
    if (b.is_sampled_path()) return {std::nullopt, "a sampled path is not a drift"};
    if (b.domain_lo() > 0.0) return {std::nullopt, "b is not defined on [0, inf)"};
    if (!(b.is_nondecreasing())) return {std::nullopt, "b is not non-decreasing"};

    const std::optional<double> c = analytic_constant(b);
    if (!c) {
        const double near = probe_ratio(b, 10.0, probe_seed, probes);
        const double far = probe_ratio(b, 100.0, probe_seed, probes);
        std::ostringstream why;
        why << "no finite constant: sup b(xy)/(b(x)b(y)) is " << near << " on [0,10]^2 and " << far
            << " on [0,100]^2";
        return {std::nullopt, why.str()};
    }

    std::mt19937_64 rng(probe_seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < probes; ++i) {
        const double x = i == 0 ? 0.0 : std::pow(10.0, u(rng));
        const double y = std::pow(10.0, u(rng));
        const double lhs = b(x * y);
        const double rhs = *c * b(x) * b(y);
        if (lhs > rhs * (1.0 + 1e-12)) {
            std::ostringstream why;
            why << "constant " << *c << " fails at x=" << x << ", y=" << y;
            return {std::nullopt, why.str()};
        }
    }
    return {c, ""};
}

double noise_scaled_intensity(const ProblemSpec& p, double c, double t) {
    if (!(t >= 0.0)) throw DomainError("noise_scaled_intensity: t must be >= 0");
    if (!(c > 0.0)) throw DomainError("noise_scaled_intensity: c must be positive");
    if (t == 0.0) return 0.0;
    if (p.g().is_sampled_path()) return PathScaledIntensity(p, c)(t);
    const double x0 = p.x0();
    auto integrand = [&](double s) { return p.a()(s) * p.b()(p.g()(s) / x0 + 1.0); };
    const QuadratureResult q = integrate_adaptive(integrand, 0.0, t, p.tol().proper);
    if (!q.converged) throw ConvergenceError("noise_scaled_intensity: quadrature did not converge");
    return c * q.value;
}

PathScaledIntensity::PathScaledIntensity(const ProblemSpec& p, double c) : problem_(&p), path_(p.g().path()), c_(c) {
    if (!path_) throw DomainError("PathScaledIntensity: noise is not a sampled path");
    if (!(c > 0.0)) throw DomainError("PathScaledIntensity: c must be positive");
    const std::size_t cells = path_->size() - 1;
    cumulative_.resize(path_->size());
    cumulative_[0] = 0.0;
    for (std::size_t k = 0; k < cells; ++k) cumulative_[k + 1] = cumulative_[k] + within_cell(k, path_->time_at(k + 1));
}

double PathScaledIntensity::within_cell(std::size_t k, double t) const {
    const double lo = path_->time_at(k);
    if (t <= lo) return 0.0;
    const ProblemSpec& p = *problem_;
    const double x0 = p.x0();
    // The path is linear on the cell, so the integrand is smooth there.
    auto integrand = [&](double s) { return p.a()(s) * p.b()(path_->value(s) / x0 + 1.0); };
    const double width = path_->horizon() > 0.0 ? (t - lo) / path_->horizon() : 1.0;
    const QuadratureResult q = integrate_adaptive(integrand, lo, t, p.tol().proper * std::max(width, 1e-6));
    if (!q.converged) throw ConvergenceError("PathScaledIntensity: quadrature did not converge");
    return c_ * q.value;
}

double PathScaledIntensity::operator()(double t) const {
    if (!(t >= 0.0) || t > path_->horizon()) throw DomainError("PathScaledIntensity: t outside [0, horizon]");
    const std::size_t k = path_->cell_of(t);
    return cumulative_[k] + within_cell(k, t);
}

std::optional<double> PathScaledIntensity::inverse(double y) const {
    if (!(y >= 0.0)) throw DomainError("PathScaledIntensity: y must be >= 0");
    if (y > cumulative_.back()) return std::nullopt;
    if (y == 0.0) return 0.0;
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), y);
    const std::size_t k = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    const double lo = path_->time_at(k);
    const double hi = std::min(path_->time_at(k + 1), path_->horizon());
    const double base = cumulative_[k];
    return invert_monotone([&](double t) { return base + within_cell(k, t); }, y, {lo, hi}, problem_->tol().inverse,
                           Direction::increasing, hi);
}

double submultiplicative_lower_bound(const ProblemSpec& p, double c, double t_max) {
    if (!(t_max > 0.0)) throw DomainError("submultiplicative_lower_bound: t_max must be positive");
    const QuadratureResult limit = drift_potential_limit(p, 0.0);
    if (!limit.converged) throw ConvergenceError("submultiplicative_lower_bound: B(inf) did not converge");
    if (limit.is_infinite()) return 0.0;
    if (p.g().is_sampled_path()) {
        const PathScaledIntensity table(p, c);
        if (t_max > table.horizon()) throw DomainError("submultiplicative_lower_bound: t_max beyond the noise path horizon");
        if (table(t_max) < limit.value) return 0.0;
        return table.inverse(limit.value).value_or(0.0);
    }
    if (noise_scaled_intensity(p, c, t_max) < limit.value) return 0.0;
    return invert_monotone([&](double t) { return noise_scaled_intensity(p, c, t); }, limit.value, {0.0, t_max},
                           p.tol().inverse, Direction::increasing, t_max);
}

BoundReport explosion_time_bounds(const ProblemSpec& p) {
    p.require_nondecreasing_drift("explosion_time_bounds");
    const ExplosionReport osgood = osgood_test(p, NoisePolicy::ignore_noise);
    if (!osgood.explodes)
        throw PreconditionError("explosion_time_bounds: needs B(inf) < A(inf), so that T is finite");

    BoundReport report;
    report.upper = osgood.time;
    if (report.upper > p.g().domain_hi()) throw DomainError("explosion_time_bounds: T beyond the noise path horizon");
    report.noise_sup = p.g().sup_on(0.0, report.upper);
    try {
        report.lower_escape = intensity_integral_inverse(p, escape_potential(p, report.noise_sup));
    } catch (const OutOfRangeError&) {
        report.lower_escape = 0.0;
        report.notes.push_back("beta(sup g) outside the range of A; lower bound set to 0");
    }
    report.lower_escape = std::min(report.lower_escape, report.upper);

    const SubmultiplicativeCheck check = submultiplicative_constant(p.b());
    if (!check.constant) {
        report.notes.push_back("sub-multiplicative bound unavailable: " + check.reason);
        return report;
    }
    report.submultiplicative_constant = check.constant;
    report.lower_submultiplicative = std::min(submultiplicative_lower_bound(p, *check.constant, report.upper), report.upper);
    const double gap = *report.lower_submultiplicative - report.lower_escape;
    const double resolution = 10.0 * p.tol().inverse * (1.0 + report.upper);
    report.tighter = std::fabs(gap) <= resolution ? TighterLower::tie
                     : gap > 0.0                  ? TighterLower::submultiplicative
                                                  : TighterLower::escape_bound;
    return report;
}

}  // namespace blowup
