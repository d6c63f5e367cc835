#include "blowup/transforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "blowup/errors.hpp"
#include "blowup/inversion.hpp"

namespace blowup {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double require_converged(const QuadratureResult& q, const char* what) {
    if (!q.converged) throw ConvergenceError(std::string(what) + ": quadrature did not converge");
    return q.value;
}

// ∫_lo^hi 1/b, +∞ when 1/b has a non-integrable singularity at lo.
double potential_between(const ProblemSpec& p, double lo, double hi) {
    if (lo == hi) return 0.0;
    const FunctionSpec& inv_b = p.reciprocal_b();
    const auto at_lo = inv_b.antiderivative(lo);
    if (at_lo && std::isinf(*at_lo)) return kInf;
    return require_converged(integrate(inv_b, lo, hi, p.tol().proper), "potential");
}

QuadratureResult tail_of_reciprocal(const ProblemSpec& p, double lo) {
    const FunctionSpec& inv_b = p.reciprocal_b();
    const auto at_lo = inv_b.antiderivative(lo);
    if (at_lo && std::isinf(*at_lo)) return {kInf, 0.0, true, lo};
    const TailInfo exact = inv_b.tail(lo);
    if (exact.status == TailInfo::Status::exact && std::isfinite(exact.value)) return {exact.value, 0.0, true, lo};
    return integrate_improper(inv_b, lo, p.tol().improper);
}

double potential_to_infinity(const ProblemSpec& p, double lo) {
    return require_converged(tail_of_reciprocal(p, lo), "potential tail");
}

}  // namespace

ProblemSpec::ProblemSpec(double x0, FunctionSpec a, FunctionSpec b, FunctionSpec g, Tolerances tol)
    : x0_(x0), a_(std::move(a)), b_(std::move(b)), g_(std::move(g)), tol_(tol) {
    if (!(x0_ > 0.0) || !std::isfinite(x0_)) throw DomainError("ProblemSpec: x0 must be a positive real");
    a_.require_positive("intensity a");
    b_.require_positive("drift b");
    g_.require_nonnegative("noise g");
    if (a_.domain_lo() > 0.0) throw DomainError("ProblemSpec: intensity a must be defined on [0, ∞)");
    if (b_.domain_lo() > x0_) throw DomainError("ProblemSpec: drift b must be defined at x0");
    if (g_.domain_lo() > 0.0) throw DomainError("ProblemSpec: noise g must be defined on [0, ∞)");
    auto inv = b_.reciprocal();
    if (!inv) throw DomainError("ProblemSpec: 1/b is not in the function catalog");
    inv_b_ = *inv;
    if (!(tol_.proper > 0.0 && tol_.improper > 0.0 && tol_.inverse > 0.0))
        throw DomainError("ProblemSpec: tolerances must be positive");
}

void ProblemSpec::require_nondecreasing_drift(const char* result) const {
    if (!b_nondecreasing())
        throw PreconditionError(std::string(result) + " requires a non-decreasing drift b");
}

double intensity_integral(const ProblemSpec& p, double t) {
    if (!(t >= 0.0)) throw DomainError("intensity_integral: t must be >= 0, got " + fmt(t));
    return require_converged(integrate(p.a(), 0.0, t, p.tol().proper), "intensity_integral");
}

QuadratureResult intensity_total(const ProblemSpec& p) { return integrate_improper(p.a(), 0.0, p.tol().improper); }

double intensity_integral_inverse(const ProblemSpec& p, double y) {
    if (!(y >= 0.0)) throw DomainError("intensity_integral_inverse: y must be >= 0, got " + fmt(y));
    const QuadratureResult total = intensity_total(p);
    const double limit = require_converged(total, "intensity_total");
    if (y >= limit)
        throw OutOfRangeError("intensity_integral_inverse: y=" + fmt(y) + " >= A(inf)=" + fmt(limit), 0.0, limit);
    return invert_monotone([&p](double t) { return intensity_integral(p, t); }, y, {0.0, 1.0}, p.tol().inverse,
                           Direction::increasing);
}

double drift_potential(const ProblemSpec& p, double r, double x) {
    if (!(r >= 0.0 && r <= p.x0())) throw DomainError("drift_potential: need 0 <= r <= x0, got r=" + fmt(r));
    if (!(x >= p.x0() - r)) throw DomainError("drift_potential: x below x0 - r");
    return potential_between(p, p.x0() - r, x);
}

QuadratureResult drift_potential_limit(const ProblemSpec& p, double r) {
    if (!(r >= 0.0 && r <= p.x0())) throw DomainError("drift_potential_limit: need 0 <= r <= x0");
    return tail_of_reciprocal(p, p.x0() - r);
}

double drift_potential_inverse(const ProblemSpec& p, double r, double y) {
    if (!(y >= 0.0)) throw DomainError("drift_potential_inverse: y must be >= 0");
    const double limit = require_converged(drift_potential_limit(p, r), "drift_potential_limit");
    if (y >= limit)
        throw OutOfRangeError("drift_potential_inverse: y=" + fmt(y) + " >= B_r(inf)=" + fmt(limit), 0.0, limit);
    const double lo = p.x0() - r;
    return invert_monotone([&](double x) { return drift_potential(p, r, x); }, y, {lo, lo + 1.0}, p.tol().inverse,
                           Direction::increasing);
}

double shifted_potential(const ProblemSpec& p, double shift, double x) {
    if (!(shift >= -p.x0())) throw DomainError("shifted_potential: shift must be >= -x0, got " + fmt(shift));
    if (!(x >= p.x0() + shift)) throw DomainError("shifted_potential: x below x0 + shift");
    return potential_between(p, p.x0() + shift, x);
}

double shifted_potential_inverse_x(const ProblemSpec& p, double shift, double y) {
    if (!(y >= 0.0)) throw DomainError("shifted_potential_inverse_x: y must be >= 0");
    const double limit = escape_potential(p, shift);
    if (y >= limit)
        throw OutOfRangeError("shifted_potential_inverse_x: y=" + fmt(y) + " >= " + fmt(limit), 0.0, limit);
    const double lo = p.x0() + shift;
    return invert_monotone([&](double x) { return shifted_potential(p, shift, x); }, y, {lo, lo + 1.0},
                           p.tol().inverse, Direction::increasing);
}

double shifted_potential_inverse_shift(const ProblemSpec& p, double x, double y) {
    if (!(x >= p.x0())) throw DomainError("shifted_potential_inverse_shift: x must be >= x0");
    if (!(y >= 0.0)) throw DomainError("shifted_potential_inverse_shift: y must be >= 0");
    const double lo = -p.x0();
    double hi = x - p.x0();
    while (p.x0() + hi > x) hi = std::nextafter(hi, -kInf);
    if (y == 0.0) return hi;
    if (lo == hi) throw OutOfRangeError("shifted_potential_inverse_shift: degenerate shift interval", 0.0, 0.0);
    return invert_monotone([&](double r) { return shifted_potential(p, r, x); }, y, {lo, hi}, p.tol().inverse,
                           Direction::decreasing, hi);
}

double escape_potential(const ProblemSpec& p, double shift) {
    if (!(shift >= -p.x0())) throw DomainError("escape_potential: shift must be >= -x0, got " + fmt(shift));
    return potential_to_infinity(p, p.x0() + shift);
}

double escape_potential_inverse(const ProblemSpec& p, double y) {
    const QuadratureResult total = drift_potential_limit(p, 0.0);
    if (!total.converged || total.is_infinite())
        throw PreconditionError("escape_potential_inverse: B(inf) is not finite, so beta is identically infinite");
    if (!(y > 0.0)) throw DomainError("escape_potential_inverse: y must be > 0, got " + fmt(y));
    const double lo = -p.x0();
    return invert_monotone([&](double r) { return escape_potential(p, r); }, y, {lo, lo + 1.0}, p.tol().inverse,
                           Direction::decreasing);
}

}  // namespace blowup
