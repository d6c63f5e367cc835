#include "blowup/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxExpansions = 1100;
constexpr int kMaxIterations = 400;

[[noreturn]] void out_of_range(double target, double f_lo, double f_hi, Direction direction) {
    const double range_lo = direction == Direction::increasing ? f_lo : f_hi;
    const double range_hi = direction == Direction::increasing ? f_hi : f_lo;
    std::ostringstream msg;
    msg.precision(17);
    msg << "invert_monotone: target " << target << " outside attained range [" << range_lo << ", " << range_hi
        << "]";
    throw OutOfRangeError(msg.str(), range_lo, range_hi);
}

[[noreturn]] void non_monotone(double x) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "invert_monotone: monotonicity violated near x=" << x;
    throw NonMonotoneError(msg.str());
}

}  // namespace

double invert_monotone(const RealFn& f, double target, Bracket bracket, double tol, Direction direction,
                       double upper_limit) {
    if (!(tol > 0.0)) throw DomainError("invert_monotone: tol must be positive");
    if (std::isnan(target)) throw DomainError("invert_monotone: target is NaN");
    double lo = bracket.lo;
    double hi = std::min(bracket.hi, upper_limit);
    if (!(lo < hi)) throw DomainError("invert_monotone: empty bracket");

    const double sign = direction == Direction::increasing ? 1.0 : -1.0;
    // residual is increasing in x regardless of direction
    auto residual = [&](double x) {
        const double v = f(x);
        if (std::isnan(v)) throw DomainError("invert_monotone: f is NaN at x=" + std::to_string(x));
        return sign * (v - target);
    };
    const double slack = 1e-12 * (1.0 + std::fabs(target));

    double r_lo = residual(lo);
    if (std::fabs(r_lo) <= tol) return lo;
    if (r_lo > 0.0) out_of_range(target, f(lo), f(hi), direction);

    const double f_origin = sign * r_lo + target;
    double r_hi = residual(hi);
    double width = hi - lo;
    for (int i = 0; r_hi < 0.0; ++i) {
        if (std::fabs(r_hi) <= tol) return hi;
        if (hi >= upper_limit || i >= kMaxExpansions || !std::isfinite(hi))
            out_of_range(target, f_origin, sign * r_hi + target, direction);
        width *= 2.0;
        const double next = std::min(lo + width, upper_limit);
        const double r_next = residual(next);
        if (r_next < r_hi - slack * (1.0 + std::fabs(r_hi))) non_monotone(next);
        lo = hi;
        r_lo = r_hi;
        hi = next;
        r_hi = r_next;
    }
    if (std::fabs(r_hi) <= tol && r_hi == 0.0) return hi;

    double last_secant = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) return mid;

        const bool finite_ends = std::isfinite(r_lo) && std::isfinite(r_hi);
        const bool use_secant = iter % 2 == 1 && finite_ends;
        double x = mid;
        if (use_secant) {
            x = lo - r_lo * (hi - lo) / (r_hi - r_lo);
            if (!(x > lo && x < hi)) x = mid;
        }
        const double r = residual(x);
        const double band = slack * (1.0 + std::max(std::isfinite(r_lo) ? std::fabs(r_lo) : 0.0,
                                                    std::isfinite(r_hi) ? std::fabs(r_hi) : 0.0));
        if (r < r_lo - band || r > r_hi + band) non_monotone(x);

        if (r == 0.0) return x;
        if (use_secant && std::fabs(r) <= tol) {
            if (std::fabs(x - last_secant) <= tol * (1.0 + std::fabs(x))) return x;
            last_secant = x;
        }
        if (r < 0.0) {
            lo = x;
            r_lo = r;
        } else {
            hi = x;
            r_hi = r;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(lo)))
            return lo + 0.5 * (hi - lo);
    }
    if (std::min(std::fabs(r_lo), std::fabs(r_hi)) <= tol) return lo + 0.5 * (hi - lo);
    throw ConvergenceError("invert_monotone: no convergence within the iteration budget");
}

}  // namespace blowup
