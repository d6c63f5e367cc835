#include "blowup/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "blowup/errors.hpp"

namespace blowup {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxSubintervals = 20000;
// Twice the per-panel roundoff term, so roundoff alone cannot block convergence.
constexpr double kRoundoffFloor = 100.0 * kEps;

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const RealFn& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw DomainError("integrand is not finite at x=" + std::to_string(x));
    return v;
}

Panel gauss_kronrod(const RealFn& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = checked(f, center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = checked(f, center - dx) + checked(f, center + dx);
        kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    const double error = std::fabs(kronrod - gauss) + 50.0 * kEps * std::fabs(kronrod);
    return {lo, hi, kronrod, error};
}

void check_interval(const FunctionSpec& f, double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
        throw DomainError("integrate: need lo <= hi, got [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (lo < f.domain_lo() || hi > f.domain_hi())
        throw DomainError("integrate: [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] outside the domain of " + std::string(f.kind_name()));
}

RealFn as_callable(const FunctionSpec& f) {
    return [&f](double s) { return f(s); };
}

}  // namespace

double kronrod15(const RealFn& f, double lo, double hi) { return gauss_kronrod(f, lo, hi).value; }

QuadratureResult integrate_adaptive(const RealFn& f, double lo, double hi, double tol,
                                    std::span<const double> breakpoints) {
    if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw DomainError("integrate: need lo <= hi");
    if (lo == hi) return {0.0, 0.0, true, hi};

    std::vector<double> cuts{lo};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> panels;
    double total = 0.0;
    double error = 0.0;
    double magnitude = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = gauss_kronrod(f, cuts[i], cuts[i + 1]);
        total += p.value;
        error += p.error;
        magnitude += std::fabs(p.value);
        panels.push(p);
    }
    // Absolute tolerance, floored at the roundoff level of the panel sums.
    auto target = [&] { return std::max(tol, kRoundoffFloor * magnitude); };
    const std::size_t budget = std::max(kMaxSubintervals, 4 * cuts.size());
    while (error > target() && panels.size() < budget) {
        Panel worst = panels.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) break;
        panels.pop();
        Panel left = gauss_kronrod(f, worst.lo, mid);
        Panel right = gauss_kronrod(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        magnitude += std::fabs(left.value) + std::fabs(right.value) - std::fabs(worst.value);
        panels.push(left);
        panels.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    magnitude = 0.0;
    while (!panels.empty()) {
        total += panels.top().value;
        error += panels.top().error;
        magnitude += std::fabs(panels.top().value);
        panels.pop();
    }
    return {total, error, error <= target(), hi};
}

QuadratureResult integrate(const FunctionSpec& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
    check_interval(f, lo, hi);
    if (lo == hi) return {0.0, 0.0, true, hi};
    if (f.has_antiderivative()) {
        const double upper = *f.antiderivative(hi);
        const double lower = *f.antiderivative(lo);
        const double value = upper - lower;
        if (!std::isfinite(value))
            throw DomainError("integrate: " + std::string(f.kind_name()) + " is not integrable on [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
        const double rounding = 4.0 * kEps * (std::fabs(upper) + std::fabs(lower));
        return {value, rounding, true, hi};
    }
    std::vector<double> breaks;
    if (const NoisePath* path = f.path()) {
        const std::size_t first = path->cell_of(lo) + 1;
        const std::size_t last = path->cell_of(hi);
        for (std::size_t k = first; k <= last; ++k) breaks.push_back(path->time_at(k));
    }
    return integrate_adaptive(as_callable(f), lo, hi, tol, breaks);
}

QuadratureResult integrate_improper(const FunctionSpec& f, double lo, double tol) {
    if (!(tol > 0.0)) throw DomainError("integrate_improper: tol must be positive");
    if (std::isnan(lo) || lo < f.domain_lo())
        throw DomainError("integrate_improper: lower limit outside the domain of " + std::string(f.kind_name()));
    if (f.domain_hi() < kInf)
        throw DomainError("integrate_improper: " + std::string(f.kind_name()) + " has a bounded domain");

    if (f.tail(lo).status == TailInfo::Status::divergent) return {kInf, 0.0, true, lo};

    double partial = 0.0;
    double error = 0.0;
    double previous = lo;
    double cutoff = lo;
    TailInfo tail{TailInfo::Status::unknown, 0.0};
    for (int k = 0; k <= kMaxCutoffDoublings; ++k) {
        cutoff = lo + std::ldexp(1.0, k);
        const QuadratureResult step = integrate(f, previous, cutoff, 0.25 * tol);
        if (!step.converged) return {partial + step.value, error + step.abs_error_estimate, false, cutoff};
        partial += step.value;
        error += step.abs_error_estimate;
        previous = cutoff;
        tail = f.tail(cutoff);
        if (tail.status == TailInfo::Status::exact && std::fabs(step.value) < tol && std::fabs(tail.value) < tol)
            return {partial + tail.value, error, true, cutoff};
    }
    switch (tail.status) {
        case TailInfo::Status::exact:
            // Catalog tails are exact, so a slowly decaying tail is still a finite answer.
            return {partial + tail.value, error, true, cutoff};
        case TailInfo::Status::divergent: return {kInf, 0.0, true, cutoff};
        case TailInfo::Status::unknown: break;
    }
    return {partial, error, false, cutoff};
}

QuadratureResult integrate_improper(const RealFn& f, double lo, double tol, const TailBound& tail) {
    if (!(tol > 0.0)) throw DomainError("integrate_improper: tol must be positive");
    double partial = 0.0;
    double error = 0.0;
    double previous = lo;
    double cutoff = lo;
    std::vector<double> increments;
    for (int k = 0; k <= kMaxCutoffDoublings; ++k) {
        cutoff = lo + std::ldexp(1.0, k);
        const QuadratureResult step = integrate_adaptive(f, previous, cutoff, 0.25 * tol);
        if (!step.converged) return {partial + step.value, error + step.abs_error_estimate, false, cutoff};
        partial += step.value;
        error += step.abs_error_estimate;
        previous = cutoff;
        increments.push_back(std::fabs(step.value));
        if (!std::isfinite(partial)) return {kInf, 0.0, true, cutoff};
        if (tail && std::fabs(step.value) < tol) {
            const std::optional<double> bound = tail(cutoff);
            if (bound && std::fabs(*bound) < tol) return {partial, error + std::fabs(*bound), true, cutoff};
        }
    }
    // Non-contracting increments over the final doublings mean the integral grows without bound.
    const std::size_t n = increments.size();
    bool contracting = false;
    for (std::size_t i = n - 3; i < n; ++i)
        if (increments[i] < 0.999 * increments[i - 1]) contracting = true;
    if (!contracting) return {kInf, 0.0, true, cutoff};
    return {partial, error, false, cutoff};
}

}  // namespace blowup
