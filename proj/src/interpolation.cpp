#include "blowup/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys, std::vector<double> slopes)
    : xs_(std::move(xs)), ys_(std::move(ys)), slopes_(std::move(slopes)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) throw DomainError("MonotoneCubic: need at least two (x, y) pairs");
    if (!slopes_.empty() && slopes_.size() != n) throw DomainError("MonotoneCubic: slope count mismatch");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(xs_[i] > xs_[i - 1])) throw DomainError("MonotoneCubic: knots must be strictly increasing");
        if (ys_[i] < ys_[i - 1]) throw DomainError("MonotoneCubic: values must be non-decreasing");
    }

    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);

    if (slopes_.empty()) {
        slopes_.resize(n);
        slopes_.front() = secant.front();
        slopes_.back() = secant.back();
        for (std::size_t i = 1; i + 1 < n; ++i)
            slopes_[i] = secant[i - 1] * secant[i] <= 0.0 ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
    }
    for (double& s : slopes_)
        if (!(s >= 0.0) || !std::isfinite(s)) s = 0.0;

    // Fritsch–Carlson: keep (α, β) inside the circle of radius 3.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (secant[i] == 0.0) {
            slopes_[i] = 0.0;
            slopes_[i + 1] = 0.0;
            continue;
        }
        const double a = slopes_[i] / secant[i];
        const double b = slopes_[i + 1] / secant[i];
        const double r2 = a * a + b * b;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            slopes_[i] = tau * a * secant[i];
            slopes_[i + 1] = tau * b * secant[i];
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    if (std::isnan(x) || x < xs_.front() || x > xs_.back())
        throw DomainError("MonotoneCubic: x=" + std::to_string(x) + " outside the knot range");
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (i + 1 >= xs_.size()) i = xs_.size() - 2;
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    const double y = h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] + h11 * h * slopes_[i + 1];
    return std::clamp(y, ys_[i], ys_[i + 1]);
}

}  // namespace blowup
