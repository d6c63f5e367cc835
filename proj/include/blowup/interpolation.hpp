#pragma once

#include <span>
#include <vector>

namespace blowup {

/// Monotone piecewise-cubic Hermite interpolant of non-decreasing data.
///
/// Slopes are the supplied ones when given (e.g. exact derivatives from an
/// ODE stepper), otherwise three-point estimates; either way they pass
/// through the Fritsch–Carlson limiter, so the interpolant never leaves the
/// range of its neighbouring knots.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys, std::vector<double> slopes = {});

    double operator()(double x) const;

    double x_min() const noexcept { return xs_.front(); }
    double x_max() const noexcept { return xs_.back(); }
    std::span<const double> knots() const noexcept { return xs_; }
    std::span<const double> values() const noexcept { return ys_; }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> slopes_;
};

}  // namespace blowup
