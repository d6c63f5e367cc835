#include "blowup/trajectory.hpp"

#include <algorithm>

#include "blowup/errors.hpp"
#include "blowup/inversion.hpp"

namespace blowup {

MonotoneCubic Trajectory::interpolant() const { return MonotoneCubic(times, values, slopes); }

MonotoneCubic Trajectory::inverse_interpolant() const {
    std::vector<double> ys;
    std::vector<double> ts;
    std::vector<double> dts;
    ys.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!ys.empty() && !(values[i] > ys.back())) continue;
        ys.push_back(values[i]);
        ts.push_back(times[i]);
        dts.push_back(slopes[i] > 0.0 ? 1.0 / slopes[i] : 0.0);
    }
    if (ys.size() < 2) throw DomainError("Trajectory: not enough distinct values to invert");
    return MonotoneCubic(std::move(ys), std::move(ts), std::move(dts));
}

std::optional<double> Trajectory::crossing_time(double level) const {
    if (values.empty()) return std::nullopt;
    if (level <= values.front()) return times.front();
    const auto it = std::lower_bound(values.begin(), values.end(), level);
    if (it == values.end()) return std::nullopt;
    const auto k = static_cast<std::size_t>(it - values.begin());
    if (values[k] == level) return times[k];
    const MonotoneCubic local({times[k - 1], times[k]}, {values[k - 1], values[k]}, {slopes[k - 1], slopes[k]});
    return invert_monotone([&local](double t) { return local(t); }, level, {times[k - 1], times[k]},
                           1e-12 * (1.0 + level), Direction::increasing, times[k]);
}

}  // namespace blowup
