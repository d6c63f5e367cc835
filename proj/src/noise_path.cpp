#include "blowup/noise_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

NoisePath::NoisePath(double dt, std::vector<double> walk, std::vector<double> samples,
                     std::uint64_t seed)
    : dt_(dt), walk_(std::move(walk)), samples_(std::move(samples)), seed_(seed) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw DomainError("NoisePath: dt must be positive");
    if (samples_.size() < 2) throw DomainError("NoisePath: need at least two samples");
    if (samples_.front() != 0.0) throw DomainError("NoisePath: samples[0] must be 0");
    prefix_max_.resize(samples_.size());
    double m = 0.0;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        const double s = samples_[k];
        if (!(s >= 0.0) || !std::isfinite(s))
            throw DomainError("NoisePath: sample " + std::to_string(k) + " is negative or non-finite");
        m = std::max(m, s);
        prefix_max_[k] = m;
    }
}

NoisePath NoisePath::from_walk(double dt, std::vector<double> walk, std::uint64_t seed) {
    if (walk.empty() || walk.front() != 0.0) throw DomainError("NoisePath: walk must start at 0");
    std::vector<double> samples(walk.size());
    std::transform(walk.begin(), walk.end(), samples.begin(), [](double w) { return std::fabs(w); });
    return NoisePath(dt, std::move(walk), std::move(samples), seed);
}

NoisePath NoisePath::from_samples(double dt, std::vector<double> samples, std::uint64_t seed) {
    std::vector<double> walk = samples;
    return NoisePath(dt, std::move(walk), std::move(samples), seed);
}

std::size_t NoisePath::cell_of(double t) const {
    if (!(t >= 0.0) || t > horizon())
        throw DomainError("NoisePath: t=" + std::to_string(t) + " outside [0, horizon]");
    const auto last = samples_.size() - 2;
    const auto k = static_cast<std::size_t>(std::floor(t / dt_));
    return std::min(k, last);
}

double NoisePath::value(double t) const {
    const std::size_t k = cell_of(t);
    const double frac = (t - time_at(k)) / dt_;
    return samples_[k] + (samples_[k + 1] - samples_[k]) * frac;
}

double NoisePath::running_max(double t) const {
    const std::size_t k = cell_of(t);
    if (t >= time_at(k + 1)) return prefix_max_[k + 1];
    return std::max(prefix_max_[k], value(t));
}

std::optional<double> NoisePath::hitting_time(double r) const {
    if (std::isnan(r)) throw DomainError("NoisePath: hitting level is NaN");
    if (r <= samples_.front()) return 0.0;
    const auto it = std::lower_bound(prefix_max_.begin(), prefix_max_.end(), r);
    if (it == prefix_max_.end()) return std::nullopt;
    const auto k = static_cast<std::size_t>(it - prefix_max_.begin());
    // samples_[k-1] < r <= samples_[k]; the crossing lies in (t_{k-1}, t_k].
    const double lo = samples_[k - 1];
    const double hi = samples_[k];
    const double t_prev = time_at(k - 1);
    const double t_next = time_at(k);
    double t = t_prev + dt_ * (r - lo) / (hi - lo);
    t = std::min(t, t_next);
    t = std::max(t, std::nextafter(t_prev, std::numeric_limits<double>::infinity()));
    return t;
}

}  // namespace blowup
