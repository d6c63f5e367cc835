#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace blowup {

/// Discretized sample of |W| on a uniform grid t_k = k·dt.
///
/// Between grid points the path is the linear interpolant of the stored
/// samples. The prefix maxima are computed once at construction, so
/// running-maximum and hitting-time queries are exact for that interpolant.
class NoisePath {
public:
    /// Builds |W| from a signed walk W with W[0] = 0.
    static NoisePath from_walk(double dt, std::vector<double> walk, std::uint64_t seed);

    /// Builds a path directly from nonnegative samples (samples[0] must be 0).
    static NoisePath from_samples(double dt, std::vector<double> samples, std::uint64_t seed = 0);

    double dt() const noexcept { return dt_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double horizon() const noexcept { return dt_ * static_cast<double>(samples_.size() - 1); }
    double time_at(std::size_t k) const noexcept { return dt_ * static_cast<double>(k); }

    std::span<const double> samples() const noexcept { return samples_; }
    std::span<const double> walk() const noexcept { return walk_; }
    std::span<const double> prefix_max() const noexcept { return prefix_max_; }

    /// Linear interpolation of |W| at t ∈ [0, horizon].
    double value(double t) const;

    /// sup_{s ≤ t} |W_s| for the interpolated path.
    double running_max(double t) const;

    /// First time the interpolated path reaches level r, or nullopt if it never does.
    std::optional<double> hitting_time(double r) const;

    /// Index of the cell [t_k, t_{k+1}] containing t (the last cell for t = horizon).
    std::size_t cell_of(double t) const;

private:
    NoisePath(double dt, std::vector<double> walk, std::vector<double> samples, std::uint64_t seed);

    double dt_;
    std::vector<double> walk_;
    std::vector<double> samples_;
    std::vector<double> prefix_max_;
    std::uint64_t seed_;
};

}  // namespace blowup
