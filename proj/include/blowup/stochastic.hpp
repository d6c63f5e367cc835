#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "blowup/dynamics.hpp"
#include "blowup/noise_path.hpp"
#include "blowup/transforms.hpp"

namespace blowup {

/// Reading of Φ in the probability bounds.
///   centered: Φ(x) = P(0 ≤ Z ≤ x), range [0, 0.5)
///   cdf:      Φ(x) = P(Z ≤ x),     range [0.5, 1)
enum class NormalConvention { centered, cdf };

std::string_view to_string(NormalConvention conv) noexcept;
NormalConvention parse_convention(std::string_view text);

/// Φ(x) for x ≥ 0 (x = +inf allowed).
double normal_probability(double x, NormalConvention conv);
/// Φ⁻¹(q), absolute error ≤ 1e-10; OutOfRangeError when q is outside the convention's range.
double normal_probability_inverse(double q, NormalConvention conv);

/// |W| on the grid k·dt, k = 0..⌈horizon/dt⌉, from N(0, dt) increments drawn by
/// inverse-CDF sampling from mt19937_64(seed). Bit-identical for equal inputs.
NoisePath sample_path(double horizon, double dt, std::uint64_t seed, double scale = 1.0);

/// Halves the grid of a σ·W path by Brownian-bridge midpoints drawn from
/// mt19937_64(seed); the coarse samples are kept.
NoisePath refine_path(const NoisePath& coarse, std::uint64_t seed, double scale = 1.0);

/// P(T_e ≤ t) ≤ 1 − Φ(β⁻¹(A(t)) / √T), for 0 ≤ t < T.
double explosion_probability_bound(const ProblemSpec& p, double t, double T, NormalConvention conv);

/// P(T_e ≤ t | T_r < T) ≤ [1 − Φ(r/√s)] / [1 − Φ(r/√T)], s = A⁻¹(B(B̃_r⁻¹(A(t)))).
/// Returns 1 when A(t) lies beyond the range of B̃_r.
double conditional_explosion_bound(const ProblemSpec& p, double t, double r, double T, NormalConvention conv);

/// P(Y reaches L by t) ≤ 1 − Φ(r_L(A(t)) / √T), r_L the shift with B̃_r(L) = A(t); needs L > x0.
/// Returns 1 when A(t) exceeds B̃_{−x0}(L).
double crossing_probability_bound(const ProblemSpec& p, double t, double level, double T, NormalConvention conv);

/// Closed forms for a(t) = a0 and b(s) = s^{1+α}.
struct PowerLawModel {
    double alpha;
    double a0;
    double x0;

    ProblemSpec problem() const;
    double explosion_time() const;  ///< (α a0 x0^α)^{−1}
    /// 1 − Φ(((α a0 t)^{−1/α} − x0)/√T)
    double escape_bound(double t, NormalConvention conv) const;
    /// 1 − Φ((x0/√t)((α a0 x0^α t)^{−1/(1+α)} − 1))
    double submultiplicative_bound(double t, NormalConvention conv) const;
    /// t with escape_bound(t) = 1 − q: (1/(α a0))[x0 + √T Φ⁻¹(q)]^{−α}
    double maintenance_time(double q, NormalConvention conv) const;
};

struct MonteCarloControls {
    std::size_t paths = 1000;
    double horizon = 1.0;
    double dt = 1e-3;
    std::uint64_t base_seed = 1;
    double noise_scale = 1.0;  ///< σ in g = σ|W|; 0 gives the noiseless problem
    /// Bridge refinements applied to each sampled path (each halves dt), so runs
    /// with different refinement counts share their coarse samples.
    unsigned refinements = 0;
    SolveControls solve;
    unsigned threads = 0;  ///< 0 picks the hardware concurrency
    /// Optional per-path extras.
    std::optional<double> crossing_level;  ///< record the first time Y reaches this level
    std::optional<double> hitting_level;   ///< record the first time |W| reaches this level
    bool path_bounds = false;              ///< record the path-wise deterministic lower bounds
    bool keep_trajectories = false;
};

struct PathOutcome {
    std::uint64_t seed = 0;
    bool censored = true;
    double explosion_time = 0.0;  ///< bracket midpoint, or horizon when censored
    double bracket_width = 0.0;
    StopReason stop = StopReason::reached_t_max;
    double noise_sup = 0.0;  ///< running max of |W| at min(T, horizon) when path_bounds is set
    std::optional<double> escape_lower;
    std::optional<double> submultiplicative_lower;
    std::optional<double> crossing_time;
    std::optional<double> hitting_time;
};

/// Empirical distribution of possibly censored explosion times.
class EmpiricalCdf {
public:
    EmpiricalCdf() = default;
    EmpiricalCdf(std::vector<double> uncensored, std::size_t total);

    std::size_t total() const noexcept { return total_; }
    std::size_t uncensored() const noexcept { return sorted_.size(); }
    /// Fraction of all paths with explosion time ≤ t.
    double operator()(double t) const;
    /// 95% Wilson score half-width at t.
    double wilson_half_width(double t) const;
    /// sqrt(F(1 − F)/n).
    double standard_error(double t) const;
    const std::vector<double>& sorted_times() const noexcept { return sorted_; }

private:
    std::vector<double> sorted_;
    std::size_t total_ = 0;
};

struct MonteCarloResult {
    std::vector<PathOutcome> outcomes;  ///< in seed order
    EmpiricalCdf cdf;
    std::vector<Trajectory> trajectories;  ///< only with keep_trajectories
    std::size_t censored = 0;
};

/// Seed of the k-th bridge refinement of the path with the given seed.
std::uint64_t refinement_seed(std::uint64_t path_seed, unsigned level) noexcept;

/// Explosion times of dY = a(t) b(Y + σ|W_t|) dt for seeds base_seed + i.
/// p.g() is replaced by each sampled path. Paths run in parallel; results are
/// stored by seed, so the output does not depend on the thread count.
MonteCarloResult simulate_explosion_times(const ProblemSpec& p, const MonteCarloControls& controls);

}  // namespace blowup
