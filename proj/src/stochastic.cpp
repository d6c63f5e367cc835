#include "blowup/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include <boost/math/special_functions/erf.hpp>

#include "blowup/bounds.hpp"
#include "blowup/errors.hpp"
#include "blowup/inversion.hpp"
#include "blowup/osgood.hpp"

namespace blowup {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kWilsonZ = 1.959963984540054;

// Uniform on (0, 1) from the top 53 bits; never 0 or 1.
double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
    return -kSqrt2 * boost::math::erfc_inv(2.0 * open_uniform(rng));
}

// 1 − Φ(x), computed from erfc so that small tails keep their digits.
double upper_tail(double x, NormalConvention conv) {
    if (!(x >= 0.0)) throw DomainError("normal_probability: x must be >= 0, got " + std::to_string(x));
    const double tail = std::isinf(x) ? 0.0 : 0.5 * std::erfc(x / kSqrt2);
    return conv == NormalConvention::centered ? 0.5 + tail : tail;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::string_view to_string(NormalConvention conv) noexcept {
    return conv == NormalConvention::centered ? "centered" : "cdf";
}

NormalConvention parse_convention(std::string_view text) {
    if (text == "centered") return NormalConvention::centered;
    if (text == "cdf") return NormalConvention::cdf;
    throw DomainError("unknown normal convention '" + std::string(text) + "' (expected centered or cdf)");
}

double normal_probability(double x, NormalConvention conv) {
    if (!(x >= 0.0)) throw DomainError("normal_probability: x must be >= 0, got " + std::to_string(x));
    if (std::isinf(x)) return conv == NormalConvention::centered ? 0.5 : 1.0;
    return conv == NormalConvention::centered ? 0.5 * std::erf(x / kSqrt2) : 0.5 * std::erfc(-x / kSqrt2);
}

double normal_probability_inverse(double q, NormalConvention conv) {
    const double lo = conv == NormalConvention::centered ? 0.0 : 0.5;
    const double hi = conv == NormalConvention::centered ? 0.5 : 1.0;
    if (!(q >= lo && q < hi))
        throw OutOfRangeError("normal_probability_inverse: q=" + std::to_string(q) + " outside [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + ") for the " +
                                  std::string(to_string(conv)) + " convention",
                              lo, hi);
    // Solve on the upper tail 1 − Φ_cdf(x) = hi − q, which is exact to form and keeps relative accuracy.
    const double tail = hi - q;
    if (tail == 0.5) return 0.0;
    return invert_monotone([](double x) { return 0.5 * std::erfc(x / kSqrt2); }, tail, {0.0, 1.0}, 1e-13 * tail,
                           Direction::decreasing);
}

NoisePath sample_path(double horizon, double dt, std::uint64_t seed, double scale) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("sample_path: horizon must be positive");
    if (!(dt > 0.0)) throw DomainError("sample_path: dt must be positive");
    if (dt > horizon) throw DomainError("sample_path: dt exceeds the horizon");
    if (!(scale >= 0.0)) throw DomainError("sample_path: scale must be >= 0");
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt * (1.0 - 1e-12)));
    std::mt19937_64 rng(seed);
    const double sd = scale * std::sqrt(dt);
    std::vector<double> walk(steps + 1);
    walk[0] = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) walk[k] = walk[k - 1] + sd * standard_normal(rng);
    return NoisePath::from_walk(dt, std::move(walk), seed);
}

NoisePath refine_path(const NoisePath& coarse, std::uint64_t seed, double scale) {
    if (!(scale >= 0.0)) throw DomainError("refine_path: scale must be >= 0");
    const auto walk = coarse.walk();
    std::mt19937_64 rng(seed);
    const double half_dt = 0.5 * coarse.dt();
    // Var(W_mid | W_left, W_right) = dt/4
    const double bridge_sd = scale * std::sqrt(0.5 * half_dt);
    std::vector<double> fine(2 * walk.size() - 1);
    for (std::size_t k = 0; k < walk.size(); ++k) {
        fine[2 * k] = walk[k];
        if (k + 1 < walk.size()) fine[2 * k + 1] = 0.5 * (walk[k] + walk[k + 1]) + bridge_sd * standard_normal(rng);
    }
    return NoisePath::from_walk(half_dt, std::move(fine), coarse.seed());
}

std::uint64_t refinement_seed(std::uint64_t path_seed, unsigned level) noexcept {
    std::seed_seq seq{static_cast<std::uint32_t>(path_seed), static_cast<std::uint32_t>(path_seed >> 32), level + 1u};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

double explosion_probability_bound(const ProblemSpec& p, double t, double T, NormalConvention conv) {
    if (!(T > 0.0)) throw DomainError("explosion_probability_bound: T must be positive");
    if (!(t >= 0.0 && t < T)) throw DomainError("explosion_probability_bound: need 0 <= t < T");
    if (t == 0.0) return clamp01(upper_tail(kInf, conv));
    const double shift = escape_potential_inverse(p, intensity_integral(p, t));
    return clamp01(upper_tail(std::max(shift, 0.0) / std::sqrt(T), conv));
}

double conditional_explosion_bound(const ProblemSpec& p, double t, double r, double T, NormalConvention conv) {
    if (!(T > 0.0)) throw DomainError("conditional_explosion_bound: T must be positive");
    if (!(t >= 0.0 && t <= T)) throw DomainError("conditional_explosion_bound: need 0 <= t <= T");
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("conditional_explosion_bound: r must be >= 0");
    if (r == 0.0) return 1.0;
    const double denominator = upper_tail(r / std::sqrt(T), conv);
    if (denominator < std::numeric_limits<double>::epsilon())
        throw DomainError("conditional_explosion_bound: P(T_r < T) is below machine precision");
    const double at = intensity_integral(p, t);
    if (at >= escape_potential(p, r)) return 1.0;
    const double level = shifted_potential_inverse_x(p, r, at);
    const double s = intensity_integral_inverse(p, drift_potential(p, 0.0, level));
    const double numerator = upper_tail(s > 0.0 ? r / std::sqrt(s) : kInf, conv);
    return clamp01(numerator / denominator);
}

double crossing_probability_bound(const ProblemSpec& p, double t, double level, double T, NormalConvention conv) {
    if (!(T > 0.0)) throw DomainError("crossing_probability_bound: T must be positive");
    if (!(t >= 0.0)) throw DomainError("crossing_probability_bound: t must be >= 0");
    if (!(level > p.x0())) throw DomainError("crossing_probability_bound: need L > x0");
    const double at = intensity_integral(p, t);
    if (at > shifted_potential(p, -p.x0(), level)) return 1.0;
    const double shift = shifted_potential_inverse_shift(p, level, at);
    // A negative shift means every path crosses by t.
    if (shift < 0.0) return 1.0;
    return clamp01(upper_tail(shift / std::sqrt(T), conv));
}

ProblemSpec PowerLawModel::problem() const {
    return ProblemSpec(x0, FunctionSpec::constant(a0), FunctionSpec::power(1.0, 1.0 + alpha));
}

double PowerLawModel::explosion_time() const { return 1.0 / (alpha * a0 * std::pow(x0, alpha)); }

double PowerLawModel::escape_bound(double t, NormalConvention conv) const {
    const double T = explosion_time();
    if (!(t >= 0.0 && t < T)) throw DomainError("PowerLawModel::escape_bound: need 0 <= t < T");
    if (t == 0.0) return upper_tail(kInf, conv);
    const double arg = (std::pow(alpha * a0 * t, -1.0 / alpha) - x0) / std::sqrt(T);
    return upper_tail(std::max(arg, 0.0), conv);
}

double PowerLawModel::submultiplicative_bound(double t, NormalConvention conv) const {
    const double T = explosion_time();
    if (!(t >= 0.0 && t < T)) throw DomainError("PowerLawModel::submultiplicative_bound: need 0 <= t < T");
    if (t == 0.0) return upper_tail(kInf, conv);
    const double arg = x0 / std::sqrt(t) * (std::pow(alpha * a0 * std::pow(x0, alpha) * t, -1.0 / (1.0 + alpha)) - 1.0);
    return upper_tail(std::max(arg, 0.0), conv);
}

double PowerLawModel::maintenance_time(double q, NormalConvention conv) const {
    const double T = explosion_time();
    const double z = normal_probability_inverse(q, conv);
    return std::pow(x0 + std::sqrt(T) * z, -alpha) / (alpha * a0);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> uncensored, std::size_t total) : sorted_(std::move(uncensored)), total_(total) {
    if (sorted_.size() > total_) throw DomainError("EmpiricalCdf: more uncensored times than paths");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double t) const {
    if (total_ == 0) return 0.0;
    const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin();
    return static_cast<double>(count) / static_cast<double>(total_);
}

double EmpiricalCdf::wilson_half_width(double t) const {
    if (total_ == 0) return 0.5;
    const double n = static_cast<double>(total_);
    const double f = (*this)(t);
    const double z2 = kWilsonZ * kWilsonZ;
    return kWilsonZ / (1.0 + z2 / n) * std::sqrt(f * (1.0 - f) / n + z2 / (4.0 * n * n));
}

double EmpiricalCdf::standard_error(double t) const {
    if (total_ == 0) return 0.0;
    const double f = (*this)(t);
    return std::sqrt(f * (1.0 - f) / static_cast<double>(total_));
}

MonteCarloResult simulate_explosion_times(const ProblemSpec& p, const MonteCarloControls& controls) {
    if (controls.paths == 0) throw DomainError("simulate_explosion_times: need at least one path");
    if (!(controls.horizon > 0.0)) throw DomainError("simulate_explosion_times: horizon must be positive");

    const ProblemSpec base = p.with_noise(FunctionSpec::zero());
    double noiseless_time = kInf;
    std::optional<double> constant;
    if (controls.path_bounds) {
        base.require_nondecreasing_drift("path-wise bounds");
        noiseless_time = osgood_test(base).time;
        constant = submultiplicative_constant(base.b()).constant;
    }

    MonteCarloResult result;
    result.outcomes.resize(controls.paths);
    if (controls.keep_trajectories) result.trajectories.resize(controls.paths);

    auto run_one = [&](std::size_t i) {
        PathOutcome out;
        out.seed = controls.base_seed + i;
        NoisePath sampled = sample_path(controls.horizon, controls.dt, out.seed, controls.noise_scale);
        for (unsigned level = 0; level < controls.refinements; ++level)
            sampled = refine_path(sampled, refinement_seed(out.seed, level), controls.noise_scale);
        auto path = std::make_shared<const NoisePath>(std::move(sampled));
        const ProblemSpec noisy = base.with_noise(FunctionSpec::brownian(path));
        SolveControls solve = controls.solve;
        solve.t_max = controls.horizon;
        Trajectory traj = solve_noisy(noisy, solve);
        out.stop = traj.stop;
        if (traj.blow_up) {
            out.censored = false;
            out.explosion_time = traj.blow_up->midpoint();
            out.bracket_width = traj.blow_up->width();
        } else {
            out.explosion_time = controls.horizon;
        }
        if (controls.path_bounds && std::isfinite(noiseless_time) && noiseless_time <= path->horizon()) {
            out.noise_sup = path->running_max(noiseless_time);
            try {
                out.escape_lower = std::min(intensity_integral_inverse(base, escape_potential(base, out.noise_sup)), noiseless_time);
            } catch (const OutOfRangeError&) {
                out.escape_lower = 0.0;
            }
            if (constant) out.submultiplicative_lower = submultiplicative_lower_bound(noisy, *constant, noiseless_time);
        }
        if (controls.crossing_level) out.crossing_time = traj.crossing_time(*controls.crossing_level);
        if (controls.hitting_level) out.hitting_time = path->hitting_time(*controls.hitting_level);
        result.outcomes[i] = out;
        if (controls.keep_trajectories) result.trajectories[i] = std::move(traj);
    };

    const unsigned hw = controls.threads ? controls.threads : std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, controls.paths));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < controls.paths; i = next++) {
            try {
                run_one(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = controls.paths;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> times;
    for (const PathOutcome& out : result.outcomes) {
        if (out.censored)
            ++result.censored;
        else
            times.push_back(out.explosion_time);
    }
    result.cdf = EmpiricalCdf(std::move(times), controls.paths);
    return result;
}

}  // namespace blowup
