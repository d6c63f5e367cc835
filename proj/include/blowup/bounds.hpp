#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blowup/function_spec.hpp"
#include "blowup/transforms.hpp"

namespace blowup {

enum class TighterLower { escape_bound, submultiplicative, tie, unavailable };

/// Two-sided deterministic bounds on the explosion time of the noisy problem.
struct BoundReport {
    double lower_escape = 0.0;  ///< A⁻¹(β(ĝ(T)))
    double upper = 0.0;         ///< T = A⁻¹(B(∞))
    std::optional<double> lower_submultiplicative;
    std::optional<double> submultiplicative_constant;
    TighterLower tighter = TighterLower::unavailable;
    double noise_sup = 0.0;  ///< ĝ(T)
    std::vector<std::string> notes;
};

struct SubmultiplicativeCheck {
    std::optional<double> constant;  ///< c with b(xy) ≤ c·b(x)b(y) for x, y ≥ 0
    std::string reason;              ///< why no constant was accepted
};

/// Analytic constant per kind, verified on a seeded randomized probe grid.
/// Kinds without a finite constant are rejected with a reason.
SubmultiplicativeCheck submultiplicative_constant(const FunctionSpec& b, std::uint64_t probe_seed = 7,
                                                  int probes = 4096);

/// Ã(t) = c ∫_0^t a(s) b(g(s)/x0 + 1) ds.
double noise_scaled_intensity(const ProblemSpec& p, double c, double t);

/// Ã tabulated at the grid points of a sampled noise path, so that repeated
/// evaluation and inversion cost one cell of quadrature each.
class PathScaledIntensity {
public:
    PathScaledIntensity(const ProblemSpec& p, double c);

    double operator()(double t) const;
    /// Smallest t with Ã(t) = y, or nullopt when y exceeds Ã(horizon).
    std::optional<double> inverse(double y) const;
    double horizon() const noexcept { return path_->horizon(); }

private:
    double within_cell(std::size_t k, double t) const;

    const ProblemSpec* problem_;
    const NoisePath* path_;
    double c_;
    std::vector<double> cumulative_;
};

/// Ã⁻¹(B(∞)), searched on [0, t_max]; 0 when Ã(t_max) < B(∞).
double submultiplicative_lower_bound(const ProblemSpec& p, double c, double t_max);

/// A⁻¹(β(ĝ(T))) ≤ T_e ≤ T, plus the sub-multiplicative lower bound when b admits a constant.
/// Needs a non-decreasing b and B(∞) < A(∞). For a sampled path g, T must not exceed its horizon.
BoundReport explosion_time_bounds(const ProblemSpec& p);

}  // namespace blowup
