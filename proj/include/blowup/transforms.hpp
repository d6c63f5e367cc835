#pragma once

#include "blowup/function_spec.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

struct Tolerances {
    double proper = kProperTolerance;
    double improper = kImproperTolerance;
    double inverse = 1e-10;
};

/// One instance of Y_t = x0 + ∫₀ᵗ a(s) b(Y_s + g(s)) ds.
///
/// a and b must be strictly positive catalog functions, g nonnegative
/// (possibly a sampled |W| path), x0 > 0.
class ProblemSpec {
public:
    ProblemSpec(double x0, FunctionSpec a, FunctionSpec b, FunctionSpec g = FunctionSpec::zero(),
                Tolerances tol = {});

    double x0() const noexcept { return x0_; }
    const FunctionSpec& a() const noexcept { return a_; }
    const FunctionSpec& b() const noexcept { return b_; }
    const FunctionSpec& g() const noexcept { return g_; }
    const FunctionSpec& reciprocal_b() const noexcept { return inv_b_; }
    const Tolerances& tol() const noexcept { return tol_; }

    bool b_nondecreasing() const noexcept { return b_.is_nondecreasing(); }
    bool noiseless() const noexcept { return g_.is_zero(); }

    ProblemSpec with_noise(FunctionSpec g) const { return {x0_, a_, b_, std::move(g), tol_}; }
    ProblemSpec with_initial_value(double x0) const { return {x0, a_, b_, g_, tol_}; }

    /// Throws PreconditionError naming `result` unless b is non-decreasing.
    void require_nondecreasing_drift(const char* result) const;

private:
    double x0_;
    FunctionSpec a_;
    FunctionSpec b_;
    FunctionSpec g_;
    FunctionSpec inv_b_;
    Tolerances tol_;
};

// Intensity integral A(t) = ∫₀ᵗ a(s) ds.
double intensity_integral(const ProblemSpec& p, double t);
/// A(∞); value is +∞ when ∫₀^∞ a diverges.
QuadratureResult intensity_total(const ProblemSpec& p);
/// A⁻¹(y) for 0 ≤ y < A(∞).
double intensity_integral_inverse(const ProblemSpec& p, double y);

// Drift potential B_r(x) = ∫_{x0−r}^x ds / b(s), 0 ≤ r ≤ x0. B = B_0.
double drift_potential(const ProblemSpec& p, double r, double x);
QuadratureResult drift_potential_limit(const ProblemSpec& p, double r);
double drift_potential_inverse(const ProblemSpec& p, double r, double y);

// Shifted potential B̃_r(x) = B_{−r}(x) = ∫_{x0+r}^x ds / b(s), r ≥ −x0.
double shifted_potential(const ProblemSpec& p, double shift, double x);
/// Inverse in x for a fixed shift.
double shifted_potential_inverse_x(const ProblemSpec& p, double shift, double y);
/// Inverse in the shift for fixed x ≥ x0; the map shift ↦ B̃_shift(x) is
/// decreasing on [−x0, x − x0].
double shifted_potential_inverse_shift(const ProblemSpec& p, double x, double y);

// Escape potential β(r) = ∫_{x0+r}^∞ ds / b(s), r ≥ −x0; +∞ when the tail diverges.
double escape_potential(const ProblemSpec& p, double shift);
/// β⁻¹(y) for y ∈ (0, β(−x0)]. Requires a finite B(∞).
double escape_potential_inverse(const ProblemSpec& p, double y);

}  // namespace blowup
