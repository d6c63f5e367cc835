#include <gtest/gtest.h>

#include <cmath>

#include "blowup/bounds.hpp"
#include "blowup/dynamics.hpp"
#include "blowup/errors.hpp"
#include "blowup/osgood.hpp"
#include "property.hpp"

using namespace blowup;

namespace {

ProblemSpec inverse_square(FunctionSpec g = FunctionSpec::zero()) {
    return ProblemSpec(1.0, FunctionSpec::constant(1.0), FunctionSpec::power(1.0, 2.0), std::move(g));
}

}  // namespace

TEST(EscapeBoundsTest, NoiselessBoundsCollapse) {
    const BoundReport r = explosion_time_bounds(inverse_square());
    EXPECT_NEAR(r.upper, 1.0, 1e-9);
    EXPECT_NEAR(r.lower_escape, r.upper, 1e-9);
    ASSERT_TRUE(r.lower_submultiplicative);
    EXPECT_NEAR(*r.lower_submultiplicative, 1.0, 1e-8);
}

TEST(EscapeBoundsTest, ConstantNoise) {
    const BoundReport r = explosion_time_bounds(inverse_square(FunctionSpec::constant(1.0)));
    EXPECT_NEAR(r.lower_escape, 0.5, 1e-8);
    EXPECT_NEAR(r.upper, 1.0, 1e-9);
    EXPECT_EQ(r.noise_sup, 1.0);
    ASSERT_TRUE(r.lower_submultiplicative);
    EXPECT_NEAR(*r.lower_submultiplicative, 0.25, 1e-8);
    EXPECT_EQ(*r.submultiplicative_constant, 1.0);
    EXPECT_EQ(r.tighter, TighterLower::escape_bound);
}

TEST(EscapeBoundsTest, PowerLawShape) {
    for (double alpha : {0.5, 1.0, 2.0}) {
        const double a0 = 1.3, x0 = 0.8, gamma = 0.6;
        const ProblemSpec p(x0, FunctionSpec::constant(a0), FunctionSpec::power(1.0, 1.0 + alpha),
                            FunctionSpec::constant(gamma));
        // β(γ) = (x0+γ)^{−α}/α and A⁻¹(y) = y/a0
        const double expected = std::pow(x0 + gamma, -alpha) / (alpha * a0);
        EXPECT_NEAR(explosion_time_bounds(p).lower_escape, expected, 1e-8);
    }
}

TEST(EscapeBoundsTest, Preconditions) {
    const ProblemSpec decreasing(1.0, FunctionSpec::constant(1.0), FunctionSpec::exponential(1.0, -1.0));
    EXPECT_THROW(explosion_time_bounds(decreasing), PreconditionError);
    const ProblemSpec linear(1.0, FunctionSpec::constant(1.0), FunctionSpec::power(1.0, 1.0));
    EXPECT_THROW(explosion_time_bounds(linear), PreconditionError);
}

TEST(EscapeBoundsTest, ExponentialDriftHasNoSubmultiplicativeBound) {
    const ProblemSpec p(1.0, FunctionSpec::constant(1.0), FunctionSpec::exponential(1.0, 1.0));
    const BoundReport r = explosion_time_bounds(p);
    EXPECT_FALSE(r.lower_submultiplicative);
    EXPECT_EQ(r.tighter, TighterLower::unavailable);
    EXPECT_FALSE(r.notes.empty());
}

TEST(SubmultiplicativeTest, PerKindConstants) {
    EXPECT_EQ(*submultiplicative_constant(FunctionSpec::power(1.0, 2.0)).constant, 1.0);
    EXPECT_EQ(*submultiplicative_constant(FunctionSpec::power(0.25, 3.0)).constant, 4.0);
    EXPECT_EQ(*submultiplicative_constant(FunctionSpec::constant(2.0)).constant, 0.5);
    EXPECT_NEAR(*submultiplicative_constant(FunctionSpec::shifted_power(1.0, 2.0, -0.5)).constant, 4.0, 1e-15);
    EXPECT_FALSE(submultiplicative_constant(FunctionSpec::exponential(1.0, 1.0)).constant);
    EXPECT_FALSE(submultiplicative_constant(FunctionSpec::exponential(1.0, -1.0)).constant);
    EXPECT_FALSE(submultiplicative_constant(FunctionSpec::shifted_power(1.0, 2.0, 0.5)).constant);
}

TEST(SubmultiplicativeTest, ConstantsHoldOnIndependentProbes) {
    blowup::testing::for_all(300, 61, [](blowup::testing::Gen& gen, int) {
        const double k = gen.uniform(0.1, 3.0), p = gen.uniform(0.0, 4.0);
        const FunctionSpec b = gen.coin() ? FunctionSpec::power(k, p) : FunctionSpec::shifted_power(k, p, -gen.uniform(0.01, 3.0));
        const auto c = submultiplicative_constant(b).constant;
        ASSERT_TRUE(c);
        for (int j = 0; j < 50; ++j) {
            const double x = gen.log_uniform(1e-4, 1e4), y = gen.log_uniform(1e-4, 1e4);
            ASSERT_LE(b(x * y), *c * b(x) * b(y) * (1.0 + 1e-12));
        }
    });
}

TEST(NoiseScaledIntensityTest, Examples) {
    EXPECT_NEAR(noise_scaled_intensity(inverse_square(FunctionSpec::constant(1.0)), 1.0, 0.3), 1.2, 1e-12);
    EXPECT_NEAR(noise_scaled_intensity(inverse_square(), 1.0, 0.3), 0.3, 1e-12);
    EXPECT_EQ(noise_scaled_intensity(inverse_square(), 1.0, 0.0), 0.0);
    EXPECT_NEAR(submultiplicative_lower_bound(inverse_square(FunctionSpec::constant(1.0)), 1.0, 1.0), 0.25, 1e-9);
    EXPECT_EQ(submultiplicative_lower_bound(inverse_square(FunctionSpec::constant(1.0)), 1.0, 0.1), 0.0);
}

TEST(NoiseScaledIntensityTest, PowerLawDisplay) {
    // Ã(t) = c·a0 ∫_0^t (g(s)/x0 + 1)^{1+α} ds with g = e^s and α = 1
    const ProblemSpec p(2.0, FunctionSpec::constant(1.5), FunctionSpec::power(1.0, 2.0), FunctionSpec::exponential(1.0, 1.0));
    const double t = 0.7;
    auto F = [](double s) { return std::exp(2.0 * s) / 8.0 + std::exp(s) + s; };
    EXPECT_NEAR(noise_scaled_intensity(p, 1.0, t), 1.5 * (F(t) - F(0.0)), 1e-9);
}

TEST(NoiseScaledIntensityTest, DominatesScaledIntensity) {
    blowup::testing::for_all(500, 62, [](blowup::testing::Gen& gen, int) {
        const double k = gen.uniform(0.2, 2.0);
        const ProblemSpec p(gen.uniform(0.3, 3.0), FunctionSpec::exponential(gen.uniform(0.2, 2.0), gen.uniform(-1.0, 1.0)),
                            FunctionSpec::power(k, gen.uniform(1.2, 3.0)),
                            FunctionSpec::exponential(gen.uniform(0.0, 2.0), gen.uniform(-1.0, 1.0)));
        const double c = *submultiplicative_constant(p.b()).constant;
        const double t = gen.uniform(0.0, 3.0);
        const double floor = c * p.b()(1.0) * intensity_integral(p, t);
        ASSERT_GE(noise_scaled_intensity(p, c, t), floor * (1.0 - 1e-12));
    });
}

TEST(BoundsPropertyTest, SandwichNumericBlowUp) {
    blowup::testing::for_all(150, 63, [](blowup::testing::Gen& gen, int) {
        const ProblemSpec p(gen.uniform(0.3, 3.0), gen.coin() ? FunctionSpec::constant(gen.uniform(0.3, 2.0))
                                                         : FunctionSpec::exponential(gen.uniform(0.5, 2.0), gen.uniform(-0.2, 0.5)),
                            FunctionSpec::power(gen.uniform(0.3, 2.0), gen.uniform(1.3, 3.0)),
                            gen.coin() ? FunctionSpec::constant(gen.uniform(0.0, 3.0))
                                       : FunctionSpec::exponential(gen.uniform(0.0, 1.0), gen.uniform(-1.0, 2.0)));
        if (!osgood_test(p, NoisePolicy::ignore_noise).explodes) return;
        const BoundReport r = explosion_time_bounds(p);
        ASSERT_LE(r.lower_escape, r.upper);
        ASSERT_TRUE(r.lower_submultiplicative);
        ASSERT_LE(*r.lower_submultiplicative, r.upper);
        SolveControls c;
        c.t_max = r.upper * 1.5 + 1.0;
        const Trajectory traj = solve_noisy(p, c);
        ASSERT_TRUE(traj.blow_up);
        const double tol = 1e-8;
        ASSERT_LE(r.lower_escape - tol, traj.blow_up->t_hi);
        ASSERT_LE(traj.blow_up->t_lo, r.upper + tol);
        ASSERT_LE(*r.lower_submultiplicative, traj.blow_up->t_hi + tol);
    });
}
