#include <gtest/gtest.h>

#include <cmath>

#include "blowup/dynamics.hpp"
#include "blowup/errors.hpp"
#include "blowup/osgood.hpp"
#include "property.hpp"

using namespace blowup;

namespace {

ProblemSpec inverse_square() { return ProblemSpec(1.0, FunctionSpec::constant(1.0), FunctionSpec::power(1.0, 2.0)); }

ProblemSpec random_explosive(blowup::testing::Gen& gen) {
    const double x0 = gen.uniform(0.3, 3.0);
    const FunctionSpec a = gen.coin() ? FunctionSpec::constant(gen.uniform(0.3, 2.0))
                                      : FunctionSpec::exponential(gen.uniform(0.3, 2.0), gen.uniform(-0.3, 0.5));
    return ProblemSpec(x0, a, FunctionSpec::power(gen.uniform(0.5, 2.0), gen.uniform(1.5, 3.0)));
}

}  // namespace

TEST(OsgoodTest, InverseSquareExplodesAtOne) {
    const ExplosionReport r = osgood_test(inverse_square());
    EXPECT_TRUE(r.explodes);
    EXPECT_NEAR(r.time, 1.0, 1e-9);
    EXPECT_EQ(r.method, ExplosionMethod::osgood_exact);
    EXPECT_NEAR(r.potential_limit, 1.0, 1e-12);
}

TEST(OsgoodTest, PowerLawExplosionTime) {
    const ProblemSpec p(2.0, FunctionSpec::constant(0.5), FunctionSpec::power(1.0, 3.0));
    EXPECT_NEAR(osgood_test(p).time, 0.25, 1e-9);
}

TEST(OsgoodTest, DecayingIntensityDoesNotExplode) {
    const ProblemSpec p(1.0, FunctionSpec::exponential(1.0, -1.0), FunctionSpec::power(0.25, 3.0));
    const ExplosionReport r = osgood_test(p);
    EXPECT_FALSE(r.explodes);
    EXPECT_TRUE(std::isinf(r.time));
    EXPECT_NEAR(r.potential_limit, 2.0, 1e-9);
    EXPECT_NEAR(r.intensity_limit, 1.0, 1e-7);
}

TEST(OsgoodTest, LinearDriftNeverExplodes) {
    const ProblemSpec p(1.0, FunctionSpec::constant(1.0), FunctionSpec::power(1.0, 1.0));
    const ExplosionReport r = osgood_test(p);
    EXPECT_FALSE(r.explodes);
    EXPECT_TRUE(std::isinf(r.potential_limit));
}

TEST(OsgoodTest, NoisePolicy) {
    const ProblemSpec noisy = inverse_square().with_noise(FunctionSpec::constant(1.0));
    EXPECT_THROW(osgood_test(noisy), PreconditionError);
    EXPECT_NEAR(osgood_test(noisy, NoisePolicy::ignore_noise).time, 1.0, 1e-9);
}

TEST(OsgoodTest, Dichotomy) {
    blowup::testing::for_all(2000, 41, [](blowup::testing::Gen& gen, int) {
        const double x0 = gen.uniform(0.2, 3.0);
        const FunctionSpec a = gen.coin() ? FunctionSpec::constant(gen.uniform(0.1, 3.0))
                                          : FunctionSpec::exponential(gen.uniform(0.1, 3.0), gen.uniform(-2.0, 1.0));
        const FunctionSpec b = gen.coin() ? FunctionSpec::power(gen.uniform(0.1, 3.0), gen.uniform(0.5, 4.0))
                                          : FunctionSpec::exponential(gen.uniform(0.1, 3.0), gen.uniform(-1.0, 2.0));
        const ExplosionReport r = osgood_test(ProblemSpec(x0, a, b));
        ASSERT_EQ(r.explodes, std::isfinite(r.time));
        ASSERT_EQ(r.explodes, r.potential_limit < r.intensity_limit);
    });
}

TEST(NoiselessSolutionTest, InverseSquareClosedForm) {
    const ProblemSpec p = inverse_square();
    EXPECT_EQ(noiseless_solution(p, 0.0), 1.0);
    EXPECT_NEAR(noiseless_solution(p, 0.5), 2.0, 1e-8);
    EXPECT_NEAR(noiseless_solution(p, 0.9), 10.0, 1e-7);
    EXPECT_THROW(noiseless_solution(p, 1.0), DomainError);
    EXPECT_THROW(noiseless_solution(p, -0.1), DomainError);
}

TEST(NoiselessSolutionTest, SaturatesNextToExplosion) {
    const NoiselessPoint pt = noiseless_point(inverse_square(), 1.0 - 1e-12);
    EXPECT_TRUE(pt.saturated);
    EXPECT_GT(pt.value, 1e9);
}

TEST(NoiselessSolutionTest, SatisfiesTheOde) {
    blowup::testing::for_all(500, 42, [](blowup::testing::Gen& gen, int) {
        const ProblemSpec p = random_explosive(gen);
        const double T = osgood_test(p).time;
        const double t = gen.uniform(0.05, 0.8) * std::min(T, 5.0);
        const double h = 1e-4 * std::min(T, 5.0);
        const double deriv = (noiseless_solution(p, t + h) - noiseless_solution(p, t - h)) / (2.0 * h);
        const double rhs = p.a()(t) * p.b()(noiseless_solution(p, t));
        // Central differences carry O(h²) truncation and O(eps/h) rounding.
        ASSERT_NEAR(deriv, rhs, 1e-5 * (1.0 + std::fabs(rhs)));
    });
}

TEST(NoiselessSolutionTest, PotentialMatchesIntensity) {
    blowup::testing::for_all(2000, 43, [](blowup::testing::Gen& gen, int) {
        const ProblemSpec p = random_explosive(gen);
        const double T = osgood_test(p).time;
        const double t = gen.uniform(0.0, 0.95) * std::min(T, 5.0);
        const double y = noiseless_solution(p, t);
        ASSERT_NEAR(drift_potential(p, 0.0, y), intensity_integral(p, t), 10.0 * p.tol().inverse);
    });
}

TEST(ComparisonTest, ReflexiveCase) {
    SolveControls c;
    c.t_max = 0.9;
    const Trajectory u = solve_noisy(inverse_square(), c);
    const ComparisonReport r = check_comparison(u, u, FunctionSpec::power(1.0, 2.0));
    EXPECT_TRUE(r.ok());
    EXPECT_GT(r.points_checked, 10u);
}

TEST(ComparisonTest, NoiseDominatesNoiseless) {
    SolveControls c;
    c.t_max = 2.0;
    const ProblemSpec p = inverse_square();
    const Trajectory u = solve_noisy(p, c);
    const Trajectory v = solve_noisy(p.with_noise(FunctionSpec::exponential(0.1, 1.0)), c);
    const ComparisonReport r = check_comparison(u, v, p.b());
    EXPECT_TRUE(r.ok());
    ASSERT_TRUE(u.blow_up && v.blow_up);
    EXPECT_LT(v.blow_up->t_hi, u.blow_up->t_lo);
}

TEST(ComparisonTest, DetectsViolationAndBadDrift) {
    SolveControls c;
    c.t_max = 0.5;
    const ProblemSpec p = inverse_square();
    const Trajectory u = solve_noisy(p.with_initial_value(1.5), c);
    const Trajectory v = solve_noisy(p, c);
    EXPECT_FALSE(check_comparison(u, v, p.b()).violations.empty());
    EXPECT_FALSE(check_comparison(v, v, FunctionSpec::exponential(1.0, -1.0)).precondition_ok);
}

TEST(ComparisonTest, PerturbedSolutionsDominate) {
    blowup::testing::for_all(150, 44, [](blowup::testing::Gen& gen, int) {
        const ProblemSpec u_problem = random_explosive(gen);
        const double x1 = u_problem.x0() + gen.uniform(0.0, 1.0);
        const FunctionSpec g = gen.coin() ? FunctionSpec::constant(gen.uniform(0.0, 2.0))
                                          : FunctionSpec::exponential(gen.uniform(0.0, 1.0), gen.uniform(-1.0, 1.0));
        SolveControls c;
        c.t_max = 3.0;
        c.tol = 1e-9;
        const Trajectory u = solve_noisy(u_problem, c);
        const Trajectory v = solve_noisy(u_problem.with_initial_value(x1).with_noise(g), c);
        const ComparisonReport r = check_comparison(u, v, u_problem.b());
        ASSERT_TRUE(r.ok()) << r.violations.size() << " violations";
    });
}
