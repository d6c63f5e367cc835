#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "blowup/errors.hpp"
#include "blowup/transforms.hpp"
#include "property.hpp"
#include "support/transform_properties.hpp"

using namespace blowup;

namespace {

ProblemSpec inverse_square(double x0 = 1.0) {
    return ProblemSpec(x0, FunctionSpec::constant(1.0), FunctionSpec::power(1.0, 2.0));
}

ProblemSpec paris(double alpha, double a0, double x0) {
    return ProblemSpec(x0, FunctionSpec::constant(a0), FunctionSpec::power(1.0, 1.0 + alpha));
}

}  // namespace

TEST(IntensityTest, ConstantAndExponentialIntensity) {
    const ProblemSpec two(1.0, FunctionSpec::constant(2.0), FunctionSpec::power(1.0, 2.0));
    EXPECT_NEAR(intensity_integral(two, 3.0), 6.0, 1e-12);
    EXPECT_EQ(intensity_integral(two, 0.0), 0.0);
    EXPECT_NEAR(intensity_integral_inverse(two, 1.0), 0.5, 1e-10);
    EXPECT_EQ(intensity_integral_inverse(two, 0.0), 0.0);
    EXPECT_TRUE(intensity_total(two).is_infinite());

    const ProblemSpec decaying(1.0, FunctionSpec::exponential(1.0, -1.0), FunctionSpec::power(0.25, 3.0));
    EXPECT_NEAR(intensity_total(decaying).value, 1.0, 1e-7);
    EXPECT_NEAR(intensity_integral_inverse(decaying, 0.5), std::log(2.0), 1e-9);
    EXPECT_THROW(intensity_integral_inverse(decaying, 1.0), OutOfRangeError);
    EXPECT_THROW(intensity_integral(decaying, -1.0), DomainError);
}

TEST(DriftPotentialTest, InverseSquareDrift) {
    const ProblemSpec p = inverse_square();
    EXPECT_NEAR(drift_potential(p, 0.0, 2.0), 0.5, 1e-14);
    EXPECT_EQ(drift_potential(p, 0.5, 0.5), 0.0);
    EXPECT_NEAR(drift_potential_limit(p, 0.0).value, 1.0, 1e-7);
    EXPECT_THROW(drift_potential(p, 0.0, 0.5), DomainError);
    EXPECT_THROW(drift_potential(p, 1.5, 2.0), DomainError);
    EXPECT_THROW(drift_potential_inverse(p, 0.0, 1.0), OutOfRangeError);
}

TEST(DriftPotentialTest, PowerLawClosedForm) {
    EXPECT_NEAR(drift_potential(paris(1.0, 1.0, 1.0), 0.0, 4.0), 0.75, 1e-14);
    blowup::testing::Gen gen(17);
    for (int i = 0; i < 500; ++i) {
        const double alpha = gen.uniform(0.2, 3.0);
        const double x0 = gen.uniform(0.3, 4.0);
        const double r = gen.uniform(0.0, 0.9) * x0;
        const double x = x0 + gen.uniform(0.0, 10.0);
        const ProblemSpec p = paris(alpha, 1.0, x0);
        const double expected = (std::pow(x0 - r, -alpha) - std::pow(x, -alpha)) / alpha;
        ASSERT_NEAR(drift_potential(p, r, x), expected, 1e-12 * (1.0 + expected));
    }
}

TEST(DriftPotentialTest, LimitsOnReferenceInstances) {
    const ProblemSpec cubic(1.0, FunctionSpec::exponential(1.0, -1.0), FunctionSpec::power(0.25, 3.0));
    EXPECT_NEAR(drift_potential_limit(cubic, 0.0).value, 2.0, 1e-7);
    const ProblemSpec linear(1.0, FunctionSpec::constant(1.0), FunctionSpec::constant(1.0));
    const QuadratureResult q = drift_potential_limit(linear, 0.0);
    EXPECT_TRUE(q.converged);
    EXPECT_TRUE(q.is_infinite());
}

TEST(ShiftedPotentialTest, WorkedExamples) {
    const ProblemSpec p = inverse_square();
    EXPECT_NEAR(shifted_potential(p, 1.0, 4.0), 0.25, 1e-14);
    EXPECT_EQ(shifted_potential(p, 0.0, 3.0), drift_potential(p, 0.0, 3.0));
    EXPECT_NEAR(shifted_potential_inverse_x(p, 1.0, 0.25), 4.0, 1e-9);
    EXPECT_NEAR(shifted_potential_inverse_shift(p, 3.0, shifted_potential(p, 0.0, 3.0)), 0.0, 1e-9);
    EXPECT_NEAR(shifted_potential_inverse_shift(p, 4.0, 0.25), 1.0, 1e-9);
    EXPECT_THROW(shifted_potential(p, -1.5, 2.0), DomainError);
    EXPECT_THROW(shifted_potential(p, 1.0, 1.5), DomainError);

    const ProblemSpec q = paris(2.0, 1.0, 1.5);
    const double r = 0.7, x = 5.0;
    EXPECT_NEAR(shifted_potential(q, r, x), (std::pow(1.5 + r, -2.0) - std::pow(x, -2.0)) / 2.0, 1e-14);
}

TEST(ShiftedPotentialTest, InverseInShiftReportsOutOfRange) {
    // b = (s+1)^2 keeps B̃^x(−x0) = ∫_0^x finite, so large targets are unattainable.
    const ProblemSpec p(1.0, FunctionSpec::constant(1.0), FunctionSpec::shifted_power(1.0, 2.0, -1.0));
    const double top = shifted_potential(p, -1.0, 3.0);
    EXPECT_NEAR(top, 0.75, 1e-14);
    EXPECT_THROW(shifted_potential_inverse_shift(p, 3.0, 0.8), OutOfRangeError);
    EXPECT_NEAR(shifted_potential_inverse_shift(p, 3.0, top), -1.0, 1e-8);
}

TEST(EscapePotentialTest, InverseSquareValues) {
    const ProblemSpec p = inverse_square();
    EXPECT_NEAR(escape_potential(p, 0.0), 1.0, 1e-7);
    EXPECT_NEAR(escape_potential(p, 1.0), 0.5, 1e-7);
    EXPECT_EQ(escape_potential(p, -1.0), std::numeric_limits<double>::infinity());
    EXPECT_NEAR(escape_potential_inverse(p, 0.5), 1.0, 1e-9);
    EXPECT_THROW(escape_potential_inverse(p, 0.0), DomainError);
}

TEST(EscapePotentialTest, EndpointRoundTrip) {
    const ProblemSpec p(1.0, FunctionSpec::constant(1.0), FunctionSpec::shifted_power(1.0, 2.0, -1.0));
    const double top = escape_potential(p, -1.0);
    EXPECT_NEAR(top, 1.0, 1e-7);
    EXPECT_NEAR(escape_potential_inverse(p, top), -1.0, 1e-9);
    EXPECT_THROW(escape_potential_inverse(p, 1.5), OutOfRangeError);
}

TEST(EscapePotentialTest, DivergentTailHasNoInverse) {
    const ProblemSpec linear(1.0, FunctionSpec::constant(1.0), FunctionSpec::constant(1.0));
    EXPECT_THROW(escape_potential_inverse(linear, 0.5), PreconditionError);
}

TEST(EscapePotentialTest, ReproducesPowerLawExplosionShape) {
    // β⁻¹(A(t)) = (α a0 t)^{−1/α} − x0
    for (double alpha : {0.5, 1.0, 2.0})
        for (double a0 : {0.5, 1.0, 2.0})
            for (double x0 : {0.5, 1.0, 2.0}) {
                const ProblemSpec p = paris(alpha, a0, x0);
                const double T = 1.0 / (alpha * a0 * std::pow(x0, alpha));
                for (double frac : {0.1, 0.5, 0.9}) {
                    const double t = frac * T;
                    const double expected = std::pow(alpha * a0 * t, -1.0 / alpha) - x0;
                    ASSERT_NEAR(escape_potential_inverse(p, intensity_integral(p, t)), expected,
                                1e-8 * (1.0 + expected));
                }
            }
}

TEST(ProblemSpecTest, ValidatesSignsAndInitialValue) {
    EXPECT_THROW(ProblemSpec(0.0, FunctionSpec::constant(1.0), FunctionSpec::power(1.0, 2.0)), DomainError);
    EXPECT_THROW(ProblemSpec(1.0, FunctionSpec::constant(-1.0), FunctionSpec::power(1.0, 2.0)), DomainError);
    EXPECT_THROW(ProblemSpec(1.0, FunctionSpec::constant(1.0), FunctionSpec::power(1.0, 2.0),
                             FunctionSpec::constant(-0.5)),
                 DomainError);
    EXPECT_TRUE(inverse_square().b_nondecreasing());
    const ProblemSpec decreasing(1.0, FunctionSpec::constant(1.0), FunctionSpec::exponential(1.0, -1.0));
    EXPECT_FALSE(decreasing.b_nondecreasing());
    EXPECT_THROW(decreasing.require_nondecreasing_drift("test"), PreconditionError);
}

TEST(TransformPropertyTest, MonotonicityCertificates) {
    const auto out = blowup::testing::transform_monotonicity_suite(10000, 101);
    EXPECT_TRUE(out.ok()) << out.failures << " failures, first: " << out.first_failure;
}

TEST(TransformPropertyTest, ShiftIdentityIsExact) {
    const auto out = blowup::testing::shift_identity_suite(10000, 202);
    EXPECT_TRUE(out.ok()) << out.failures << " failures, first: " << out.first_failure;
}

TEST(TransformPropertyTest, InversesRoundTrip) {
    const auto out = blowup::testing::inverse_round_trip_suite(10000, 303);
    EXPECT_TRUE(out.ok()) << out.failures << " failures, first: " << out.first_failure;
}
