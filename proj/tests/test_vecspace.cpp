#include "proxcert/prox.hpp"
#include "proxcert/vecspace.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace proxcert {
namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

SmoothOracle half_sq() {
    return {[](const Vector& x) { return 0.5 * x.squaredNorm(); },
            [](const Vector& x) { return Vector(x); }, 1.0};
}

TEST(Inner, Examples) {
    EXPECT_EQ(inner(vec({1, 2}), vec({3, 4})), 11.0);
    EXPECT_EQ(inner(vec({0, 0}), vec({5, -7})), 0.0);
    EXPECT_EQ(inner(vec({1, -1}), vec({1, 1})), 0.0);
}

TEST(Inner, DimensionMismatchThrows) {
    EXPECT_THROW(inner(vec({1, 2}), vec({1})), std::invalid_argument);
}

TEST(NormSq, Examples) {
    EXPECT_EQ(norm_sq(vec({3, 4})), 25.0);
    EXPECT_EQ(norm_sq(vec({0})), 0.0);
    EXPECT_EQ(norm_sq(vec({1, 1, 1, 1})), 4.0);
    EXPECT_EQ(norm(vec({3, 4})), 5.0);
}

TEST(ExtReal, RejectsNanAndMinusInfinity) {
    EXPECT_THROW(ExtReal(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    EXPECT_THROW(ExtReal(-std::numeric_limits<double>::infinity()), std::domain_error);
    EXPECT_TRUE(ExtReal::infinity().is_infinite());
    EXPECT_THROW(ExtReal::infinity().value(), std::domain_error);
    EXPECT_EQ((ExtReal(1.0) + ExtReal::infinity()).raw(), std::numeric_limits<double>::infinity());
}

TEST(EvalF, Examples) {
    CompositeObjective sq(1, half_sq(), make_prox_oracle(ProxZero{}));
    EXPECT_EQ(eval_f(sq, vec({2})).value(), 2.0);

    SmoothOracle zero{[](const Vector&) { return 0.0; },
                      [](const Vector& x) { return Vector(Vector::Zero(x.size())); }, std::nullopt};
    CompositeObjective box(1, zero, make_prox_oracle(ProxBox{vec({0}), vec({1})}));
    EXPECT_TRUE(eval_f(box, vec({2})).is_infinite());

    CompositeObjective l1(2, half_sq(), make_prox_oracle(ProxL1{1.0}));
    EXPECT_EQ(eval_f(l1, vec({1, -1})).value(), 3.0);
}

TEST(EvalF, IsSumOfParts) {
    CompositeObjective obj(3, half_sq(), make_prox_oracle(ProxL1{0.7}));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const Vector x = random_vector(3, 4.0, rng);
        EXPECT_EQ(eval_f(obj, x).value(), obj.phi().value(x) + obj.psi().value(x).value());
    }
}

TEST(EvalF, WrongDimensionThrows) {
    CompositeObjective obj(2, half_sq(), make_prox_oracle(ProxZero{}));
    EXPECT_THROW(eval_f(obj, vec({1})), std::invalid_argument);
}

TEST(OracleChecks, LipschitzHoldsForHalfSquare) {
    std::mt19937_64 rng(3);
    EXPECT_LE(lipschitz_violation(half_sq(), 4, 10.0, 200, rng), 0.0);
}

TEST(OracleChecks, LipschitzDetectsUnderestimate) {
    SmoothOracle phi = half_sq();
    phi.lipschitz = 0.5;
    std::mt19937_64 rng(3);
    EXPECT_GT(lipschitz_violation(phi, 4, 10.0, 200, rng), 0.0);
}

TEST(OracleChecks, FenchelYoungIsNonNegative) {
    const auto h = [](const Vector& x) { return ExtReal(0.5 * x.squaredNorm()); };
    const auto hs = [](const Vector& z) { return ExtReal(0.5 * z.squaredNorm()); };
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const Vector z = random_vector(2, 3.0, rng);
        const Vector x = random_vector(2, 3.0, rng);
        EXPECT_GE(fenchel_young_gap(h, hs, z, x), -1e-12);
    }
    // Equality when z is the gradient at x.
    EXPECT_NEAR(fenchel_young_gap(h, hs, vec({1, 2}), vec({1, 2})), 0.0, 1e-15);
}

}  // namespace
}  // namespace proxcert
