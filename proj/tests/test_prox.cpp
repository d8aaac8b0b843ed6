#include "proxcert/prox.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace proxcert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

void expect_vec_near(const Vector& a, const Vector& b, double tol) {
    ASSERT_EQ(a.size(), b.size());
    for (Index i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "component " << i;
}

TEST(ProxL1, Examples) {
    expect_vec_near(prox_l1(1, 1, vec({3})), vec({2}), 0);
    expect_vec_near(prox_l1(1, 1, vec({0})), vec({0}), 0);
    expect_vec_near(prox_l1(2, 0.5, vec({-3, 0.5})), vec({-2, 0}), 0);
}

TEST(ProjectBox, Examples) {
    expect_vec_near(project_box(vec({0}), vec({1}), vec({1.5})), vec({1}), 0);
    expect_vec_near(project_box(vec({0, 0}), vec({1, 1}), vec({0.3, 0.7})), vec({0.3, 0.7}), 0);
    expect_vec_near(project_box(vec({-1}), vec({1}), vec({-9})), vec({-1}), 0);
}

TEST(ProjectBall, Examples) {
    expect_vec_near(project_l2_ball(1, vec({0, 0}), vec({3, 4})), vec({0.6, 0.8}), 1e-15);
    expect_vec_near(project_l2_ball(2, vec({0}), vec({1})), vec({1}), 0);
    expect_vec_near(project_l2_ball(1, vec({1, 0}), vec({3, 0})), vec({2, 0}), 1e-15);
}

TEST(ProxSqL2, Examples) {
    expect_vec_near(prox_sq_l2(1, 1, vec({2})), vec({1}), 1e-15);
    expect_vec_near(prox_sq_l2(1, 1e-9, vec({2})), vec({2}), 1e-8);
    expect_vec_near(prox_sq_l2(3, 1, vec({4, -8})), vec({1, -2}), 1e-15);
}

TEST(ConjugateQuadratic, Examples) {
    const Matrix I1 = Matrix::Identity(1, 1);
    EXPECT_NEAR(conjugate_quadratic(I1, vec({0}), 0, vec({2})), 2.0, 1e-15);
    EXPECT_NEAR(conjugate_quadratic(I1, vec({0}), 0, vec({0})), 0.0, 1e-15);
    EXPECT_NEAR(conjugate_quadratic(2 * I1, vec({1}), 0, vec({1})), 1.0, 1e-15);
}

TEST(ConjugateQuadratic, SingularThrows) {
    Matrix Q = Matrix::Zero(2, 2);
    Q(0, 0) = 1;
    EXPECT_THROW(conjugate_quadratic(Q, vec({0, 0}), 0, vec({1, 1})), std::invalid_argument);
}

TEST(SupportBox, Examples) {
    EXPECT_EQ(support_box(vec({0}), vec({1}), vec({2})), 2.0);
    EXPECT_EQ(support_box(vec({-1}), vec({1}), vec({-3})), 3.0);
    EXPECT_EQ(support_box(vec({0, 0}), vec({1, 1}), vec({0, 0})), 0.0);
}

TEST(SupportBox, UnboundedSideIsInfinite) {
    EXPECT_EQ(support_box(vec({0}), vec({kInf}), vec({1})), kInf);
    EXPECT_EQ(support_box(vec({0}), vec({kInf}), vec({0})), 0.0);
}

TEST(ConjugateL1, Examples) {
    EXPECT_EQ(conjugate_l1(1, vec({0.5, -1})).raw(), 0.0);
    EXPECT_TRUE(conjugate_l1(1, vec({1.01})).is_infinite());
    EXPECT_EQ(conjugate_l1(2, vec({0})).raw(), 0.0);
}

TEST(NumericConjugate, Examples) {
    GridSpec g1{vec({-10}), vec({10}), 1001};
    const auto sq = [](const Vector& x) { return ExtReal(0.5 * x.squaredNorm()); };
    EXPECT_NEAR(numeric_conjugate(sq, g1, vec({2})), 2.0, 0.02);

    GridSpec g2{vec({-5}), vec({5}), 1001};
    const auto abs1 = [](const Vector& x) { return ExtReal(x.lpNorm<1>()); };
    EXPECT_NEAR(numeric_conjugate(abs1, g2, vec({0.5})), 0.0, 0.02);

    GridSpec g3{vec({0}), vec({1}), 1001};
    const auto ind = [](const Vector& x) {
        return (x[0] >= 0 && x[0] <= 1) ? ExtReal(0.0) : ExtReal::infinity();
    };
    EXPECT_NEAR(numeric_conjugate(ind, g3, vec({3})), 3.0, 1e-12);
}

TEST(NumericConjugate, EmptyDomainThrows) {
    GridSpec g{vec({2}), vec({3}), 101};
    const auto ind = [](const Vector& x) {
        return (x[0] >= 0 && x[0] <= 1) ? ExtReal(0.0) : ExtReal::infinity();
    };
    EXPECT_THROW(numeric_conjugate(ind, g, vec({1})), std::domain_error);
    EXPECT_THROW(GridConjugate(ind, g), std::domain_error);
}

TEST(NumericConjugate, CachedMatchesDirectAndIsLowerEstimate) {
    GridSpec g{vec({-2, -2}), vec({2, 2}), 201};
    const auto sq = [](const Vector& x) { return ExtReal(0.5 * x.squaredNorm()); };
    GridConjugate cached(sq, g);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const Vector z = random_vector(2, 1.5, rng);
        EXPECT_NEAR(cached(z), numeric_conjugate(sq, g, z), 1e-12);
        EXPECT_LE(cached(z), 0.5 * z.squaredNorm() + 1e-12);
    }
}

TEST(GridSpec, ValidatesShape) {
    EXPECT_THROW((GridSpec{vec({0, 0, 0}), vec({1, 1, 1}), 101}.validate()), std::invalid_argument);
    EXPECT_THROW((GridSpec{vec({0}), vec({1}), 100}.validate()), std::invalid_argument);
    EXPECT_THROW((GridSpec{vec({1}), vec({0}), 101}.validate()), std::invalid_argument);
}

TEST(GridSpec, SnapLandsOnGridNodes) {
    GridSpec g{vec({-1, 0}), vec({1, 2}), 101};
    const auto pts = g.points();
    std::mt19937_64 rng(2);
    for (int i = 0; i < 30; ++i) {
        const Vector s = g.snap(random_vector(2, 3.0, rng));
        bool found = false;
        for (const auto& p : pts) found = found || (p[0] == s[0] && p[1] == s[1]);
        EXPECT_TRUE(found);
    }
}

TEST(ProxSpec, ValidateRejectsBadParameters) {
    EXPECT_THROW(validate(ProxSpec{ProxL1{0.0}}), std::invalid_argument);
    EXPECT_THROW(validate(ProxSpec{ProxSqL2{-1.0}}), std::invalid_argument);
    EXPECT_THROW(validate(ProxSpec{ProxBox{vec({1}), vec({0})}}), std::invalid_argument);
    EXPECT_THROW(validate(ProxSpec{ProxL2Ball{0.0, vec({0})}}), std::invalid_argument);
}

class ProxOracleProperties : public ::testing::TestWithParam<int> {
protected:
    static ProxSpec spec_for(int which) {
        switch (which) {
            case 0: return ProxZero{};
            case 1: return ProxL1{0.8};
            case 2: return ProxSqL2{1.5};
            case 3: return ProxBox{vec({-1, 0, -2}), vec({1, 0.5, 3})};
            default: return ProxL2Ball{1.2, vec({0.5, -0.5, 0})};
        }
    }
};

TEST_P(ProxOracleProperties, OptimalityNonexpansivenessAndFenchelYoung) {
    const ProxSpec spec = spec_for(GetParam());
    const ProxOracle psi = make_prox_oracle(spec);
    const ConjugateOracle conj = make_prox_conjugate(spec);
    std::mt19937_64 rng(100 + GetParam());
    for (double t : {0.05, 1.0, 7.0}) {
        for (int i = 0; i < 20; ++i) {
            const Vector x = random_vector(3, 5.0, rng);
            const Vector xp = psi.prox(t, x);
            EXPECT_TRUE(psi.value(xp).is_finite());
            EXPECT_LE(prox_optimality_violation(psi, t, x, 20, 5.0, rng), 1e-10);
            // The prox residual is a subgradient, so Fenchel-Young is tight there.
            // Shrunk by 1e-12 so round-off cannot push it off the l1 dual ball.
            const Vector z = (1.0 - 1e-12) * (x - xp) / t;
            EXPECT_NEAR(fenchel_young_gap(psi.value, conj.conj_value, z, xp), 0.0, 1e-9);
        }
        EXPECT_LE(nonexpansive_violation(psi, t, 3, 5.0, 50, rng), 1e-12);
    }
    for (int i = 0; i < 50; ++i) {
        const Vector z = random_vector(3, 2.0, rng);
        const Vector x = psi.prox(1.0, random_vector(3, 5.0, rng));
        EXPECT_GE(fenchel_young_gap(psi.value, conj.conj_value, z, x), -1e-12);
    }
}

INSTANTIATE_TEST_SUITE_P(AllSpecs, ProxOracleProperties, ::testing::Range(0, 5));

TEST(ProxIndicatorFlag, BoxAndBallAreIndicators) {
    EXPECT_TRUE(make_prox_oracle(ProxBox{vec({0}), vec({1})}).indicator);
    EXPECT_TRUE(make_prox_oracle(ProxL2Ball{1.0, vec({0})}).indicator);
    EXPECT_FALSE(make_prox_oracle(ProxL1{1.0}).indicator);
}

}  // namespace
}  // namespace proxcert
