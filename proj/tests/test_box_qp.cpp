#include "proxcert/box_qp.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace proxcert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// KKT residual of min 0.5 u'Hu + g'u over [lo, hi].
double kkt_residual(const Matrix& H, const Vector& g, const Vector& lo, const Vector& hi,
                    const Vector& u) {
    const Vector grad = H * u + g;
    double worst = 0.0;
    for (Index i = 0; i < u.size(); ++i) {
        worst = std::max(worst, std::max(lo[i] - u[i], u[i] - hi[i]));
        const bool at_lo = u[i] <= lo[i];
        const bool at_hi = u[i] >= hi[i];
        double r = std::abs(grad[i]);
        if (at_lo) r = std::max(0.0, -grad[i]);
        if (at_hi) r = std::max(0.0, grad[i]);
        if (at_lo && at_hi) r = 0.0;
        worst = std::max(worst, r);
    }
    return worst;
}

TEST(BoxQp, InteriorSolutionIsUnconstrainedMinimizer) {
    Matrix H(2, 2);
    H << 2, 0.5, 0.5, 1;
    Vector g(2);
    g << -1, 0.5;
    const Vector lo = Vector::Constant(2, -10), hi = Vector::Constant(2, 10);
    const auto r = solve_box_qp(H, g, lo, hi);
    const Vector expected = H.ldlt().solve(-g);
    EXPECT_LE((r.u - expected).norm(), 1e-12);
}

TEST(BoxQp, OneDimensionalClamp) {
    Matrix H = Matrix::Identity(1, 1);
    Vector g = Vector::Constant(1, 2.0);
    const auto r = solve_box_qp(H, g, Vector::Zero(1), Vector::Ones(1));
    EXPECT_EQ(r.u[0], 0.0);
    EXPECT_EQ(r.value, 0.0);
}

TEST(BoxQp, InfiniteBoundsAllowed) {
    Matrix H = Matrix::Identity(2, 2);
    Vector g(2);
    g << 3, -3;
    Vector lo(2), hi(2);
    lo << -1, -kInf;
    hi << kInf, 1;
    const auto r = solve_box_qp(H, g, lo, hi);
    EXPECT_EQ(r.u[0], -1.0);
    EXPECT_EQ(r.u[1], 1.0);
}

TEST(BoxQp, RandomInstancesSatisfyKkt) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 2 + trial % 9;
        Matrix M(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) M(i, j) = nd(rng);
        const Matrix H = M * M.transpose() + 0.1 * Matrix::Identity(n, n);
        Vector g(n), lo(n), hi(n);
        for (Index i = 0; i < n; ++i) {
            g[i] = 3 * nd(rng);
            lo[i] = -std::abs(nd(rng));
            hi[i] = std::abs(nd(rng));
        }
        const auto r = solve_box_qp(H, g, lo, hi);
        EXPECT_LE(kkt_residual(H, g, lo, hi, r.u), 1e-9 * (1 + g.norm())) << "trial " << trial;
        EXPECT_NEAR(r.value, 0.5 * r.u.dot(H * r.u) + g.dot(r.u), 1e-10);
    }
}

TEST(BoxQp, BadShapesAndBoundsThrow) {
    Matrix H = Matrix::Identity(2, 2);
    EXPECT_THROW(solve_box_qp(H, Vector::Zero(3), Vector::Zero(2), Vector::Ones(2)),
                 std::invalid_argument);
    EXPECT_THROW(solve_box_qp(H, Vector::Zero(2), Vector::Ones(2), Vector::Zero(2)),
                 std::invalid_argument);
}

}  // namespace
}  // namespace proxcert
