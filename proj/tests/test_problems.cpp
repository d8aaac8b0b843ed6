#include "proxcert/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

namespace proxcert {
namespace {

Vector one(double v) { return Vector::Constant(1, v); }

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

void expect_xbar(const ProblemInstance& p, const Vector& expected, double tol) {
    ASSERT_TRUE(p.x_bar.has_value());
    ASSERT_EQ(p.x_bar->size(), expected.size());
    for (Index i = 0; i < expected.size(); ++i) EXPECT_NEAR((*p.x_bar)[i], expected[i], tol);
}

TEST(LeastSquares, IdentityExample) {
    const auto p = make_least_squares(Matrix::Identity(2, 2), vec2(1, 2), Vector::Zero(2));
    expect_xbar(p, vec2(1, 2), 1e-14);
    EXPECT_NEAR(p.f_bar.value, 0.0, 1e-15);
    EXPECT_NEAR(*p.L, 1.0, 1e-14);
    EXPECT_NEAR(p.dist.value, std::sqrt(5.0), 1e-14);
}

TEST(LeastSquares, ZeroRightHandSide) {
    const auto p = make_least_squares(Matrix::Identity(2, 2), Vector::Zero(2), vec2(3, 4));
    expect_xbar(p, Vector::Zero(2), 1e-15);
    EXPECT_EQ(p.f_bar.value, 0.0);
}

TEST(LeastSquares, ScalarExample) {
    const auto p = make_least_squares(Matrix::Constant(1, 1, 2.0), one(2), one(0));
    expect_xbar(p, one(1), 1e-15);
    EXPECT_NEAR(*p.L, 4.0, 1e-14);
    EXPECT_NEAR(p.dist.value, 1.0, 1e-15);
}

TEST(LeastSquares, RankDeficientProjectsStartPoint) {
    Matrix A(2, 2);
    A << 1, 1, 1, 1;
    const auto p = make_least_squares(A, vec2(2, 0), vec2(3, 0));
    // Solutions are x1 + x2 = 1; the nearest to x0 = (3, 0) is (2, -1).
    expect_xbar(p, vec2(2, -1), 1e-12);
    EXPECT_NEAR(p.f_bar.value, 1.0, 1e-12);
    EXPECT_NEAR(p.dist.value, std::sqrt(2.0), 1e-12);
}

TEST(Lasso, LargeLambdaGivesZero) {
    Matrix A(2, 2);
    A << 1, 0.5, -0.2, 1;
    const Vector b = vec2(1, -0.5);
    const double lam = (A.transpose() * b).cwiseAbs().maxCoeff();
    const auto p = make_lasso(A, b, lam * 1.01, vec2(1, 1));
    expect_xbar(p, Vector::Zero(2), 1e-12);
    EXPECT_NEAR(p.f_bar.value, 0.5 * b.squaredNorm(), 1e-12);
}

TEST(Lasso, ScalarSoftThreshold) {
    const auto p = make_lasso(Matrix::Identity(1, 1), one(3), 1.0, one(0));
    expect_xbar(p, one(2), 1e-12);
    EXPECT_NEAR(p.f_bar.value, 2.5, 1e-12);
    EXPECT_LE(p.f_bar.accuracy, 1e-9);
    ASSERT_TRUE(p.fstar.has_value());
    EXPECT_EQ(p.fstar_strategy, FstarStrategy::dual_solve);
}

TEST(Lasso, SmallLambdaApproachesLeastSquares) {
    Matrix A(3, 2);
    A << 1, 0.2, 0.3, 1, -0.4, 0.5;
    Vector b(3);
    b << 1, 2, -1;
    const auto ls = make_least_squares(A, b, Vector::Zero(2));
    const auto la = make_lasso(A, b, 1e-8, Vector::Zero(2));
    EXPECT_NEAR(la.f_bar.value, ls.f_bar.value, 1e-6);
    EXPECT_LE((*la.x_bar - *ls.x_bar).norm(), 1e-6);
}

TEST(Lasso, ConjugateAtZeroIsMinusOptimum) {
    const auto p = builtin("lasso-2d");
    ASSERT_TRUE(p.fstar.has_value());
    EXPECT_NEAR(-p.fstar->conj_value(Vector::Zero(2)).value(), p.f_bar.value, 1e-9);
}

TEST(BoxQp, InteriorOptimum) {
    const auto p = make_box_qp(Matrix::Identity(3, 3), Vector::Zero(3), Vector::Constant(3, -1),
                               Vector::Ones(3), Vector::Constant(3, 0.5));
    expect_xbar(p, Vector::Zero(3), 1e-15);
    EXPECT_NEAR(p.f_bar.value, 0.0, 1e-15);
}

TEST(BoxQp, BoundaryOptimum) {
    const auto p = make_box_qp(Matrix::Identity(1, 1), one(2), one(0), one(1), one(1));
    expect_xbar(p, one(0), 1e-15);
    EXPECT_NEAR(p.f_bar.value, 0.0, 1e-15);
}

TEST(BoxQp, LipschitzIsLargestEigenvalue) {
    Matrix Q = Matrix::Zero(2, 2);
    Q(0, 0) = 1;
    Q(1, 1) = 4;
    const auto p = make_box_qp(Q, Vector::Zero(2), Vector::Constant(2, -1), Vector::Ones(2), Vector::Zero(2));
    EXPECT_NEAR(*p.L, 4.0, 1e-14);
}

TEST(BoxQp, NumericGridNeedsSmallDimension) {
    EXPECT_THROW(make_box_qp(Matrix::Identity(3, 3), Vector::Zero(3), Vector::Constant(3, -1),
                             Vector::Ones(3), Vector::Zero(3), FstarStrategy::numeric_grid),
                 std::invalid_argument);
    const auto p = make_box_qp(Matrix::Identity(2, 2), Vector::Ones(2), Vector::Constant(2, -1),
                               Vector::Ones(2), Vector::Zero(2), FstarStrategy::numeric_grid);
    EXPECT_TRUE(p.grid.has_value());
    EXPECT_EQ(p.fstar->kind, ConjugateKind::numeric_grid);
}

TEST(L1Regression, SymmetricExample) {
    const auto p = make_l1_regression(Matrix::Identity(1, 1), one(0), one(-1), one(1), one(0.5));
    expect_xbar(p, one(0), 1e-15);
    EXPECT_NEAR(p.f_bar.value, 0.0, 1e-15);
    EXPECT_FALSE(p.smooth);
}

TEST(L1Regression, BoundaryExample) {
    const auto p = make_l1_regression(Matrix::Identity(2, 2), vec2(0.5, -0.5), Vector::Zero(2),
                                      Vector::Ones(2), vec2(1, 1));
    expect_xbar(p, vec2(0.5, 0), 1e-12);
    EXPECT_NEAR(p.f_bar.value, 0.5, 1e-12);
}

TEST(ReferenceOptimum, Examples) {
    const auto ls = make_least_squares(Matrix::Identity(2, 2), vec2(1, 2), Vector::Zero(2));
    const Estimate e = reference_optimum(ls, 10);
    EXPECT_EQ(e.value, ls.f_bar.value);

    const auto la = make_lasso(Matrix::Identity(1, 1), one(3), 1.0, one(0));
    EXPECT_NEAR(reference_optimum(la, 1000).value, 2.5, 1e-8);

    const auto bq = make_box_qp(Matrix::Identity(1, 1), one(2), one(0), one(1), one(1));
    EXPECT_NEAR(reference_optimum(bq, 1000).value, 0.0, 1e-8);

    EXPECT_THROW(reference_optimum(la, 9), std::invalid_argument);
}

TEST(BruteForceProx, Examples) {
    GridSpec g{one(-5), one(5), 100001};
    const auto absv = [](const Vector& x) { return ExtReal(std::abs(x[0])); };
    EXPECT_NEAR(brute_force_prox(absv, 1.0, one(3), g)[0], 2.0, 1e-4);

    GridSpec coarse{one(-1), one(1), 101};
    const auto zero = [](const Vector&) { return ExtReal(0.0); };
    EXPECT_NEAR(brute_force_prox(zero, 1.0, one(0.333), coarse)[0], 0.34, 1e-12);

    const auto ind = [](const Vector& x) {
        return (x[0] >= 0 && x[0] <= 1) ? ExtReal(0.0) : ExtReal::infinity();
    };
    EXPECT_NEAR(brute_force_prox(ind, 1.0, one(2), g)[0], 1.0, 1e-4);

    GridSpec outside{one(2), one(3), 101};
    EXPECT_THROW(brute_force_prox(ind, 1.0, one(2), outside), std::domain_error);
}

TEST(Builtins, AllInstancesAreConsistent) {
    for (const auto& name : builtin_names()) {
        SCOPED_TRACE(name);
        const ProblemInstance p = builtin(name);
        EXPECT_EQ(p.x0.size(), p.objective.dim());
        if (p.x_bar) {
            const double fx = p.objective.f(*p.x_bar).value();
            EXPECT_NEAR(fx, p.f_bar.value, std::max(1e-9, 1.01 * p.f_bar.accuracy)) << "f(x_bar)";
            EXPECT_NEAR((*p.x_bar - p.x0).norm(), p.dist.value, 1e-9 + p.dist.accuracy);
        }
        if (p.smooth && p.L) {
            std::mt19937_64 rng(99);
            EXPECT_LE(lipschitz_violation(p.objective.phi(), p.objective.dim(), 5.0, 200, rng), 1e-9);
        }
    }
}

TEST(Builtins, SeedChangesRandomInstances) {
    const auto a = builtin("lasso-20", 1);
    const auto b = builtin("lasso-20", 2);
    EXPECT_NE(a.name, b.name);
    EXPECT_NE(a.data.vec, b.data.vec);
    const auto c = builtin("lasso-20", 1);
    EXPECT_EQ(a.data.vec, c.data.vec);
}

TEST(Builtins, UnknownNameThrows) {
    EXPECT_THROW(builtin("no-such-problem"), std::invalid_argument);
}

TEST(ProblemJson, RoundTripPreservesInstance) {
    for (const auto& name : builtin_names()) {
        SCOPED_TRACE(name);
        const ProblemInstance p = builtin(name);
        const ProblemData back = problem_from_json(problem_to_json(p.data));
        EXPECT_EQ(back.name, p.data.name);
        EXPECT_EQ(back.kind, p.data.kind);
        EXPECT_EQ(back.matrix, p.data.matrix);
        EXPECT_EQ(back.vec, p.data.vec);
        EXPECT_EQ(back.lo, p.data.lo);
        EXPECT_EQ(back.hi, p.data.hi);
        EXPECT_EQ(back.x0, p.data.x0);
        EXPECT_EQ(back.lambda, p.data.lambda);
        const ProblemInstance q = make_problem(back);
        EXPECT_EQ(q.f_bar.value, p.f_bar.value);
    }
}

TEST(ProblemJson, FileRoundTripAndResolve) {
    const auto dir = std::filesystem::temp_directory_path() / "proxcert_problem_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "lasso.json").string();
    const ProblemInstance p = builtin("lasso-2d");
    save_problem_file(p.data, path);
    const ProblemInstance q = resolve_problem(path);
    EXPECT_EQ(q.f_bar.value, p.f_bar.value);
    EXPECT_EQ(q.x0, p.x0);
    std::filesystem::remove_all(dir);
}

TEST(ProblemJson, MalformedInputThrows) {
    EXPECT_ANY_THROW(problem_from_json("{not json"));
    EXPECT_ANY_THROW(problem_from_json(R"({"name":"x","kind":"lasso","rows":2,"cols":2,"matrix":[1,2,3]})"));
    EXPECT_ANY_THROW(problem_from_json(R"({"name":"x","kind":"mystery"})"));
}

}  // namespace
}  // namespace proxcert
