#include "proxcert/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace proxcert {
namespace {

RunConfig config(const std::string& problem, AlgorithmChoice alg, const std::string& theta,
                 const std::string& step, int iters, std::vector<std::string> checks) {
    RunConfig c;
    c.problem = problem;
    c.algorithm = alg;
    c.theta = theta;
    c.step = step;
    c.iters = iters;
    c.checks = std::move(checks);
    return c;
}

TEST(ParseCheckList, SplitsAndValidates) {
    EXPECT_EQ(parse_check_list("thm1,rates"), (std::vector<std::string>{"thm1", "rates"}));
    EXPECT_TRUE(parse_check_list("").empty());
    EXPECT_THROW(parse_check_list("thm1,bogus"), ConfigError);
}

TEST(AlgorithmNames, RoundTrip) {
    for (auto a : {AlgorithmChoice::prox_grad, AlgorithmChoice::accel_prox_grad,
                   AlgorithmChoice::prox_subgrad, AlgorithmChoice::proj_subgrad})
        EXPECT_EQ(algorithm_from_string(to_string(a)), a);
    EXPECT_THROW(algorithm_from_string("newton"), ConfigError);
}

TEST(PlanRun, RejectsZeroIterations) {
    EXPECT_THROW(plan_run(config("lasso-2d", AlgorithmChoice::prox_grad, "", "", 0, {})), ConfigError);
}

TEST(PlanRun, Thm2RejectsNonMonotoneBacktracking) {
    try {
        plan_run(config("lasso-2d", AlgorithmChoice::accel_prox_grad, "fista", "backtrack:1:0.5", 10,
                        {"thm2"}));
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("hypothesis violation"), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW(plan_run(config("lasso-2d", AlgorithmChoice::accel_prox_grad, "fista",
                                    "backtrack:1:0.5:monotone", 10, {"thm2"})));
}

TEST(PlanRun, Thm1CaseBNeedsFistaWithFixedStep) {
    EXPECT_THROW(plan_run(config("lasso-2d", AlgorithmChoice::accel_prox_grad, "two_over", "fixed:auto", 10,
                                 {"thm1"})),
                 ConfigError);
    const RunPlan ok = plan_run(config("lasso-2d", AlgorithmChoice::accel_prox_grad, "fista", "fixed:auto",
                                       10, {"thm1"}));
    ASSERT_TRUE(ok.thm1_mode.has_value());
    EXPECT_EQ(*ok.thm1_mode, LhsMode::case_b);
    const RunPlan plain = plan_run(config("lasso-2d", AlgorithmChoice::prox_grad, "", "", 10, {"thm1"}));
    EXPECT_EQ(*plain.thm1_mode, LhsMode::case_a);
}

TEST(PlanRun, NonsmoothProblemNeedsSubgradientMethod) {
    EXPECT_THROW(plan_run(config("l1reg-2d", AlgorithmChoice::prox_grad, "", "", 10, {})), ConfigError);
    EXPECT_NO_THROW(plan_run(config("l1reg-2d", AlgorithmChoice::proj_subgrad, "", "", 10, {"prop1"})));
}

TEST(PlanRun, ProjectedSubgradientNeedsIndicator) {
    EXPECT_THROW(plan_run(config("lasso-2d", AlgorithmChoice::proj_subgrad, "", "", 10, {})), ConfigError);
}

TEST(PlanRun, MalformedStepsAndThetas) {
    for (const char* step : {"fixed:", "fixed:-1", "backtrack:1", "backtrack:1:1.5", "sqrt:x", "wobble"})
        EXPECT_THROW(plan_run(config("lasso-2d", AlgorithmChoice::prox_grad, "", step, 10, {})), ConfigError)
            << step;
    EXPECT_THROW(plan_run(config("lasso-2d", AlgorithmChoice::accel_prox_grad, "golden", "", 10, {})),
                 ConfigError);
    EXPECT_THROW(plan_run(config("lasso-2d", AlgorithmChoice::prox_grad, "", "sqrt:1", 10, {})), ConfigError);
}

TEST(PlanRun, UnknownProblemIsConfigError) {
    EXPECT_ANY_THROW(plan_run(config("nope", AlgorithmChoice::prox_grad, "", "", 10, {})));
}

TEST(FitTailSlope, RecoversPowerLaw) {
    std::vector<double> gaps;
    for (int k = 1; k <= 400; ++k) gaps.push_back(3.0 / (double(k) * k));
    const RateFit f = fit_tail_slope(gaps);
    EXPECT_NEAR(f.exponent, -2.0, 1e-10);
    EXPECT_EQ(f.k_from, 200);
    EXPECT_EQ(f.k_to, 400);
}

TEST(FitTailSlope, SkipsNonPositiveGaps) {
    std::vector<double> gaps(100, 0.0);
    EXPECT_TRUE(std::isnan(fit_tail_slope(gaps).exponent));
}

TEST(SampleProbes, StayInDomainAndOnGrid) {
    const ProblemInstance p = builtin("boxqp-2d");
    ASSERT_TRUE(p.grid.has_value());
    const auto probes = sample_probes(p, 20, 7);
    EXPECT_EQ(probes.size(), 20u);
    const auto pts = p.grid->points();
    for (const auto& x : probes) {
        EXPECT_TRUE(p.objective.f(x).is_finite());
        EXPECT_EQ(p.grid->snap(x), x);
    }
}

TEST(CmdRun, AcceleratedLassoPasses) {
    std::ostringstream out, err;
    const int code = cmd_run(config("lasso-20", AlgorithmChoice::accel_prox_grad, "fista", "fixed:auto",
                                    1000, {"thm1", "rates"}),
                             out, err);
    EXPECT_EQ(code, kExitPass) << err.str();
}

TEST(CmdRun, ConfigErrorsExitOne) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(config("lasso-2d", AlgorithmChoice::prox_grad, "", "", 0, {}), out, err), kExitConfig);
    EXPECT_EQ(cmd_run(config("lasso-2d", AlgorithmChoice::accel_prox_grad, "fista", "backtrack:1:0.5", 10,
                             {"thm2"}),
                      out, err),
              kExitConfig);
}

TEST(CmdRun, WritesTraceAndReport) {
    const auto dir = std::filesystem::temp_directory_path() / "proxcert_harness_test";
    std::filesystem::create_directories(dir);
    RunConfig c = config("boxqp-10", AlgorithmChoice::prox_grad, "", "", 50, {"thm1", "rates", "anchors"});
    c.trace_path = (dir / "t.csv").string();
    c.report_path = (dir / "r.json").string();
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(c, out, err), kExitPass) << err.str();
    EXPECT_EQ(read_trace_file(c.trace_path).size(), 50u);
    std::ifstream in(c.report_path);
    std::stringstream body;
    body << in.rdbuf();
    EXPECT_NE(body.str().find("\"satisfied\": true"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(DescribeOutcome, NamesFirstViolation) {
    BoundReport rep;
    BoundCheck ok("a.ok");
    ok.add(1, 0.0, 1.0, 0.0);
    BoundCheck bad("b.bad");
    bad.add(4, 2.0, 1.0, 0.0);
    rep.checks = {ok, bad};
    const std::string s = describe_outcome(rep);
    EXPECT_NE(s.find("b.bad"), std::string::npos);
    EXPECT_NE(s.find("k=4"), std::string::npos);
    EXPECT_EQ(describe_outcome(BoundReport{}), "all checks satisfied");
}

TEST(RateTable, ProxGradBoxQpRatiosAtMostOne) {
    const RunPlan plan = plan_run(config("boxqp-10", AlgorithmChoice::prox_grad, "", "", 300, {"rates"}));
    const RateTable t = rate_table(plan, execute(plan));
    ASSERT_EQ(t.rows.size(), 300u);
    for (const auto& r : t.rows) EXPECT_LE(r.ratio, 1.0 + 1e-7) << "k=" << r.k;
}

TEST(RateTable, AcceleratedLassoTailIsSteep) {
    const RunPlan plan =
        plan_run(config("lasso-20", AlgorithmChoice::accel_prox_grad, "fista", "fixed:auto", 1000, {"rates"}));
    const RateTable t = rate_table(plan, execute(plan));
    EXPECT_LE(t.fit.exponent, -1.5);
}

TEST(RateTable, ZeroDistanceGivesZeroRatios) {
    // Start at the optimum of a least-squares instance.
    ProblemInstance p = make_least_squares(Matrix::Identity(2, 2), Vector::Ones(2), Vector::Ones(2));
    const RunPlan plan = plan_run(config("", AlgorithmChoice::prox_grad, "", "", 20, {"rates"}), p);
    const RateTable t = rate_table(plan, execute(plan));
    for (const auto& r : t.rows) {
        EXPECT_NEAR(r.gap, 0.0, 1e-15);
        EXPECT_EQ(r.ratio, 0.0);
    }
}

}  // namespace
}  // namespace proxcert
