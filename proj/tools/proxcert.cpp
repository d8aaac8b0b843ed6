// proxcert: run proximal methods on desk-scale problems and verify their certificates.

#include "proxcert/acceptance.hpp"
#include "proxcert/harness.hpp"
#include "proxcert/problems.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

using namespace proxcert;

struct RunArgs {
    std::string problem;
    std::string algorithm = "prox_grad";
    std::string theta;
    std::string step;
    int iters = 100;
    std::string checks;
    std::string trace;
    std::string report;
    double tol_abs = 1e-9;
    double tol_rel = 1e-7;
    int probes = 10;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
    cmd->add_option("--problem", a.problem, "built-in name or problem JSON file")->required();
    cmd->add_option("--algorithm", a.algorithm,
                    "prox_grad | accel_prox_grad | prox_subgrad | proj_subgrad");
    cmd->add_option("--theta", a.theta, "one | fista | two_over");
    cmd->add_option("--step", a.step,
                    "fixed:auto | fixed:<t> | backtrack:<t0|auto>:<beta>[:monotone] | const:<t> | "
                    "sqrt:<c|auto> | nconst:<a> | nsqrt:<a|auto>");
    cmd->add_option("--iters", a.iters, "iteration count K");
    cmd->add_option("--check", a.checks, "comma-separated subset of thm1,thm2,prop1,rates,anchors");
    cmd->add_option("--trace", a.trace, "trace CSV output path");
    cmd->add_option("--report", a.report, "report JSON output path");
    cmd->add_option("--tol-abs", a.tol_abs, "absolute bound tolerance");
    cmd->add_option("--tol-rel", a.tol_rel, "relative bound tolerance");
    cmd->add_option("--probes", a.probes, "random comparison points for distance bounds");
}

RunConfig to_config(const RunArgs& a) {
    RunConfig c;
    c.problem = a.problem;
    c.algorithm = algorithm_from_string(a.algorithm);
    c.theta = a.theta;
    c.step = a.step;
    c.iters = a.iters;
    c.checks = parse_check_list(a.checks);
    c.trace_path = a.trace;
    c.report_path = a.report;
    if (!(a.tol_abs >= 0.0) || !(a.tol_rel >= 0.0))
        throw ConfigError("tolerances must be non-negative");
    c.tol = BoundTolerance{a.tol_abs, a.tol_rel};
    c.probes = a.probes;
    return c;
}

int verify_all(bool json, const std::string& fault) {
    AcceptanceOptions opt;
    if (fault == "theta") {
        opt.inject_theta_fault = true;
    } else if (!fault.empty()) {
        std::cerr << "error: unknown fault '" << fault << "' (expected theta)\n";
        return kExitConfig;
    }
    const auto results = run_acceptance(opt);
    bool all = true;
    for (const auto& r : results) all = all && r.passed;
    if (json) {
        std::cout << acceptance_json(results);
    } else {
        for (const auto& r : results)
            std::cout << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " ("
                      << format_double(r.seconds) << " s): " << r.detail << "\n";
        std::cout << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
    }
    return all ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proxcert: proximal-gradient runs with conjugate certificates"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run one algorithm and verify the requested bounds");
    add_run_options(run, run_args);

    RunArgs rate_args;
    std::string rates_out;
    auto* rates = app.add_subcommand("rates", "per-k gap and rate-bound table with a tail slope fit");
    add_run_options(rates, rate_args);
    rates->add_option("--out", rates_out, "table CSV path (stdout when omitted)");

    bool json = false;
    std::string fault;
    auto* verify = app.add_subcommand("verify-all", "run the acceptance matrix");
    verify->add_flag("--json", json, "machine-readable summary");
    verify->add_option("--inject-fault", fault, "corrupt a component to exercise failure paths (theta)");

    std::string problem_name, problem_out;
    auto* problem = app.add_subcommand("problem", "write a built-in instance as a problem JSON file");
    problem->add_option("--name", problem_name, "built-in name")->required();
    problem->add_option("--out", problem_out, "output path (stdout when omitted)");

    app.add_subcommand("list", "list built-in problems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (*run) return cmd_run(to_config(run_args), std::cout, std::cerr);
        if (*rates) return cmd_rates(to_config(rate_args), rates_out, std::cout, std::cerr);
        if (*verify) return verify_all(json, fault);
        if (*problem) {
            const ProblemInstance p = builtin(problem_name);
            if (problem_out.empty()) std::cout << problem_to_json(p.data) << "\n";
            else save_problem_file(p.data, problem_out);
            return kExitPass;
        }
        if (app.got_subcommand("list")) {
            for (const auto& n : builtin_names()) std::cout << n << "\n";
            return kExitPass;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
