#pragma once

#include "proxcert/certificates.hpp"
#include "proxcert/problems.hpp"
#include "proxcert/solver.hpp"
#include "proxcert/trace_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxcert {

/// Exit codes of every command.
inline constexpr int kExitPass = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitFail = 2;

/// Invalid configuration, reported before anything runs.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AlgorithmChoice { prox_grad, accel_prox_grad, prox_subgrad, proj_subgrad };

std::string to_string(AlgorithmChoice a);
AlgorithmChoice algorithm_from_string(const std::string& s);

struct RunConfig {
    std::string problem;
    AlgorithmChoice algorithm = AlgorithmChoice::prox_grad;
    /// Empty selects the algorithm's default ("one" or "fista").
    std::string theta;
    /// Empty selects "fixed:auto" (proximal gradient) or "sqrt:auto" (subgradient).
    std::string step;
    int iters = 100;
    std::vector<std::string> checks;
    std::string trace_path;
    std::string report_path;
    BoundTolerance tol;
    int probes = 10;
    std::uint64_t probe_seed = 7;
};

/// Splits "a,b,c" and validates each name against {thm1, thm2, prop1, rates, anchors}.
std::vector<std::string> parse_check_list(const std::string& s);

/// A fully resolved run: problem, schedules and step rule, validated together.
struct RunPlan {
    RunConfig config;
    ProblemInstance problem;
    bool subgradient = false;
    std::string theta_name;
    StepRule rule;          // proximal gradient runs
    StepSequence steps;     // subgradient runs
    std::optional<LhsMode> thm1_mode;
};

/// Throws ConfigError on any incompatibility between problem, algorithm,
/// schedule, step rule and requested checks.
RunPlan plan_run(const RunConfig& config);

/// Reparse with an already-built problem (tests, acceptance).
RunPlan plan_run(const RunConfig& config, ProblemInstance problem);

ThetaSchedule make_theta(const std::string& name);

Trace execute(const RunPlan& plan);

/// Random points in dom psi; on a grid instance they are snapped to grid nodes.
std::vector<Vector> sample_probes(const ProblemInstance& problem, int count, std::uint64_t seed);

CertificateInputs certificate_inputs(const ProblemInstance& problem, const BoundTolerance& tol,
                                     int probes, std::uint64_t seed);

struct RateFit {
    double exponent = std::numeric_limits<double>::quiet_NaN();
    int k_from = 0;
    int k_to = 0;
    int points = 0;
};

/// Least-squares slope of log(gap) against log(k) over the tail half
/// k in [K/2, K]; points with gap <= 0 are skipped.
RateFit fit_tail_slope(const std::vector<double>& gaps);

/// gap[k-1] = f(x_k) - f_bar for k = 1..K.
std::vector<double> gaps_of(const Trace& trace, double f_bar);

struct RunOutcome {
    Trace trace;
    BoundReport report;
    /// Report whose rows feed the certificate columns of the CSV.
    std::optional<BoundReport> primary;
    std::vector<TraceRow> rows;
    RateFit fit;
};

RunOutcome evaluate(const RunPlan& plan);

std::string report_json(const RunPlan& plan, const RunOutcome& outcome);

/// Human-readable line naming the first violated inequality, or "all checks satisfied".
std::string describe_outcome(const BoundReport& report);

/// Runs, writes outputs and returns an exit code. Errors go to `err`.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct RateRow {
    int k = 0;
    double gap = 0.0;
    double bound_1k = 0.0;
    double bound_1k2 = 0.0;
    double bound_thm2 = 0.0;
    double ratio = 0.0;
};

struct RateTable {
    std::vector<RateRow> rows;
    RateFit fit;
};

RateTable rate_table(const RunPlan& plan, const Trace& trace);
void write_rate_table(std::ostream& out, const RateTable& table);

int cmd_rates(const RunConfig& config, const std::string& out_path, std::ostream& out,
              std::ostream& err);

}  // namespace proxcert
