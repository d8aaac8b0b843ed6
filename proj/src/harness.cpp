#include "proxcert/harness.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace proxcert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{"thm1", "thm2", "prop1", "rates", "anchors"};
    return names;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double positive_number(const std::string& token, const std::string& what) {
    double v = 0.0;
    try {
        v = parse_double(token);
    } catch (const std::invalid_argument&) {
        throw ConfigError(what + ": '" + token + "' is not a number");
    }
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive and finite");
    return v;
}

double require_L(const ProblemInstance& p, const std::string& what) {
    if (!p.L) throw ConfigError(what + " needs a Lipschitz constant, which " + p.name + " lacks");
    return *p.L;
}

bool certified(const Estimate& e) { return std::isfinite(e.value) && std::isfinite(e.accuracy); }

nlohmann::ordered_json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string to_string(AlgorithmChoice a) {
    switch (a) {
        case AlgorithmChoice::prox_grad: return "prox_grad";
        case AlgorithmChoice::accel_prox_grad: return "accel_prox_grad";
        case AlgorithmChoice::prox_subgrad: return "prox_subgrad";
        case AlgorithmChoice::proj_subgrad: return "proj_subgrad";
    }
    return "unknown";
}

AlgorithmChoice algorithm_from_string(const std::string& s) {
    for (auto a : {AlgorithmChoice::prox_grad, AlgorithmChoice::accel_prox_grad,
                   AlgorithmChoice::prox_subgrad, AlgorithmChoice::proj_subgrad})
        if (to_string(a) == s) return a;
    throw ConfigError("unknown algorithm '" + s +
                      "' (expected prox_grad, accel_prox_grad, prox_subgrad or proj_subgrad)");
}

std::vector<std::string> parse_check_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    for (const std::string& name : split(s, ',')) {
        if (!has(known_checks(), name))
            throw ConfigError("unknown check '" + name +
                              "' (expected a subset of thm1,thm2,prop1,rates,anchors)");
        if (!has(out, name)) out.push_back(name);
    }
    return out;
}

ThetaSchedule make_theta(const std::string& name) {
    if (name == "one") return ThetaSchedule::constant_one();
    if (name == "fista") return ThetaSchedule::fista();
    if (name == "two_over") return ThetaSchedule::two_over();
    throw ConfigError("unknown theta schedule '" + name + "' (expected one, fista or two_over)");
}

RunPlan plan_run(const RunConfig& config) {
    ProblemInstance problem = [&] {
        try {
            return resolve_problem(config.problem);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }();
    return plan_run(config, std::move(problem));
}

RunPlan plan_run(const RunConfig& config, ProblemInstance problem) {
    if (config.iters < 1) throw ConfigError("--iters must be at least 1");
    if (config.probes < 0) throw ConfigError("probe count must be non-negative");
    const auto& checks = config.checks;
    for (const auto& c : checks)
        if (!has(known_checks(), c)) throw ConfigError("unknown check '" + c + "'");

    RunPlan plan{config, std::move(problem)};
    const ProblemInstance& p = plan.problem;
    const AlgorithmChoice alg = config.algorithm;
    plan.subgradient = alg == AlgorithmChoice::prox_subgrad || alg == AlgorithmChoice::proj_subgrad;

    if (!plan.subgradient && !p.smooth)
        throw ConfigError(p.name + " has a nonsmooth phi; use prox_subgrad or proj_subgrad");
    if (alg == AlgorithmChoice::proj_subgrad && !p.objective.psi().indicator)
        throw ConfigError("proj_subgrad needs psi to be an indicator; " + p.name +
                          " is not constrained that way (use prox_subgrad)");

    // Momentum schedule.
    if (plan.subgradient) {
        if (!config.theta.empty() && config.theta != "one")
            throw ConfigError("subgradient runs take no momentum schedule");
        plan.theta_name = "one";
    } else if (alg == AlgorithmChoice::prox_grad) {
        plan.theta_name = config.theta.empty() ? "one" : config.theta;
        if (plan.theta_name != "one")
            throw ConfigError("prox_grad runs with theta=one; use accel_prox_grad for momentum");
    } else {
        plan.theta_name = config.theta.empty() ? "fista" : config.theta;
        if (plan.theta_name != "fista" && plan.theta_name != "two_over")
            throw ConfigError("accel_prox_grad needs theta=fista or theta=two_over");
    }

    // Step rule.
    const std::string step =
        !config.step.empty() ? config.step : (plan.subgradient ? "sqrt:auto" : "fixed:auto");
    const std::vector<std::string> tok = split(step, ':');
    const std::string& kind = tok.front();
    bool fixed = false, monotone = false;
    if (!plan.subgradient) {
        if (kind == "fixed" && tok.size() == 2) {
            const double t = tok[1] == "auto" ? 1.0 / require_L(p, "fixed:auto")
                                              : positive_number(tok[1], "fixed step");
            plan.rule = FixedStep{t};
            fixed = true;
        } else if (kind == "backtrack" && (tok.size() == 3 || tok.size() == 4)) {
            Backtracking b;
            b.t_init = tok[1] == "auto" ? 10.0 / require_L(p, "backtrack:auto")
                                        : positive_number(tok[1], "backtracking t_init");
            b.shrink = positive_number(tok[2], "backtracking factor");
            if (!(b.shrink < 1.0)) throw ConfigError("backtracking factor must lie in (0, 1)");
            if (tok.size() == 4) {
                if (tok[3] != "monotone")
                    throw ConfigError("unknown backtracking option '" + tok[3] + "'");
                b.monotone = true;
            }
            monotone = b.monotone;
            plan.rule = b;
        } else {
            throw ConfigError("bad step rule '" + step +
                              "' for proximal gradient (fixed:auto, fixed:<t>, "
                              "backtrack:<t_init|auto>:<beta>[:monotone])");
        }
    } else {
        if (tok.size() != 2)
            throw ConfigError("bad step rule '" + step +
                              "' for a subgradient run (const:<t>, sqrt:<c|auto>, nconst:<a>, "
                              "nsqrt:<a|auto>)");
        const int K = config.iters;
        double v = 0.0;
        if (tok[1] == "auto") {
            if (kind != "sqrt" && kind != "nsqrt")
                throw ConfigError("'auto' is only defined for sqrt and nsqrt steps");
            if (!certified(p.dist) || p.dist.value <= 0.0)
                throw ConfigError(step + " needs a certified positive dist(x0, X) for " + p.name);
            v = kind == "sqrt" ? p.dist.value / require_L(p, step) : p.dist.value;
        } else {
            v = positive_number(tok[1], "step parameter");
        }
        if (kind == "const") {
            plan.steps = constant_steps(v, K);
        } else if (kind == "sqrt") {
            plan.steps = sqrt_steps(v, K);
        } else if (kind == "nconst") {
            plan.steps = NormalizedSteps{std::vector<double>(static_cast<std::size_t>(K), v)};
        } else if (kind == "nsqrt") {
            plan.steps = NormalizedSteps{sqrt_steps(v, K).t};
        } else {
            throw ConfigError("unknown subgradient step kind '" + kind + "'");
        }
    }

    // Checks against the configuration.
    for (const std::string& c : checks) {
        if ((c == "thm1" || c == "thm2" || c == "anchors") && plan.subgradient)
            throw ConfigError("--check " + c + " applies to proximal gradient runs only");
        if (c == "prop1" && !plan.subgradient)
            throw ConfigError("--check prop1 applies to subgradient runs only");
    }
    if (has(checks, "thm1")) {
        if (plan.theta_name == "one") {
            plan.thm1_mode = LhsMode::case_a;
        } else if (plan.theta_name == "fista" && fixed) {
            plan.thm1_mode = LhsMode::case_b;
        } else {
            throw ConfigError(
                "hypothesis violation: thm1 needs theta=one (case a) or theta=fista with a "
                "fixed step (case b)");
        }
    }
    if (has(checks, "thm2")) {
        if (plan.theta_name == "one")
            throw ConfigError("hypothesis violation: thm2 needs theta_k < 1 for k >= 1 "
                              "(use theta=fista or theta=two_over)");
        if (!fixed && !monotone)
            throw ConfigError("hypothesis violation: thm2 needs non-increasing step sizes; use a "
                              "fixed step or backtrack:<t_init>:<beta>:monotone");
    }
    if (has(checks, "rates")) {
        if (!certified(p.f_bar) || !certified(p.dist))
            throw ConfigError("--check rates needs a certified optimal value and distance for " +
                              p.name);
        if (plan.subgradient && !p.objective.psi().indicator)
            throw ConfigError("subgradient rates need psi to be an indicator");
    }
    return plan;
}

Trace execute(const RunPlan& plan) {
    const ProblemInstance& p = plan.problem;
    if (plan.subgradient)
        return run_algorithm2(p.objective, p.subgradient, p.x0, plan.steps, plan.config.iters);
    return run_algorithm1(p.objective, make_theta(plan.theta_name), plan.rule, p.x0,
                          plan.config.iters);
}

std::vector<Vector> sample_probes(const ProblemInstance& p, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vector> out;
    const Index n = p.objective.dim();
    const bool boxed = p.objective.psi().indicator && !p.data.lo.empty();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double scale = std::max(1.0, certified(p.dist) ? p.dist.value : 1.0);
    for (int i = 0; i < count; ++i) {
        Vector x(n);
        if (boxed) {
            for (Index j = 0; j < n; ++j) {
                const double lo = p.data.lo[static_cast<std::size_t>(j)];
                const double hi = p.data.hi[static_cast<std::size_t>(j)];
                x[j] = std::isfinite(lo) && std::isfinite(hi) ? lo + (hi - lo) * unit(rng)
                                                               : p.x0[j] + scale * (2 * unit(rng) - 1);
                x[j] = std::clamp(x[j], lo, hi);
            }
        } else {
            const Vector center = p.x_bar ? *p.x_bar : p.x0;
            x = center + random_vector(n, scale, rng);
        }
        if (p.grid) x = p.grid->snap(x);
        out.push_back(std::move(x));
    }
    return out;
}

CertificateInputs certificate_inputs(const ProblemInstance& p, const BoundTolerance& tol,
                                     int probes, std::uint64_t seed) {
    CertificateInputs in;
    in.fstar = p.fstar;
    in.probes = sample_probes(p, probes, seed);
    if (certified(p.f_bar)) in.f_bar = p.f_bar.value;
    if (certified(p.dist)) in.dist = p.dist.value;
    in.tol = tol;
    return in;
}

std::vector<double> gaps_of(const Trace& trace, double f_bar) {
    std::vector<double> g;
    g.reserve(trace.records.size());
    for (const IterateRecord& r : trace.records) g.push_back(r.f_x_next - f_bar);
    return g;
}

RateFit fit_tail_slope(const std::vector<double>& gaps) {
    RateFit fit;
    const int K = static_cast<int>(gaps.size());
    if (K < 2) return fit;
    fit.k_from = std::max(1, K / 2);
    fit.k_to = K;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = fit.k_from; k <= K; ++k) {
        const double g = gaps[static_cast<std::size_t>(k - 1)];
        if (!(g > 0.0) || !std::isfinite(g)) continue;
        const double x = std::log(static_cast<double>(k)), y = std::log(g);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    fit.points = n;
    if (n < 2) return fit;
    const double den = n * sxx - sx * sx;
    if (den > 0) fit.exponent = (n * sxy - sx * sy) / den;
    return fit;
}

namespace {

BoundCheck decrease_check(const std::string& name, const Trace& trace) {
    BoundCheck c(name);
    for (const IterateRecord& r : trace.records)
        c.add(r.k, -r.decrease_margin, 0.0,
              1e-12 * (1.0 + std::abs(r.phi_y) + std::abs(r.f_x_next)));
    return c;
}

}  // namespace

RunOutcome evaluate(const RunPlan& plan) {
    const ProblemInstance& p = plan.problem;
    const RunConfig& cfg = plan.config;
    RunOutcome out;
    out.trace = execute(plan);
    const Trace& trace = out.trace;
    const CertificateInputs in = certificate_inputs(p, cfg.tol, cfg.probes, cfg.probe_seed);

    if (!plan.subgradient) out.report.hypotheses = assess_hypotheses(trace).tags();
    else out.report.hypotheses = {"prop1"};

    auto take = [&](BoundReport r) {
        if (!out.primary && !r.rows.empty()) out.primary = r;
        out.report.merge(std::move(r));
    };
    for (const std::string& c : cfg.checks) {
        if (c == "thm1") {
            BoundReport r;
            r.checks.push_back(decrease_check("thm1.decrease", trace));
            BoundReport body = check_thm1(trace, p.objective, *plan.thm1_mode, in);
            body.checks.insert(body.checks.begin(), r.checks.begin(), r.checks.end());
            take(std::move(body));
        } else if (c == "thm2") {
            take(check_thm2(trace, p.objective, in));
        } else if (c == "prop1") {
            take(check_prop1(trace, p.objective, in));
        } else if (c == "rates") {
            if (plan.subgradient)
                take(subgrad_rates(trace, p.phi_bar(), p.dist.value, p.L, cfg.tol));
            else
                take(check_rates(trace, p.f_bar.value, p.dist.value, cfg.tol));
        } else if (c == "anchors") {
            take(check_anchor(trace));
        }
    }
    if (certified(p.f_bar)) out.fit = fit_tail_slope(gaps_of(trace, p.f_bar.value));
    out.rows = make_trace_rows(trace, out.primary ? &*out.primary : nullptr);
    return out;
}

std::string describe_outcome(const BoundReport& report) {
    const BoundCheck* bad = report.first_failure();
    if (!bad) return "all checks satisfied";
    const CheckPoint* p = bad->first_violation();
    std::ostringstream os;
    os << "first violated inequality: " << bad->name() << " at k=" << p->k
       << ": lhs=" << format_double(p->lhs) << " rhs=" << format_double(p->rhs)
       << " slack=" << format_double(p->slack);
    return os.str();
}

std::string report_json(const RunPlan& plan, const RunOutcome& o) {
    const RunConfig& c = plan.config;
    const ProblemInstance& p = plan.problem;
    nlohmann::ordered_json j;
    j["config"] = {
        {"problem", c.problem},
        {"algorithm", to_string(c.algorithm)},
        {"theta", plan.theta_name},
        {"step", o.trace.step_tag.empty() ? c.step : o.trace.step_tag},
        {"iters", c.iters},
        {"checks", c.checks},
        {"tol_abs", c.tol.abs},
        {"tol_rel", c.tol.rel},
    };
    if (plan.subgradient) j["config"]["step"] = c.step.empty() ? "sqrt:auto" : c.step;
    j["problem"] = {
        {"name", p.name},
        {"kind", to_string(p.kind)},
        {"dim", p.objective.dim()},
        {"L", p.L ? num(*p.L) : nlohmann::ordered_json(nullptr)},
        {"f_bar", num(p.f_bar.value)},
        {"f_bar_accuracy", num(p.f_bar.accuracy)},
        {"dist", num(p.dist.value)},
        {"dist_accuracy", num(p.dist.accuracy)},
        {"fstar_strategy", to_string(p.fstar_strategy)},
    };
    j["hypotheses"] = o.report.hypotheses;
    j["fstar_rung"] = o.report.fstar_rung;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const BoundCheck& b : o.report.checks) {
        const CheckPoint* w = b.worst();
        checks.push_back({{"name", b.name()},
                          {"worst_slack", w ? num(w->slack) : nlohmann::ordered_json(nullptr)},
                          {"worst_k", w ? nlohmann::ordered_json(w->k) : nlohmann::ordered_json(nullptr)},
                          {"satisfied", b.satisfied()},
                          {"points", b.points().size()},
                          {"vacuous", b.vacuous_count()}});
    }
    j["checks"] = checks;
    j["notes"] = o.report.notes;
    j["rate_fit"] = {{"exponent", num(o.fit.exponent)},
                     {"k_from", o.fit.k_from},
                     {"k_to", o.fit.k_to},
                     {"points", o.fit.points}};
    j["satisfied"] = o.report.all_satisfied();
    if (const BoundCheck* bad = o.report.first_failure()) {
        const CheckPoint* p0 = bad->first_violation();
        j["first_failure"] = {{"name", bad->name()},
                              {"k", p0->k},
                              {"lhs", num(p0->lhs)},
                              {"rhs", num(p0->rhs)},
                              {"slack", num(p0->slack)}};
    } else {
        j["first_failure"] = nullptr;
    }
    return j.dump(2) + "\n";
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::optional<RunPlan> planned;
    try {
        planned = plan_run(config);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const RunPlan& plan = *planned;

    RunOutcome outcome;
    try {
        outcome = evaluate(plan);
    } catch (const HypothesisError& e) {
        err << "hypothesis violation: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (!config.trace_path.empty()) write_trace_file(config.trace_path, outcome.rows);
        if (!config.report_path.empty())
            write_file_atomic(config.report_path, report_json(plan, outcome));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    out << "problem " << plan.problem.name << ", " << to_string(config.algorithm) << ", theta "
        << plan.theta_name << ", " << config.iters << " iterations\n";
    for (const BoundCheck& b : outcome.report.checks) {
        const CheckPoint* w = b.worst();
        out << "  " << (b.satisfied() ? "ok   " : "FAIL ") << b.name();
        if (w) out << "  worst slack " << format_double(w->slack) << " at k=" << w->k;
        out << "\n";
    }
    for (const std::string& n : outcome.report.notes) out << "  note: " << n << "\n";
    if (!std::isnan(outcome.fit.exponent))
        out << "  tail exponent " << format_double(outcome.fit.exponent) << "\n";
    out << describe_outcome(outcome.report) << "\n";
    return outcome.report.all_satisfied() ? kExitPass : kExitFail;
}

RateTable rate_table(const RunPlan& plan, const Trace& trace) {
    if (plan.subgradient) throw ConfigError("rates tables cover proximal gradient runs only");
    const ProblemInstance& p = plan.problem;
    if (!certified(p.f_bar) || !certified(p.dist))
        throw ConfigError("rates need a certified optimal value and distance for " + p.name);
    const double d = p.dist.value;
    const bool accel = plan.theta_name != "one";
    RateTable table;
    double min_t = std::numeric_limits<double>::infinity();
    for (const IterateRecord& r : trace.records) {
        min_t = std::min(min_t, r.t);
        RateRow row;
        row.k = r.k + 1;
        row.gap = r.f_x_next - p.f_bar.value;
        row.bound_1k = rate_prox_grad(1.0 / min_t, d, row.k);
        row.bound_1k2 = rate_accel(1.0 / min_t, d, row.k);
        row.bound_thm2 = accel ? bound_thm2_final(r.theta, r.t, d) : kNaN;
        const double bound = accel ? row.bound_1k2 : row.bound_1k;
        const double gap = std::max(row.gap, 0.0);
        row.ratio = bound > 0.0 ? gap / bound : (gap <= plan.config.tol.abs ? 0.0 : kNaN);
        table.rows.push_back(row);
    }
    table.fit = fit_tail_slope(gaps_of(trace, p.f_bar.value));
    return table;
}

void write_rate_table(std::ostream& out, const RateTable& table) {
    out << "k,gap,bound_1k,bound_1k2,bound_thm2,ratio\n";
    for (const RateRow& r : table.rows)
        out << r.k << ',' << format_double(r.gap) << ',' << format_double(r.bound_1k) << ','
            << format_double(r.bound_1k2) << ',' << format_double(r.bound_thm2) << ','
            << format_double(r.ratio) << "\n";
}

int cmd_rates(const RunConfig& config, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    std::optional<RunPlan> plan;
    RateTable table;
    try {
        plan = plan_run(config);
        table = rate_table(*plan, execute(*plan));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    std::ostringstream os;
    write_rate_table(os, table);
    try {
        if (out_path.empty()) out << os.str();
        else write_file_atomic(out_path, os.str());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const bool accel = plan->theta_name != "one";
    bool ok = true;
    double worst = 0.0;
    for (const RateRow& r : table.rows) {
        const double bound = accel ? r.bound_1k2 : r.bound_1k;
        if (!(r.gap <= bound + config.tol.at(bound))) ok = false;
        if (!std::isnan(r.ratio)) worst = std::max(worst, r.ratio);
    }
    std::ostream& summary = out_path.empty() ? err : out;
    summary << "max ratio " << format_double(worst) << ", tail exponent "
            << format_double(table.fit.exponent) << " over k=" << table.fit.k_from << ".."
            << table.fit.k_to << "\n";
    return ok ? kExitPass : kExitFail;
}

}  // namespace proxcert
