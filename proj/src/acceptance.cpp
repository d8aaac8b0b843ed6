#include "proxcert/acceptance.hpp"

#include "proxcert/harness.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

namespace proxcert {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

/// Instance seed for the suite: PROXCERT_SEED when set, else the fixed default.
bool default_seed_in_use() {
    const char* s = std::getenv("PROXCERT_SEED");
    return !s || !*s;
}

struct Suite {
    AcceptanceOptions options;
    std::map<std::string, ProblemInstance> problems;
    /// Every proximal-gradient trace produced, for the anchor criterion.
    std::vector<std::pair<std::string, Trace>> alg1_traces;
    Trace lasso_plain, lasso_accel;
    Trace subgrad_trace;
    BoundTolerance tol;

    const ProblemInstance& problem(const std::string& name) {
        auto it = problems.find(name);
        if (it == problems.end()) it = problems.emplace(name, builtin(name)).first;
        return it->second;
    }

    Trace run1(const std::string& name, ThetaSchedule theta, const StepRule& rule, int K) {
        const ProblemInstance& p = problem(name);
        Trace t = run_algorithm1(p.objective, std::move(theta), rule, p.x0, K);
        alg1_traces.emplace_back(name + "/" + t.theta_tag + "/" + t.step_tag, t);
        return t;
    }
};

std::string check_summary(const BoundReport& r, const std::vector<std::string>& names) {
    std::ostringstream os;
    for (const std::string& n : names) {
        const BoundCheck* c = r.find(n);
        if (!c) {
            os << n << " missing; ";
            continue;
        }
        const CheckPoint* w = c->worst();
        os << n << (c->satisfied() ? " ok" : " FAIL");
        if (w) os << " (worst slack " << fmt(w->slack) << " at k=" << w->k << ")";
        os << "; ";
    }
    return os.str();
}

bool all_present_and_satisfied(const BoundReport& r, const std::vector<std::string>& names) {
    for (const std::string& n : names) {
        const BoundCheck* c = r.find(n);
        if (!c || !c->satisfied() || c->points().empty()) return false;
    }
    return true;
}

CriterionResult rate_criterion(Suite& s, int id, const std::string& title, bool accel) {
    CriterionResult res{id, title};
    std::ostringstream detail;
    bool ok = true;
    for (const std::string name : {"boxqp-10", "lasso-20"}) {
        const ProblemInstance& p = s.problem(name);
        const auto t0 = Clock::now();
        Trace tr = s.run1(name, accel ? ThetaSchedule::fista() : ThetaSchedule::constant_one(),
                          FixedStep{1.0 / *p.L}, 1000);
        const BoundReport r = check_rates(tr, p.f_bar.value, p.dist.value, s.tol);
        const double secs = seconds_since(t0);
        const std::string check = accel ? "rate.accel" : "rate.prox_grad";
        const bool cell = all_present_and_satisfied(r, {check}) && r.find(check)->points().size() == 1000;
        ok = ok && cell && secs < 1.0;
        detail << name << ": " << check_summary(r, {check}) << fmt(secs) << " s; ";
        if (name == std::string("lasso-20")) (accel ? s.lasso_accel : s.lasso_plain) = std::move(tr);
    }
    res.passed = ok;
    res.detail = detail.str();
    return res;
}

CriterionResult criterion3(Suite& s) {
    CriterionResult res{3, "FISTA induction identity S_k = 1/(L theta_{k-1}^2) >= (k+1)^2/(4L)"};
    const double L = *s.problem("lasso-20").L;
    const double t = 1.0 / L;
    CertStateThm1 state(LhsMode::case_b, 1);
    ThetaSchedule theta = ThetaSchedule::fista();
    double worst_rel = 0.0, worst_lower = -1.0;
    int bad_k = -1;
    for (int k = 1; k <= 10000; ++k) {
        const double th = theta.current();
        state.update(t, th, Vector::Zero(1), 0.0);
        const double S = state.S();
        const double closed = 1.0 / (L * th * th);
        const double rel = std::abs(S - closed) / closed;
        const double lower = (k + 1.0) * (k + 1.0) / (4.0 * L);
        worst_rel = std::max(worst_rel, rel);
        worst_lower = std::max(worst_lower, (lower - S) / lower);
        if ((rel > 1e-9 || S < lower * (1.0 - 1e-12)) && bad_k < 0) bad_k = k;
        theta.advance();
    }
    res.passed = bad_k < 0;
    res.detail = "max relative error " + fmt(worst_rel) + ", max relative shortfall below (k+1)^2/(4L) " +
                 fmt(worst_lower) + (bad_k >= 0 ? ", first failure at k=" + std::to_string(bad_k) : "");
    return res;
}

CriterionResult criterion5(Suite& s) {
    CriterionResult res{5, "proximal-gradient conjugate chain, cases (a) and (b)"};
    std::ostringstream detail;
    bool ok = true;
    const std::vector<std::string> names{"thm1.conjugate", "thm1.chain", "thm1.distance"};
    for (const std::string name : {"ls-1d", "ls-2d", "lasso-2d", "boxqp-2d"}) {
        const ProblemInstance& p = s.problem(name);
        const CertificateInputs in = certificate_inputs(p, s.tol, 10, 11);
        for (LhsMode mode : {LhsMode::case_a, LhsMode::case_b}) {
            Trace tr = s.run1(name,
                              mode == LhsMode::case_a ? ThetaSchedule::constant_one()
                                                      : ThetaSchedule::fista(),
                              FixedStep{1.0 / *p.L}, 500);
            const BoundReport r = check_thm1(tr, p.objective, mode, in);
            const BoundCheck* conj = r.find("thm1.conjugate");
            const bool cell = all_present_and_satisfied(r, names) && conj->vacuous_count() == 0;
            ok = ok && cell;
            detail << name << (mode == LhsMode::case_a ? " (a) " : " (b) ") << r.fstar_rung << ": "
                   << (cell ? "ok" : check_summary(r, names)) << "; ";
        }
    }
    res.passed = ok;
    res.detail = detail.str();
    return res;
}

CriterionResult criterion6(Suite& s) {
    CriterionResult res{6, "variable-step certificate under monotone backtracking"};
    const ProblemInstance& p = s.problem("lasso-20");
    const int K = 1000;
    Backtracking bt;
    bt.t_init = 10.0 / *p.L;
    bt.shrink = 0.5;
    bt.monotone = true;
    const CertificateInputs in = certificate_inputs(p, s.tol, 0, 0);
    const std::vector<std::string> names{"thm2.rho", "thm2.R_nondecreasing", "thm2.bound",
                                         "thm2.accel_rate"};
    std::ostringstream detail;
    bool ok = true;
    for (const std::string sched : {"fista", "two_over"}) {
        ThetaSchedule theta = make_theta(sched);
        if (s.options.inject_theta_fault && sched == "fista") {
            std::vector<double> values{1.0};
            ThetaSchedule f = ThetaSchedule::fista();
            for (int k = 1; k <= K; ++k) values.push_back(f.advance());
            values[5] *= 0.5;
            theta = ThetaSchedule::custom(values);
        }
        Trace tr = s.run1("lasso-20", std::move(theta), bt, K);
        tr.theta_tag = sched;
        const BoundReport r = check_thm2(tr, p.objective, in);
        const bool cell = r.all_satisfied() && all_present_and_satisfied(r, names);
        ok = ok && cell;
        detail << sched << ": " << (cell ? check_summary(r, names) : describe_outcome(r)) << " ";
    }
    res.passed = ok;
    res.detail = detail.str();
    return res;
}

CriterionResult criterion7(Suite& s) {
    CriterionResult res{7, "subgradient certificate on box-constrained L1 regression"};
    const ProblemInstance& p = s.problem("l1reg-2d");
    const int K = 2000;
    const double c = p.dist.value / *p.L;
    s.subgrad_trace = run_algorithm2(p.objective, p.subgradient, p.x0, sqrt_steps(c, K), K);
    const CertificateInputs in = certificate_inputs(p, s.tol, 10, 13);
    const BoundReport r = check_prop1(s.subgrad_trace, p.objective, in);
    const std::vector<std::string> names{"prop1.conjugate", "prop1.chain", "prop1.distance"};
    res.passed = all_present_and_satisfied(r, names) &&
                 r.find("prop1.conjugate")->points().size() == static_cast<std::size_t>(K);
    res.detail = r.fstar_rung + ": " + check_summary(r, names);
    return res;
}

CriterionResult criterion8(Suite& s) {
    CriterionResult res{8, "projected subgradient rates, Lipschitz and normalized forms"};
    const ProblemInstance& p = s.problem("l1reg-2d");
    const BoundReport r = subgrad_rates(s.subgrad_trace, p.phi_bar(), p.dist.value, p.L, s.tol);
    std::ostringstream detail;
    bool ok = true;
    for (const std::string name : {"subgrad.lipschitz", "subgrad.normalized"}) {
        const BoundCheck* c = r.find(name);
        if (!c) {
            ok = false;
            detail << name << " missing; ";
            continue;
        }
        for (int k : {10, 100, 1000}) {
            const auto& pts = c->points();
            auto it = std::find_if(pts.begin(), pts.end(), [k](const CheckPoint& q) { return q.k == k; });
            if (it == pts.end()) {
                ok = false;
                detail << name << " has no point at k=" << k << "; ";
                continue;
            }
            ok = ok && it->satisfied;
            detail << name << " k=" << k << ": " << fmt(it->lhs) << " <= " << fmt(it->rhs) << "; ";
        }
    }
    res.passed = ok;
    res.detail = detail.str();
    return res;
}

CriterionResult criterion9(Suite& s) {
    CriterionResult res{9, "steepness bound: constant and square-root steepness"};
    const ProblemInstance& p = s.problem("l1reg-2d");
    const double L = *p.L, d = p.dist.value;
    std::vector<double> alpha;
    for (const IterateRecord& r : s.subgrad_trace.records) {
        const double a = r.t * r.g_phi.norm();
        if (a > 0.0) alpha.push_back(a);
    }
    double sa = 0, sa2 = 0;
    for (double a : alpha) {
        sa += a;
        sa2 += a * a;
    }
    const double normalized_rhs = L * (sa2 + d * d) / (2.0 * sa);
    const SteepBound flat = steep_bound([L](double) { return L; }, alpha, d);
    const SteepBound root = steep_bound([](double t) { return std::sqrt(t); }, alpha, d);
    const double rel_flat = std::abs(flat.value - normalized_rhs) / normalized_rhs;
    const double rel_root = std::abs(root.value - root.B * root.B) / (root.B * root.B);
    const double min_gap = running_min_gap(s.subgrad_trace, p.phi_bar()).back();
    res.passed = !flat.capped && !root.capped && rel_flat <= 1e-9 && rel_root <= 1e-9 &&
                 min_gap <= flat.value;
    res.detail = "constant: " + fmt(flat.value) + " vs " + fmt(normalized_rhs) + " (rel " +
                 fmt(rel_flat) + "); sqrt: " + fmt(root.value) + " vs B^2 " + fmt(root.B * root.B) +
                 " (rel " + fmt(rel_root) + "); min gap " + fmt(min_gap);
    return res;
}

double prox_grid_tolerance(const ProxSpec& spec, double h, const Vector& x, const Vector& y) {
    const double n = static_cast<double>(x.size());
    if (std::holds_alternative<ProxL2Ball>(spec)) {
        // The grid argmin inside a curved set can slide along the boundary.
        return std::sqrt(2.0 * h * h * n + 2.0 * h * std::sqrt(n) * (x - y).norm()) + 1e-12;
    }
    return h * std::sqrt(n) + 1e-12;
}

CriterionResult criterion10(Suite& s) {
    (void)s;
    CriterionResult res{10, "prox operators against brute force, Fenchel-Young equality"};
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.2, 1.5);
    GridSpec grid{Vector::Constant(2, -3.0), Vector::Constant(2, 3.0), 601};
    const double h = grid.spacing();
    Vector lo(2), hi(2), center(2);
    lo << -1.0, -0.4;
    hi << 0.5, 1.2;
    center << 0.3, -0.2;
    const std::vector<std::pair<std::string, ProxSpec>> specs{
        {"zero", ProxZero{}},          {"l1", ProxL1{0.7}},
        {"sq_l2", ProxSqL2{1.3}},      {"box", ProxBox{lo, hi}},
        {"l2_ball", ProxL2Ball{1.1, center}}};
    std::ostringstream detail;
    bool ok = true;
    for (const auto& [name, spec] : specs) {
        const ProxOracle psi = make_prox_oracle(spec);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            Vector x(2);
            x << 2.5 * U(rng), 2.5 * U(rng);
            const double t = pos(rng);
            const Vector a = psi.prox(t, x);
            const Vector b = brute_force_prox(psi.value, t, x, grid);
            const double err = (a - b).lpNorm<Eigen::Infinity>();
            const double tol = prox_grid_tolerance(spec, h, x, a);
            worst = std::max(worst, err / tol);
        }
        ok = ok && worst <= 1.0;
        detail << name << " worst err/tol " << fmt(worst) << "; ";
    }

    // Fenchel-Young equality at subgradient pairs for each analytic conjugate.
    double worst_fy = 0.0;
    auto fy = [&](const std::function<ExtReal(const Vector&)>& hf,
                  const std::function<ExtReal(const Vector&)>& hs, const Vector& z, const Vector& x) {
        worst_fy = std::max(worst_fy, std::abs(fenchel_young_gap(hf, hs, z, x)));
    };
    for (const auto& [name, spec] : specs) {
        const ProxOracle psi = make_prox_oracle(spec);
        const ConjugateOracle conj = make_prox_conjugate(spec);
        for (int i = 0; i < 50; ++i) {
            Vector x(2), z(2);
            x << 2.0 * U(rng), 2.0 * U(rng);
            if (name == "zero") {
                z.setZero();
            } else if (name == "l1") {
                for (int j = 0; j < 2; ++j) z[j] = 0.7 * (x[j] > 0 ? 1.0 : -1.0);
                if (i % 5 == 0) {
                    x[0] = 0.0;
                    z[0] = 0.7 * U(rng);
                }
            } else if (name == "sq_l2") {
                z = 1.3 * x;
            } else if (name == "box") {
                z << U(rng), U(rng);
                for (int j = 0; j < 2; ++j) x[j] = z[j] > 0 ? hi[j] : (z[j] < 0 ? lo[j] : x[j]);
            } else {
                Vector dir(2);
                dir << U(rng), U(rng);
                if (dir.norm() == 0.0) dir << 1.0, 0.0;
                // Just inside the sphere so rounding cannot leave the ball.
                x = center + 1.1 * (1.0 - 1e-14) * dir.normalized();
                z = pos(rng) * (x - center);
            }
            fy(psi.value, conj.conj_value, z, x);
        }
    }
    for (const std::string name : {"ls-2d", "boxqp-10"}) {
        const ProblemInstance& p = s.problem(name);
        const ConjugateOracle& pc = *p.objective.phi_conjugate;
        auto phi_val = [&p](const Vector& x) { return ExtReal(p.objective.phi().value(x)); };
        for (int i = 0; i < 50; ++i) {
            Vector x(p.objective.dim());
            for (Index j = 0; j < x.size(); ++j) x[j] = U(rng);
            fy(phi_val, pc.conj_value, p.objective.phi().gradient(x), x);
        }
    }
    const bool fy_ok = worst_fy <= 1e-8;
    ok = ok && fy_ok;
    detail << "Fenchel-Young worst |gap| " << fmt(worst_fy);
    res.passed = ok;
    res.detail = detail.str();
    return res;
}

CriterionResult criterion11(Suite& s) {
    CriterionResult res{11, "fixed-step FISTA: variable-step state equals case (b) state"};
    const ProblemInstance& p = s.problem("lasso-20");
    const Trace& tr = s.lasso_accel;
    CertStateThm1 a(LhsMode::case_b, p.objective.dim());
    CertStateThm2 b(p.objective.dim());
    double worst_z = 0.0, worst_R = 0.0;
    for (const IterateRecord& r : tr.records) {
        a.update(r.t, r.theta, r.g, r.f_x_next);
        b.update(r.t, r.theta, r.g);
        worst_z = std::max(worst_z, (a.z() - b.z()).lpNorm<Eigen::Infinity>());
        worst_R = std::max(worst_R, std::abs(b.R() - 1.0));
    }
    res.passed = !tr.records.empty() && worst_z <= 1e-10 && worst_R <= 1e-12;
    res.detail = "max |z1 - z2| " + fmt(worst_z) + ", max |R - 1| " + fmt(worst_R) + " over " +
                 std::to_string(tr.records.size()) + " steps";
    return res;
}

CriterionResult criterion12(Suite& s) {
    CriterionResult res{12, "acceleration regression: tail log-log slopes on lasso-20"};
    const ProblemInstance& p = s.problem("lasso-20");
    const RateFit accel = fit_tail_slope(gaps_of(s.lasso_accel, p.f_bar.value));
    const RateFit plain = fit_tail_slope(gaps_of(s.lasso_plain, p.f_bar.value));
    bool ok = accel.exponent <= -1.5 && plain.exponent >= -1.6 && plain.exponent <= -0.7;
    std::string note;
    if (default_seed_in_use()) {
        ok = ok && std::abs(accel.exponent - kBaselineAccelSlope) <= kBaselineTolerance &&
             std::abs(plain.exponent - kBaselinePlainSlope) <= kBaselineTolerance;
        note = " (baselines " + fmt(kBaselineAccelSlope) + ", " + fmt(kBaselinePlainSlope) + ")";
    } else {
        note = " (PROXCERT_SEED set: baseline comparison skipped)";
    }
    res.passed = ok;
    res.detail = "accelerated " + fmt(accel.exponent) + ", plain " + fmt(plain.exponent) + note;
    return res;
}

CriterionResult criterion4(Suite& s) {
    CriterionResult res{4, "anchor identity on every proximal-gradient run"};
    double worst = 0.0;
    std::string where;
    bool ok = !s.alg1_traces.empty();
    for (const auto& [name, tr] : s.alg1_traces) {
        Trace head = tr;
        if (head.records.size() > 1001) head.records.resize(1001);
        const BoundReport r = check_anchor(head, 1e-8);
        const BoundCheck* c = r.find("anchor");
        if (!c) continue;
        const CheckPoint* w = c->worst();
        if (w && w->lhs > worst) {
            worst = w->lhs;
            where = name + " k=" + std::to_string(w->k);
        }
        ok = ok && c->satisfied();
    }
    res.passed = ok;
    res.detail = std::to_string(s.alg1_traces.size()) + " runs, max residual " + fmt(worst) +
                 (where.empty() ? "" : " at " + where);
    return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    Suite s;
    s.options = options;
    std::vector<CriterionResult> out(12);
    auto timed = [&](int id, const std::function<CriterionResult()>& fn) {
        const auto t0 = Clock::now();
        try {
            out[static_cast<std::size_t>(id - 1)] = fn();
        } catch (const std::exception& e) {
            out[static_cast<std::size_t>(id - 1)] = CriterionResult{id, "criterion " + std::to_string(id), false,
                                                   std::string("exception: ") + e.what()};
        }
        out[static_cast<std::size_t>(id - 1)].seconds = seconds_since(t0);
    };
    // Order matters: later criteria reuse traces from earlier ones.
    timed(1, [&] { return rate_criterion(s, 1, "proximal-gradient O(1/k) rate", false); });
    timed(2, [&] { return rate_criterion(s, 2, "accelerated O(1/k^2) rate", true); });
    timed(3, [&] { return criterion3(s); });
    timed(5, [&] { return criterion5(s); });
    timed(6, [&] { return criterion6(s); });
    timed(7, [&] { return criterion7(s); });
    timed(8, [&] { return criterion8(s); });
    timed(9, [&] { return criterion9(s); });
    timed(10, [&] { return criterion10(s); });
    timed(11, [&] { return criterion11(s); });
    timed(12, [&] { return criterion12(s); });
    timed(4, [&] { return criterion4(s); });
    return out;
}

std::string acceptance_json(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json j;
    bool all = true;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const CriterionResult& r : results) {
        all = all && r.passed;
        arr.push_back({{"id", r.id},
                       {"title", r.title},
                       {"passed", r.passed},
                       {"detail", r.detail},
                       {"seconds", r.seconds}});
    }
    j["criteria"] = arr;
    j["passed"] = all;
    return j.dump(2) + "\n";
}

}  // namespace proxcert
