#include "proxcert/certificates.hpp"

#include "proxcert/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace proxcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> probe_values(const CompositeObjective& obj, const std::vector<Vector>& probes) {
    std::vector<double> out;
    out.reserve(probes.size());
    for (const Vector& p : probes) out.push_back(obj.f(p).raw());
    return out;
}

double min_distance_rhs(double S, const std::vector<Vector>& probes,
                        const std::vector<double>& values, const Vector& x0) {
    double best = kInf;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (std::isinf(values[i])) continue;
        best = std::min(best, rhs_distance(S, probes[i], values[i], x0));
    }
    return best;
}

void require_algorithm(const Trace& trace, AlgorithmKind kind, const char* where) {
    if (trace.algorithm != kind)
        throw std::invalid_argument(std::string(where) + ": trace comes from the wrong algorithm");
}

}  // namespace

double BoundTolerance::at(double rhs) const {
    return std::isfinite(rhs) ? std::max(abs, rel * std::abs(rhs)) : abs;
}

void BoundCheck::add(int k, double lhs, double rhs, double tol) {
    CheckPoint p;
    p.k = k;
    p.lhs = lhs;
    p.rhs = rhs;
    p.vacuous = rhs == kInf;
    p.slack = p.vacuous ? kInf : rhs - lhs;
    p.satisfied = p.vacuous || (!std::isnan(lhs) && !std::isnan(rhs) && lhs <= rhs + tol);
    points_.push_back(p);
}

bool BoundCheck::satisfied() const {
    return std::all_of(points_.begin(), points_.end(), [](const CheckPoint& p) { return p.satisfied; });
}

const CheckPoint* BoundCheck::worst() const {
    const CheckPoint* w = nullptr;
    for (const CheckPoint& p : points_) {
        if (!w || p.slack < w->slack || (std::isnan(p.slack) && !std::isnan(w->slack))) w = &p;
    }
    return w;
}

const CheckPoint* BoundCheck::first_violation() const {
    for (const CheckPoint& p : points_)
        if (!p.satisfied) return &p;
    return nullptr;
}

int BoundCheck::vacuous_count() const {
    return static_cast<int>(
        std::count_if(points_.begin(), points_.end(), [](const CheckPoint& p) { return p.vacuous; }));
}

bool BoundReport::all_satisfied() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.satisfied(); });
}

const BoundCheck* BoundReport::find(const std::string& name) const {
    for (const BoundCheck& c : checks)
        if (c.name() == name) return &c;
    return nullptr;
}

const BoundCheck* BoundReport::first_failure() const {
    for (const BoundCheck& c : checks)
        if (!c.satisfied()) return &c;
    return nullptr;
}

void BoundReport::merge(BoundReport other) {
    for (auto& h : other.hypotheses)
        if (std::find(hypotheses.begin(), hypotheses.end(), h) == hypotheses.end())
            hypotheses.push_back(std::move(h));
    if (fstar_rung == "none") fstar_rung = other.fstar_rung;
    for (auto& c : other.checks) checks.push_back(std::move(c));
    if (rows.empty()) rows = std::move(other.rows);
    for (auto& n : other.notes) notes.push_back(std::move(n));
}

// --- dual sequences -------------------------------------------------------

CertStateThm1::CertStateThm1(LhsMode mode, Index dim)
    : mode_(mode), weighted_g_(Vector::Zero(dim)), z_(Vector::Zero(dim)) {}

void CertStateThm1::update(double t, double theta, const Vector& g, double f_next) {
    if (!(t > 0.0)) throw std::invalid_argument("CertStateThm1: step must be positive");
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("CertStateThm1: theta must lie in (0, 1]");
    require_same_dim(weighted_g_, g, "CertStateThm1");
    if (mode_ == LhsMode::case_a && theta != 1.0)
        throw HypothesisError("thm1 case (a) needs theta_k = 1, violated at k = " +
                              std::to_string(k_));

    const double w = t / theta;
    const double S_next = S_ + w;
    if (mode_ == LhsMode::case_b && std::abs(S_ - (1.0 - theta) * S_next) > 1e-9 * S_next)
        throw HypothesisError(
            "thm1 case (b) needs sum_{i<k} t_i/theta_i = (1 - theta_k) sum_{i<=k} t_i/theta_i, "
            "violated at k = " + std::to_string(k_));

    gamma_ = w / S_next;
    weighted_g_ += w * g;
    S_ = S_next;
    z_ = weighted_g_ / S_;
    ++k_;

    if (mode_ == LhsMode::case_a) {
        sum_t_ += t;
        sum_tf_ += t * f_next;
        lhs_ = sum_tf_ / sum_t_;
    } else {
        lhs_ = f_next;
    }
}

CertStateThm2::CertStateThm2(Index dim)
    : z_(Vector::Zero(dim)), weighted_g_(Vector::Zero(dim)) {}

void CertStateThm2::update(double t, double theta, const Vector& g) {
    if (!(t > 0.0)) throw std::invalid_argument("CertStateThm2: step must be positive");
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("CertStateThm2: theta must lie in (0, 1]");
    require_same_dim(z_, g, "CertStateThm2");

    if (k_ == 0) {
        if (theta != 1.0) throw HypothesisError("thm2 needs theta_0 = 1");
        z_ = g;
        mu_ = 1.0 / t;
        R_ = 1.0;
        rho_ = 1.0;
    } else {
        const std::string at = " at k = " + std::to_string(k_);
        if (!validate_theta_pair(theta_prev_, theta))
            throw HypothesisError("thm2 hypothesis violated: validate_theta_pair(theta_{k-1}, "
                                  "theta_k) fails" + at);
        if (t > t_prev_ * (1.0 + 1e-12))
            throw HypothesisError("thm2 hypothesis violated: step sizes must be non-increasing" + at);
        if (theta == 1.0)
            throw HypothesisError("thm2 needs theta_k < 1 for k >= 1 (rho_k is unbounded)" + at);
        // rho_k (1 - theta_k), kept separate so theta_k near 1 does not divide by ~0.
        const double factor = (t_prev_ / t) * (theta * theta) / (theta_prev_ * theta_prev_);
        const double rho = factor / (1.0 - theta);
        if (rho < 1.0 - 1e-12)
            throw HypothesisError("thm2 hypothesis violated: rho_k = " + std::to_string(rho) +
                                  " < 1" + at);
        z_ = factor * z_ + theta * g;
        mu_ *= factor;
        R_ *= rho;
        rho_ = rho;
    }
    weighted_g_ += (t / theta) * g;
    t_prev_ = t;
    theta_prev_ = theta;
    ++k_;
}

Vector CertStateThm2::z_by_definition() const {
    if (k_ == 0) return weighted_g_;
    return (theta_prev_ * theta_prev_ / t_prev_) * weighted_g_;
}

// --- bound evaluators -----------------------------------------------------

double rhs_thm1(const CertStateThm1& state, const ConjugateOracle& fstar, const Vector& x0) {
    if (state.k() == 0) throw std::invalid_argument("rhs_thm1: certificate has no iterates yet");
    const ExtReal fz = fstar.conj_value(state.z());
    if (fz.is_infinite()) return kInf;
    return -fz.value() + inner(state.z(), x0) - 0.5 * state.S() * state.z().squaredNorm();
}

double rhs_thm2(const CertStateThm2& state, const ConjugateOracle& fstar, double f_bar,
                const Vector& x0) {
    if (state.k() == 0) throw std::invalid_argument("rhs_thm2: certificate has no iterates yet");
    const double R = state.R();
    const ExtReal fz = fstar.conj_value(state.z() / R);
    if (fz.is_infinite()) return kInf;
    return -R * (fz.value() + f_bar) + inner(state.z(), x0) -
           state.z().squaredNorm() / (2.0 * state.mu());
}

double rhs_distance(double S, const Vector& x_ref, double f_ref, const Vector& x0) {
    if (!(S > 0.0)) throw std::invalid_argument("rhs_distance: S must be positive");
    return f_ref + (x_ref - x0).squaredNorm() / (2.0 * S);
}

double rate_prox_grad(double L, double dist, int k) {
    if (k < 1) throw std::invalid_argument("rate_prox_grad: k must be at least 1");
    return L * dist * dist / (2.0 * k);
}

double rate_accel(double L, double dist, int k) {
    if (k < 1) throw std::invalid_argument("rate_accel: k must be at least 1");
    const double kp1 = static_cast<double>(k) + 1.0;
    return 2.0 * L * dist * dist / (kp1 * kp1);
}

double bound_thm2_final(double theta_prev, double t_prev, double dist) {
    if (!(theta_prev > 0.0 && theta_prev <= 1.0))
        throw std::invalid_argument("bound_thm2_final: theta must lie in (0, 1]");
    if (!(t_prev > 0.0)) throw std::invalid_argument("bound_thm2_final: t must be positive");
    return theta_prev * theta_prev * dist * dist / (2.0 * t_prev);
}

// --- hypotheses -----------------------------------------------------------

std::vector<std::string> RunHypotheses::tags() const {
    std::vector<std::string> out;
    if (decrease) out.emplace_back("decrease");
    if (thm1_case_a()) out.emplace_back("thm1_case_a");
    if (thm1_case_b()) out.emplace_back("thm1_case_b");
    if (thm2()) out.emplace_back("thm2");
    return out;
}

RunHypotheses assess_hypotheses(const Trace& trace) {
    require_algorithm(trace, AlgorithmKind::prox_gradient, "assess_hypotheses");
    RunHypotheses h;
    double S = 0.0;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const IterateRecord& r = trace.records[i];
        h.decrease = h.decrease && r.decrease_ok;
        h.theta_one = h.theta_one && r.theta == 1.0;
        if (i == 0) h.theta0_one = r.theta == 1.0;
        if (i > 0) {
            const IterateRecord& p = trace.records[i - 1];
            if (!validate_theta_pair(p.theta, r.theta)) {
                if (h.theta_pairs) h.first_bad_theta_pair = r.k;
                h.theta_pairs = false;
            }
            if (r.theta == 1.0) h.theta_below_one = false;
            if (r.t > p.t * (1.0 + 1e-12)) h.steps_nonincreasing = false;
        }
        const double S_next = S + r.t / r.theta;
        if (std::abs(S - (1.0 - r.theta) * S_next) > 1e-9 * S_next) h.partial_sums = false;
        S = S_next;
    }
    return h;
}

// --- trace checks ---------------------------------------------------------

BoundReport check_thm1(const Trace& trace, const CompositeObjective& obj, LhsMode mode,
                       const CertificateInputs& in) {
    require_algorithm(trace, AlgorithmKind::prox_gradient, "check_thm1");
    BoundReport report;
    report.hypotheses = assess_hypotheses(trace).tags();
    if (in.fstar) report.fstar_rung = to_string(in.fstar->kind);

    BoundCheck conj("thm1.conjugate"), chain("thm1.chain"), dist("thm1.distance"),
        optimal("thm1.optimal");
    const std::vector<double> pvals = probe_values(obj, in.probes);
    const bool have_opt = in.f_bar && in.dist;

    CertStateThm1 state(mode, obj.dim());
    int vacuous = 0;
    for (const IterateRecord& r : trace.records) {
        state.update(r.t, r.theta, r.g, r.f_x_next);
        const int j = r.k + 1;
        CertificateRow row;
        row.k = j;
        row.lhs = state.lhs();
        row.S = state.S();

        if (in.fstar) {
            const double rc = rhs_thm1(state, *in.fstar, trace.x0);
            row.rhs_conj = rc;
            conj.add(j, row.lhs, rc, in.tol);
            if (std::isinf(rc)) ++vacuous;
            if (!in.probes.empty() && std::isfinite(rc)) {
                const double m = min_distance_rhs(state.S(), in.probes, pvals, trace.x0);
                chain.add(j, rc, m, in.tol);
            }
        }
        if (!in.probes.empty())
            dist.add(j, row.lhs, min_distance_rhs(state.S(), in.probes, pvals, trace.x0), in.tol);
        if (have_opt) {
            const double d2 = *in.dist * *in.dist;
            row.rhs_dist = *in.f_bar + d2 / (2.0 * state.S());
            optimal.add(j, r.f_x_next - *in.f_bar, d2 / (2.0 * state.S()), in.tol);
        }
        report.rows.push_back(row);
    }
    if (vacuous > 0)
        report.notes.push_back("thm1.conjugate: " + std::to_string(vacuous) +
                               " iterates with f*(z_k) = +inf treated as vacuous");
    for (BoundCheck* c : {&conj, &chain, &dist, &optimal})
        if (!c->points().empty()) report.checks.push_back(std::move(*c));
    return report;
}

BoundReport check_thm2(const Trace& trace, const CompositeObjective& obj,
                       const CertificateInputs& in) {
    require_algorithm(trace, AlgorithmKind::prox_gradient, "check_thm2");
    BoundReport report;
    const RunHypotheses hyp = assess_hypotheses(trace);
    report.hypotheses = hyp.tags();
    if (in.fstar) report.fstar_rung = to_string(in.fstar->kind);

    BoundCheck theta0("thm2.theta0_one"), pairs("thm2.validate_theta_pair"),
        below("thm2.theta_below_one"), steps("thm2.steps_nonincreasing"), dec("thm2.decrease");
    const auto& recs = trace.records;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const IterateRecord& r = recs[i];
        dec.add(r.k, -r.decrease_margin, 0.0,
                1e-12 * (1.0 + std::abs(r.phi_y) + std::abs(r.f_x_next)));
        if (i == 0) {
            theta0.add(0, std::abs(r.theta - 1.0), 0.0, 0.0);
            continue;
        }
        const IterateRecord& p = recs[i - 1];
        pairs.add(r.k, p.theta * p.theta * (1.0 - r.theta), r.theta * r.theta, 1e-12);
        below.add(r.k, r.theta, 1.0, -std::numeric_limits<double>::min());
        steps.add(r.k, r.t, p.t, 1e-12 * p.t);
    }
    for (BoundCheck* c : {&theta0, &pairs, &below, &steps, &dec})
        if (!c->points().empty()) report.checks.push_back(std::move(*c));
    if (!hyp.thm2()) {
        report.notes.push_back("thm2 hypotheses do not hold; bound checks skipped");
        return report;
    }

    BoundCheck rho("thm2.rho"), rmono("thm2.R_nondecreasing"), bound("thm2.bound"),
        conj("thm2.conjugate"), accel("thm2.accel_rate");
    const bool have_opt = in.f_bar && in.dist;
    const bool accel_schedule = trace.theta_tag == "fista" || trace.theta_tag == "two_over";

    CertStateThm2 state(obj.dim());
    double min_t = std::numeric_limits<double>::infinity();
    for (const IterateRecord& r : recs) {
        const double R_prev = state.R();
        state.update(r.t, r.theta, r.g);
        min_t = std::min(min_t, r.t);
        const int j = r.k + 1;
        if (r.k > 0) {
            rho.add(r.k, 1.0 - 1e-12, state.rho(), 0.0);
            rmono.add(j, R_prev, state.R(), 1e-12 * R_prev);
        }
        CertificateRow row;
        row.k = j;
        row.S = 1.0 / state.mu();
        row.R = state.R();
        if (have_opt) {
            const double gap = r.f_x_next - *in.f_bar;
            row.lhs = gap;
            row.rhs_dist = bound_thm2_final(r.theta, r.t, *in.dist);
            bound.add(j, gap, row.rhs_dist, in.tol);
            if (in.fstar) {
                row.rhs_conj = rhs_thm2(state, *in.fstar, *in.f_bar, trace.x0);
                conj.add(j, gap, row.rhs_conj, in.tol);
            }
            if (accel_schedule) accel.add(j, gap, rate_accel(1.0 / min_t, *in.dist, j), in.tol);
        }
        report.rows.push_back(row);
    }
    for (BoundCheck* c : {&rho, &rmono, &bound, &conj, &accel})
        if (!c->points().empty()) report.checks.push_back(std::move(*c));
    return report;
}

BoundReport check_rates(const Trace& trace, double f_bar, double dist, const BoundTolerance& tol) {
    require_algorithm(trace, AlgorithmKind::prox_gradient, "check_rates");
    BoundReport report;
    const RunHypotheses hyp = assess_hypotheses(trace);
    report.hypotheses = hyp.tags();
    const bool accel_schedule = trace.theta_tag == "fista" || trace.theta_tag == "two_over";

    BoundCheck plain("rate.prox_grad"), accel("rate.accel");
    double min_t = std::numeric_limits<double>::infinity();
    for (const IterateRecord& r : trace.records) {
        min_t = std::min(min_t, r.t);
        const int j = r.k + 1;
        const double gap = r.f_x_next - f_bar;
        if (hyp.thm1_case_a()) plain.add(j, gap, rate_prox_grad(1.0 / min_t, dist, j), tol);
        if (accel_schedule && (hyp.thm1_case_b() || hyp.thm2()))
            accel.add(j, gap, rate_accel(1.0 / min_t, dist, j), tol);
    }
    if (plain.points().empty() && accel.points().empty())
        report.notes.push_back("rates: no rate corollary applies to this run");
    for (BoundCheck* c : {&plain, &accel})
        if (!c->points().empty()) report.checks.push_back(std::move(*c));
    return report;
}

BoundReport check_anchor(const Trace& trace, double limit) {
    require_algorithm(trace, AlgorithmKind::prox_gradient, "check_anchor");
    BoundReport report;
    BoundCheck anchor("anchor");
    Vector rhs = trace.x0;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const IterateRecord& r = trace.records[i];
        if (i > 0) {
            const Vector lhs = (r.y - (1.0 - r.theta) * r.x) / r.theta;
            anchor.add(r.k, (lhs - rhs).lpNorm<Eigen::Infinity>(), limit, 0.0);
        }
        rhs -= (r.t / r.theta) * r.g;
    }
    if (!anchor.points().empty()) report.checks.push_back(std::move(anchor));
    return report;
}

BoundReport check_prop1(const Trace& trace, const CompositeObjective& obj,
                        const CertificateInputs& in) {
    require_algorithm(trace, AlgorithmKind::prox_subgradient, "check_prop1");
    BoundReport report;
    report.hypotheses.emplace_back("prop1");
    if (in.fstar) report.fstar_rung = to_string(in.fstar->kind);

    BoundCheck conj("prop1.conjugate"), chain("prop1.chain"), dist("prop1.distance"),
        optimal("prop1.optimal");
    const std::vector<double> pvals = probe_values(obj, in.probes);

    double sum_t = 0.0, sum_tv = 0.0, sum_t2g2 = 0.0;
    Vector sum_tg = Vector::Zero(obj.dim());
    for (const IterateRecord& r : trace.records) {
        if (r.g_phi.size() != obj.dim())
            throw std::invalid_argument("check_prop1: record " + std::to_string(r.k) +
                                        " has no phi subgradient");
        sum_t += r.t;
        sum_tv += r.t * (r.phi_y + r.psi_next);
        sum_t2g2 += r.t * r.t * r.g_phi.squaredNorm();
        sum_tg += r.t * r.g;

        CertificateRow row;
        row.k = r.k;
        row.lhs = (sum_tv - 0.5 * sum_t2g2) / sum_t;
        row.S = sum_t;
        if (in.fstar) {
            const Vector z = sum_tg / sum_t;
            const ExtReal fz = in.fstar->conj_value(z);
            row.rhs_conj = fz.is_infinite()
                               ? kInf
                               : -fz.value() + inner(z, trace.x0) - 0.5 * sum_t * z.squaredNorm();
            conj.add(r.k, row.lhs, row.rhs_conj, in.tol);
            if (!in.probes.empty() && std::isfinite(row.rhs_conj))
                chain.add(r.k, row.rhs_conj, min_distance_rhs(sum_t, in.probes, pvals, trace.x0),
                          in.tol);
        }
        if (!in.probes.empty())
            dist.add(r.k, row.lhs, min_distance_rhs(sum_t, in.probes, pvals, trace.x0), in.tol);
        if (in.f_bar && in.dist) {
            row.rhs_dist = *in.f_bar + *in.dist * *in.dist / (2.0 * sum_t);
            optimal.add(r.k, row.lhs, row.rhs_dist, in.tol);
        }
        report.rows.push_back(row);
    }
    for (BoundCheck* c : {&conj, &chain, &dist, &optimal})
        if (!c->points().empty()) report.checks.push_back(std::move(*c));
    return report;
}

std::vector<double> running_min_gap(const Trace& trace, double phi_bar) {
    std::vector<double> out;
    out.reserve(trace.records.size());
    double best = kInf;
    for (const IterateRecord& r : trace.records) {
        best = std::min(best, r.phi_y - phi_bar);
        out.push_back(best);
    }
    return out;
}

BoundReport subgrad_rates(const Trace& trace, double phi_bar, double dist,
                          std::optional<double> L, const BoundTolerance& tol) {
    require_algorithm(trace, AlgorithmKind::prox_subgradient, "subgrad_rates");
    BoundReport report;
    report.hypotheses.emplace_back("prop1");
    BoundCheck weighted("subgrad.weighted"), lipschitz("subgrad.lipschitz"),
        normalized("subgrad.normalized");
    const double d2 = dist * dist;
    const std::vector<double> min_gap = running_min_gap(trace, phi_bar);

    double sum_t = 0.0, sum_tgap = 0.0, sum_t2g2 = 0.0, sum_t2 = 0.0, sum_a = 0.0, sum_a2 = 0.0;
    bool zero_seen = false;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const IterateRecord& r = trace.records[i];
        const double gn = r.g_phi.norm();
        sum_t += r.t;
        sum_t2 += r.t * r.t;
        sum_tgap += r.t * (r.phi_y - phi_bar);
        sum_t2g2 += r.t * r.t * gn * gn;
        weighted.add(r.k, sum_tgap, 0.5 * (sum_t2g2 + d2), tol);
        if (!L) continue;
        lipschitz.add(r.k, min_gap[i], (sum_t2 * *L * *L + d2) / (2.0 * sum_t), tol);
        if (gn == 0.0 && !zero_seen) {
            zero_seen = true;
            report.notes.push_back("subgrad.normalized: zero subgradient at k = " +
                                   std::to_string(r.k) + " (early optimality)");
        }
        if (zero_seen) continue;
        const double alpha = r.t * gn;
        sum_a += alpha;
        sum_a2 += alpha * alpha;
        normalized.add(r.k, min_gap[i], *L * (sum_a2 + d2) / (2.0 * sum_a), tol);
    }
    for (BoundCheck* c : {&weighted, &lipschitz, &normalized})
        if (!c->points().empty()) report.checks.push_back(std::move(*c));
    return report;
}

SteepBound steep_bound(const std::function<double(double)>& steepness,
                       std::span<const double> alpha, double dist, double t_max) {
    if (alpha.empty()) throw std::invalid_argument("steep_bound: empty step list");
    if (!(dist >= 0.0)) throw std::invalid_argument("steep_bound: dist must be non-negative");
    if (!(t_max > 0.0)) throw std::invalid_argument("steep_bound: t_max must be positive");
    double sa = 0.0, sa2 = 0.0;
    for (double a : alpha) {
        if (!(a > 0.0)) throw std::invalid_argument("steep_bound: alpha_i must be positive");
        sa += a;
        sa2 += a * a;
    }
    SteepBound out;
    out.B = (sa2 + dist * dist) / (2.0 * sa);

    auto ratio = [&](double t) {
        if (t == 0.0) return 0.0;
        const double s = steepness(t);
        if (!(s > 0.0)) throw std::invalid_argument("steep_bound: steepness must be positive for t > 0");
        return t / s;
    };

    constexpr int kSamples = 1000;
    bool monotone = true;
    double prev = ratio(0.0);
    for (int j = 1; j <= kSamples; ++j) {
        const double r = ratio(t_max * j / kSamples);
        if (r < prev - 1e-12 * std::abs(prev)) monotone = false;
        prev = r;
    }

    if (monotone) {
        out.bisection = true;
        if (ratio(t_max) <= out.B) {
            out.value = t_max;
            out.capped = true;
            return out;
        }
        double lo = 0.0, hi = t_max;
        for (int it = 0; it < 2000 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (ratio(mid) <= out.B ? lo : hi) = mid;
        }
        out.value = lo;
        return out;
    }

    out.bisection = false;
    constexpr int kScan = 1000000;
    double best = 0.0;
    for (int j = 1; j <= kScan; ++j) {
        const double t = t_max * j / kScan;
        if (ratio(t) <= out.B) best = t;
    }
    out.value = best;
    out.capped = best == t_max;
    return out;
}

}  // namespace proxcert
