#include "proxcert/solver.hpp"

#include <cmath>
#include <sstream>

namespace proxcert {

std::string to_string(AlgorithmKind kind) {
    return kind == AlgorithmKind::prox_gradient ? "algorithm1" : "algorithm2";
}

namespace {

void require_dim(const CompositeObjective& obj, const Vector& x, const char* where) {
    if (x.size() != obj.dim())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

void fill_values(const CompositeObjective& obj, IterateRecord& rec) {
    rec.phi_y = obj.phi().value(rec.y);
    const ExtReal psi_next = obj.psi().value(rec.x_next);
    rec.psi_next = psi_next.raw();
    rec.f_x_next = obj.phi().value(rec.x_next) + rec.psi_next;
    rec.f_y = obj.f(rec.y).raw();
}

}  // namespace

StepResult prox_grad_step(const CompositeObjective& obj, const Vector& y, double t) {
    require_dim(obj, y, "prox_grad_step");
    if (!(t > 0.0)) throw std::invalid_argument("prox_grad_step: t must be positive");
    StepResult out;
    out.g_phi = obj.phi().gradient(y);
    out.x_next = obj.psi().prox(t, y - t * out.g_phi);
    out.g = (y - out.x_next) / t;
    out.g_psi = out.g - out.g_phi;
    return out;
}

Vector momentum_update(const Vector& x_next, const Vector& x, double theta, double theta_next) {
    require_same_dim(x_next, x, "momentum_update");
    if (!(theta > 0.0 && theta <= 1.0) || !(theta_next > 0.0 && theta_next <= 1.0))
        throw std::invalid_argument("momentum_update: theta values must lie in (0, 1]");
    const double beta = theta_next * (1.0 - theta) / theta;
    if (beta == 0.0) return x_next;
    return x_next + beta * (x_next - x);
}

Trace run_algorithm1(const CompositeObjective& obj, ThetaSchedule theta, const StepRule& steps,
                     const Vector& x0, int K) {
    require_dim(obj, x0, "run_algorithm1");
    if (K < 1) throw std::invalid_argument("run_algorithm1: K must be at least 1");
    validate(steps);

    Trace trace;
    trace.algorithm = AlgorithmKind::prox_gradient;
    trace.theta_tag = theta.name();
    trace.step_tag = describe(steps);
    trace.x0 = x0;
    trace.records.reserve(static_cast<std::size_t>(K));

    Vector x = x0;
    Vector y = x0;
    std::optional<double> t_prev;
    for (int k = 0; k < K; ++k) {
        IterateRecord rec;
        rec.k = k;
        rec.theta = theta.current();
        rec.x = x;
        rec.y = y;

        if (const auto* fixed = std::get_if<FixedStep>(&steps)) {
            rec.t = fixed->t;
            StepResult s = prox_grad_step(obj, y, rec.t);
            rec.x_next = std::move(s.x_next);
            rec.g = std::move(s.g);
            rec.g_phi = std::move(s.g_phi);
            rec.g_psi = std::move(s.g_psi);
        } else {
            const auto& bt = std::get<Backtracking>(steps);
            BacktrackResult b = backtrack(obj.phi(), obj.psi(), y, bt, t_prev);
            rec.t = b.t;
            rec.x_next = std::move(b.x_next);
            rec.g_phi = obj.phi().gradient(y);
            rec.g = (y - rec.x_next) / rec.t;
            rec.g_psi = rec.g - rec.g_phi;
        }
        t_prev = rec.t;
        rec.decrease_margin = decrease_margin(obj.phi(), y, rec.x_next, rec.t);
        rec.decrease_ok = decrease_holds(obj.phi(), obj.psi(), y, rec.x_next, rec.t);
        fill_values(obj, rec);

        const double theta_next = theta.advance();
        y = momentum_update(rec.x_next, x, rec.theta, theta_next);
        x = rec.x_next;
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

StepResult prox_subgrad_step(const CompositeObjective& obj, const Subgradient& subgrad,
                             const Vector& x, double t) {
    require_dim(obj, x, "prox_subgrad_step");
    if (!(t > 0.0)) throw std::invalid_argument("prox_subgrad_step: t must be positive");
    StepResult out;
    out.g_phi = subgrad(x);
    out.x_next = obj.psi().prox(t, x - t * out.g_phi);
    out.g = (x - out.x_next) / t;
    out.g_psi = out.g - out.g_phi;
    return out;
}

ExplicitSteps constant_steps(double t, int K) {
    return ExplicitSteps{std::vector<double>(static_cast<std::size_t>(std::max(K, 0)), t)};
}

ExplicitSteps sqrt_steps(double c, int K) {
    ExplicitSteps s;
    for (int i = 0; i < K; ++i) s.t.push_back(c / std::sqrt(static_cast<double>(i) + 1.0));
    return s;
}

Trace run_algorithm2(const CompositeObjective& obj, const Subgradient& subgrad, const Vector& x0,
                     const StepSequence& steps, int K) {
    require_dim(obj, x0, "run_algorithm2");
    if (K < 1) throw std::invalid_argument("run_algorithm2: K must be at least 1");
    const bool normalized = std::holds_alternative<NormalizedSteps>(steps);
    const std::vector<double>& seq =
        normalized ? std::get<NormalizedSteps>(steps).alpha : std::get<ExplicitSteps>(steps).t;
    if (seq.size() < static_cast<std::size_t>(K))
        throw std::invalid_argument("run_algorithm2: step sequence shorter than K");
    for (int k = 0; k < K; ++k)
        if (!(seq[static_cast<std::size_t>(k)] > 0.0))
            throw std::invalid_argument("run_algorithm2: step sizes must be positive");

    Trace trace;
    trace.algorithm = AlgorithmKind::prox_subgradient;
    trace.theta_tag = "one";
    trace.step_tag = normalized ? "normalized" : "explicit";
    trace.x0 = x0;
    trace.records.reserve(static_cast<std::size_t>(K));

    Vector x = x0;
    for (int k = 0; k < K; ++k) {
        IterateRecord rec;
        rec.k = k;
        rec.theta = 1.0;
        rec.x = x;
        rec.y = x;
        const Vector g_phi = subgrad(x);
        double t = seq[static_cast<std::size_t>(k)];
        if (normalized) {
            const double gn = g_phi.norm();
            if (gn == 0.0) {
                trace.early_optimal = true;
                break;
            }
            t /= gn;
        }
        rec.t = t;
        rec.g_phi = g_phi;
        rec.x_next = obj.psi().prox(t, x - t * g_phi);
        rec.g = (x - rec.x_next) / t;
        rec.g_psi = rec.g - rec.g_phi;
        fill_values(obj, rec);
        rec.decrease_ok = false;
        x = rec.x_next;
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

}  // namespace proxcert
