#include "proxcert/schedules.hpp"

#include <cmath>
#include <sstream>

namespace proxcert {

double next_theta_fista(double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("next_theta_fista: theta must lie in (0, 1]");
    const double th2 = theta * theta;
    // (-th2 + th*sqrt(th2 + 4)) / 2, rewritten to avoid cancellation.
    return 2.0 * th2 / (th2 + theta * std::sqrt(th2 + 4.0));
}

double theta_two_over(int k) {
    if (k < 0) throw std::invalid_argument("theta_two_over: k must be non-negative");
    return 2.0 / (static_cast<double>(k) + 2.0);
}

bool validate_theta_pair(double theta, double theta_next) {
    return theta_next * theta_next >= theta * theta * (1.0 - theta_next) - 1e-12;
}

ThetaSchedule::ThetaSchedule(ThetaKind kind, std::vector<double> values)
    : kind_(kind), values_(std::move(values)) {}

ThetaSchedule ThetaSchedule::constant_one() { return ThetaSchedule(ThetaKind::constant_one); }
ThetaSchedule ThetaSchedule::fista() { return ThetaSchedule(ThetaKind::fista_recurrence); }
ThetaSchedule ThetaSchedule::two_over() { return ThetaSchedule(ThetaKind::two_over_kplus2); }

ThetaSchedule ThetaSchedule::custom(std::vector<double> values) {
    if (values.empty() || values.front() != 1.0)
        throw std::invalid_argument("ThetaSchedule: custom schedule must start with theta_0 = 1");
    for (double v : values)
        if (!(v > 0.0 && v <= 1.0))
            throw std::invalid_argument("ThetaSchedule: custom theta values must lie in (0, 1]");
    return ThetaSchedule(ThetaKind::custom, std::move(values));
}

std::string ThetaSchedule::name() const {
    switch (kind_) {
        case ThetaKind::constant_one: return "one";
        case ThetaKind::fista_recurrence: return "fista";
        case ThetaKind::two_over_kplus2: return "two_over";
        case ThetaKind::custom: return "custom";
    }
    return "unknown";
}

double ThetaSchedule::peek_next() const {
    switch (kind_) {
        case ThetaKind::constant_one: return 1.0;
        case ThetaKind::fista_recurrence: return next_theta_fista(theta_);
        case ThetaKind::two_over_kplus2: return theta_two_over(k_ + 1);
        case ThetaKind::custom: {
            const auto next = static_cast<std::size_t>(k_ + 1);
            if (next >= values_.size())
                throw std::out_of_range("ThetaSchedule: custom schedule exhausted");
            return values_[next];
        }
    }
    return 1.0;
}

double ThetaSchedule::advance() {
    theta_ = peek_next();
    ++k_;
    return theta_;
}

void validate(const StepRule& rule) {
    if (const auto* f = std::get_if<FixedStep>(&rule)) {
        if (!(f->t > 0.0)) throw std::invalid_argument("fixed step must be positive");
        return;
    }
    const auto& b = std::get<Backtracking>(rule);
    if (!(b.t_init > 0.0)) throw std::invalid_argument("backtracking: t_init must be positive");
    if (!(b.shrink > 0.0 && b.shrink < 1.0))
        throw std::invalid_argument("backtracking: shrink factor must lie in (0, 1)");
    if (b.max_shrinks < 1) throw std::invalid_argument("backtracking: shrink cap must be positive");
}

std::string describe(const StepRule& rule) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* f = std::get_if<FixedStep>(&rule)) {
        os << "fixed:" << f->t;
    } else {
        const auto& b = std::get<Backtracking>(rule);
        os << "backtrack:" << b.t_init << ":" << b.shrink << (b.monotone ? ":monotone" : "");
    }
    return os.str();
}

namespace {

struct DecreaseSides {
    double lhs;
    double rhs;
};

DecreaseSides decrease_sides(const SmoothOracle& phi, const Vector& y, const Vector& x_next,
                             double t) {
    require_same_dim(y, x_next, "decrease condition");
    if (!(t > 0.0)) throw std::invalid_argument("decrease condition: t must be positive");
    const Vector d = x_next - y;
    return {phi.value(x_next), phi.value(y) + phi.gradient(y).dot(d) + d.squaredNorm() / (2.0 * t)};
}

}  // namespace

double decrease_margin(const SmoothOracle& phi, const Vector& y, const Vector& x_next, double t) {
    const auto [lhs, rhs] = decrease_sides(phi, y, x_next, t);
    return rhs - lhs;
}

bool decrease_holds(const SmoothOracle& phi, const ProxOracle& /*psi*/, const Vector& y,
                    const Vector& x_next, double t) {
    const auto [lhs, rhs] = decrease_sides(phi, y, x_next, t);
    const double tol = 1e-12 * (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
    return lhs <= rhs + tol;
}

BacktrackResult backtrack(const SmoothOracle& phi, const ProxOracle& psi, const Vector& y,
                          const Backtracking& rule, std::optional<double> t_prev) {
    validate(StepRule{rule});
    double t = (rule.monotone && t_prev) ? *t_prev : rule.t_init;
    const Vector grad = phi.gradient(y);
    for (int s = 0; s <= rule.max_shrinks; ++s) {
        Vector x_next = psi.prox(t, y - t * grad);
        if (decrease_holds(phi, psi, y, x_next, t)) return {t, std::move(x_next), s};
        t *= rule.shrink;
    }
    throw std::runtime_error(
        "backtrack: decrease condition not met after the shrink cap; the smooth part may be "
        "non-smooth or mis-specified");
}

}  // namespace proxcert
