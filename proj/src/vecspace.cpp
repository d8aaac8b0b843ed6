#include "proxcert/vecspace.hpp"

#include <algorithm>
#include <cmath>

namespace proxcert {

void require_same_dim(const Vector& a, const Vector& b, const char* where) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                    ")");
}

double inner(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "inner");
    return a.dot(b);
}

double norm_sq(const Vector& a) { return a.squaredNorm(); }

double norm(const Vector& a) { return a.norm(); }

bool all_finite(const Vector& a) { return a.allFinite(); }

std::string to_string(ConjugateKind kind) {
    switch (kind) {
        case ConjugateKind::analytic: return "analytic";
        case ConjugateKind::numeric_grid: return "numeric-grid";
        case ConjugateKind::dual_solve: return "dual-solve";
    }
    return "unknown";
}

CompositeObjective::CompositeObjective(Index dim, SmoothOracle phi, ProxOracle psi)
    : dim_(dim), phi_(std::move(phi)), psi_(std::move(psi)) {
    if (dim_ <= 0) throw std::invalid_argument("CompositeObjective: dimension must be positive");
    if (!phi_.value || !phi_.gradient || !psi_.value || !psi_.prox)
        throw std::invalid_argument("CompositeObjective: missing oracle");
    if (phi_.lipschitz && !(*phi_.lipschitz > 0.0))
        throw std::invalid_argument("CompositeObjective: Lipschitz estimate must be positive");

    const Vector probe = Vector::Zero(dim_);
    if (phi_.gradient(probe).size() != dim_)
        throw std::invalid_argument("CompositeObjective: gradient dimension does not match");
    if (psi_.prox(1.0, probe).size() != dim_)
        throw std::invalid_argument("CompositeObjective: prox dimension does not match");
}

ExtReal CompositeObjective::f(const Vector& x) const {
    const ExtReal psi_x = psi_.value(x);
    if (psi_x.is_infinite()) return psi_x;
    return phi_.value(x) + psi_x;
}

ExtReal eval_f(const CompositeObjective& obj, const Vector& x) {
    if (x.size() != obj.dim()) throw std::invalid_argument("eval_f: dimension mismatch");
    return obj.f(x);
}

Vector random_vector(Index dim, double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = u(rng);
    return v;
}

double lipschitz_violation(const SmoothOracle& phi, Index dim, double scale, int samples,
                           std::mt19937_64& rng) {
    if (!phi.lipschitz) throw std::invalid_argument("lipschitz_violation: no Lipschitz estimate");
    const double L = *phi.lipschitz;
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Vector a = random_vector(dim, scale, rng);
        const Vector b = random_vector(dim, scale, rng);
        const double lhs = (phi.gradient(a) - phi.gradient(b)).norm();
        const double rhs = L * (a - b).norm();
        worst = std::max(worst, lhs - rhs - 1e-12 * std::max(1.0, rhs));
    }
    return worst;
}

double prox_optimality_violation(const ProxOracle& psi, double t, const Vector& x, int probes,
                                 double scale, std::mt19937_64& rng) {
    const Vector xp = psi.prox(t, x);
    const ExtReal psi_xp = psi.value(xp);
    if (psi_xp.is_infinite()) return std::numeric_limits<double>::infinity();
    const Vector sub = (x - xp) / t;
    double worst = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < probes; ++p) {
        // Probes around the prox point, pulled back into dom psi for indicators.
        Vector y = xp + random_vector(x.size(), scale, rng);
        if (psi.indicator) y = psi.prox(1.0, y);
        const ExtReal psi_y = psi.value(y);
        if (psi_y.is_infinite()) continue;
        const double rhs = psi_xp.value() + sub.dot(y - xp);
        worst = std::max(worst, rhs - psi_y.value());
    }
    return worst;
}

double nonexpansive_violation(const ProxOracle& psi, double t, Index dim, double scale,
                              int samples, std::mt19937_64& rng) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Vector a = random_vector(dim, scale, rng);
        const Vector b = random_vector(dim, scale, rng);
        const double lhs = (psi.prox(t, a) - psi.prox(t, b)).norm();
        worst = std::max(worst, lhs - (a - b).norm());
    }
    return worst;
}

double fenchel_young_gap(const std::function<ExtReal(const Vector&)>& h,
                         const std::function<ExtReal(const Vector&)>& hstar, const Vector& z,
                         const Vector& x) {
    const ExtReal hx = h(x);
    const ExtReal hz = hstar(z);
    if (hx.is_infinite() || hz.is_infinite()) return std::numeric_limits<double>::infinity();
    return hz.value() + hx.value() - inner(z, x);
}

}  // namespace proxcert
