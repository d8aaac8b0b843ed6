#pragma once

#include <Eigen/Dense>

#include <compare>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace proxcert {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Value of a closed proper convex function: a finite real or +infinity.
/// -infinity and NaN are rejected on construction.
class ExtReal {
public:
    constexpr ExtReal() = default;
    ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
        if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
            throw std::domain_error("ExtReal: value must be finite or +infinity");
    }

    static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return v_ != std::numeric_limits<double>::infinity(); }
    bool is_infinite() const { return !is_finite(); }

    /// Raw double; +inf when infinite.
    double raw() const { return v_; }

    /// Finite value, throws when infinite.
    double value() const {
        if (!is_finite()) throw std::domain_error("ExtReal: value is +infinity");
        return v_;
    }

    friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }
    friend ExtReal operator+(ExtReal a, double b) { return ExtReal(a.v_ + b); }
    friend ExtReal operator+(double a, ExtReal b) { return ExtReal(a + b.v_); }
    friend ExtReal operator-(ExtReal a, double b) { return ExtReal(a.v_ - b); }

    friend auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }
    friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }

private:
    double v_ = 0.0;
};

double inner(const Vector& a, const Vector& b);
double norm_sq(const Vector& a);
double norm(const Vector& a);
bool all_finite(const Vector& a);
void require_same_dim(const Vector& a, const Vector& b, const char* where);

/// Absolute plus relative tolerance.
struct Tolerance {
    double abs = 1e-9;
    double rel = 1e-9;
    double at(double reference) const { return abs + rel * std::abs(reference); }
};

struct SmoothOracle {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    std::optional<double> lipschitz;
};

struct ProxOracle {
    std::function<ExtReal(const Vector&)> value;
    std::function<Vector(double, const Vector&)> prox;
    /// psi only takes the values 0 and +infinity.
    bool indicator = false;
};

enum class ConjugateKind { analytic, numeric_grid, dual_solve };

std::string to_string(ConjugateKind kind);

struct ConjugateOracle {
    std::function<ExtReal(const Vector&)> conj_value;
    ConjugateKind kind = ConjugateKind::analytic;
};

/// f = phi + psi on R^dim. Oracles are immutable once the objective is built.
class CompositeObjective {
public:
    CompositeObjective(Index dim, SmoothOracle phi, ProxOracle psi);

    Index dim() const { return dim_; }
    const SmoothOracle& phi() const { return phi_; }
    const ProxOracle& psi() const { return psi_; }

    ExtReal f(const Vector& x) const;

    std::optional<ConjugateOracle> phi_conjugate;
    std::optional<ConjugateOracle> psi_conjugate;
    std::optional<ConjugateOracle> f_conjugate;

private:
    Index dim_;
    SmoothOracle phi_;
    ProxOracle psi_;
};

ExtReal eval_f(const CompositeObjective& obj, const Vector& x);

// Sampled self-checks on oracles. Each returns the worst violation observed
// (<= 0 means the property held on every sample).

Vector random_vector(Index dim, double scale, std::mt19937_64& rng);

double lipschitz_violation(const SmoothOracle& phi, Index dim, double scale, int samples,
                           std::mt19937_64& rng);

/// psi(y) >= psi(x+) + <(x - x+)/t, y - x+> at random probes y.
double prox_optimality_violation(const ProxOracle& psi, double t, const Vector& x, int probes,
                                 double scale, std::mt19937_64& rng);

double nonexpansive_violation(const ProxOracle& psi, double t, Index dim, double scale,
                              int samples, std::mt19937_64& rng);

/// h*(z) + h(x) - <z, x>. Non-negative always; zero when z is a subgradient of h at x.
double fenchel_young_gap(const std::function<ExtReal(const Vector&)>& h,
                         const std::function<ExtReal(const Vector&)>& hstar, const Vector& z,
                         const Vector& x);

}  // namespace proxcert
