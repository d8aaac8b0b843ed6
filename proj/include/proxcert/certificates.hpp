#pragma once

#include "proxcert/solver.hpp"
#include "proxcert/vecspace.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxcert {

/// A run violates the hypotheses a certificate needs.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// lhs <= rhs + max(abs, rel * |rhs|).
struct BoundTolerance {
    double abs = 1e-9;
    double rel = 1e-7;
    double at(double rhs) const;
};

struct CheckPoint {
    int k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    bool satisfied = true;
    bool vacuous = false;  // rhs == +inf
};

class BoundCheck {
public:
    explicit BoundCheck(std::string name) : name_(std::move(name)) {}

    void add(int k, double lhs, double rhs, double tol);
    void add(int k, double lhs, double rhs, const BoundTolerance& tol) { add(k, lhs, rhs, tol.at(rhs)); }

    const std::string& name() const { return name_; }
    const std::vector<CheckPoint>& points() const { return points_; }
    bool satisfied() const;
    /// Point with the smallest slack, nullptr when empty.
    const CheckPoint* worst() const;
    const CheckPoint* first_violation() const;
    int vacuous_count() const;

private:
    std::string name_;
    std::vector<CheckPoint> points_;
};

/// Per-iterate values of the primary certificate of a run.
struct CertificateRow {
    int k = 0;
    double lhs = 0.0;
    double rhs_conj = std::numeric_limits<double>::quiet_NaN();
    double rhs_dist = std::numeric_limits<double>::quiet_NaN();
    double S = 0.0;
    double R = 1.0;
};

struct BoundReport {
    std::vector<std::string> hypotheses;
    std::string fstar_rung = "none";
    std::vector<BoundCheck> checks;
    std::vector<CertificateRow> rows;
    std::vector<std::string> notes;

    bool all_satisfied() const;
    const BoundCheck* find(const std::string& name) const;
    /// First failing check in report order.
    const BoundCheck* first_failure() const;
    void merge(BoundReport other);
};

// Dual sequence of the proximal-gradient certificate: z_k is the
// (t_i/theta_i)-weighted average of g_0..g_{k-1}.

enum class LhsMode { case_a, case_b };

class CertStateThm1 {
public:
    CertStateThm1(LhsMode mode, Index dim);

    /// Consumes iterate k. f_next = f(x_{k+1}). Throws HypothesisError when
    /// theta_k != 1 in case (a), or the partial-sum identity fails in case (b).
    void update(double t, double theta, const Vector& g, double f_next);

    LhsMode mode() const { return mode_; }
    int k() const { return k_; }
    double S() const { return S_; }
    const Vector& weighted_g() const { return weighted_g_; }
    const Vector& z() const { return z_; }
    double mu() const { return 1.0 / S_; }
    double gamma() const { return gamma_; }
    double lhs() const { return lhs_; }

private:
    LhsMode mode_;
    int k_ = 0;
    double S_ = 0.0;
    Vector weighted_g_;
    Vector z_;
    double gamma_ = 0.0;
    double sum_t_ = 0.0;
    double sum_tf_ = 0.0;
    double lhs_ = 0.0;
};

/// Dual sequence for variable steps and relaxed momentum:
/// z_k = (theta_{k-1}^2 / t_{k-1}) sum (t_i/theta_i) g_i, with scaling R_k.
class CertStateThm2 {
public:
    explicit CertStateThm2(Index dim);

    /// Consumes iterate k. Throws HypothesisError naming validate_theta_pair,
    /// a step increase, or rho_k < 1.
    void update(double t, double theta, const Vector& g);

    int k() const { return k_; }
    const Vector& z() const { return z_; }
    double mu() const { return mu_; }
    double R() const { return R_; }
    double rho() const { return rho_; }
    /// z_k evaluated straight from its defining sum.
    Vector z_by_definition() const;

private:
    int k_ = 0;
    Vector z_;
    Vector weighted_g_;
    double mu_ = 0.0;
    double R_ = 1.0;
    double rho_ = 1.0;
    double t_prev_ = 0.0;
    double theta_prev_ = 1.0;
};

/// -f*(z_k) + <z_k, x0> - (S_k/2)||z_k||^2; +inf when f*(z_k) = +inf.
double rhs_thm1(const CertStateThm1& state, const ConjugateOracle& fstar, const Vector& x0);

/// -R_k (f*(z_k/R_k) + f_bar) + <z_k, x0> - ||z_k||^2 / (2 mu_k), bounding f(x_k) - f_bar.
double rhs_thm2(const CertStateThm2& state, const ConjugateOracle& fstar, double f_bar,
                const Vector& x0);

/// f_ref + ||x_ref - x0||^2 / (2 S).
double rhs_distance(double S, const Vector& x_ref, double f_ref, const Vector& x0);

/// L dist^2 / (2k).
double rate_prox_grad(double L, double dist, int k);
/// 2 L dist^2 / (k+1)^2.
double rate_accel(double L, double dist, int k);
/// theta_prev^2 dist^2 / (2 t_prev).
double bound_thm2_final(double theta_prev, double t_prev, double dist);

/// Which certificate hypotheses a proximal-gradient trace satisfies.
struct RunHypotheses {
    bool decrease = true;
    bool theta_one = true;
    bool theta0_one = true;
    bool partial_sums = true;
    bool theta_pairs = true;
    bool theta_below_one = true;  // theta_k < 1 for k >= 1
    bool steps_nonincreasing = true;
    int first_bad_theta_pair = -1;

    bool thm1_case_a() const { return decrease && theta_one; }
    bool thm1_case_b() const { return decrease && theta0_one && partial_sums; }
    bool thm2() const {
        return decrease && theta0_one && theta_pairs && theta_below_one && steps_nonincreasing;
    }
    std::vector<std::string> tags() const;
};

RunHypotheses assess_hypotheses(const Trace& trace);

struct CertificateInputs {
    std::optional<ConjugateOracle> fstar;
    std::vector<Vector> probes;  // points x for the f(x) + ||x - x0||^2/(2S) bound
    std::optional<double> f_bar;
    std::optional<double> dist;
    BoundTolerance tol;
};

/// Conjugate chain and distance bounds of the proximal-gradient certificate.
/// Checks: thm1.conjugate, thm1.chain, thm1.distance, thm1.optimal.
BoundReport check_thm1(const Trace& trace, const CompositeObjective& obj, LhsMode mode,
                       const CertificateInputs& in);

/// Variable-step certificate. Hypothesis failures are reported as failed
/// checks (thm2.validate_theta_pair, ...) and the bound checks are skipped.
BoundReport check_thm2(const Trace& trace, const CompositeObjective& obj,
                       const CertificateInputs& in);

/// O(1/k) and O(1/k^2) rate bounds with L = 1 / min_{i<k} t_i.
BoundReport check_rates(const Trace& trace, double f_bar, double dist, const BoundTolerance& tol);

/// Momentum state identity (y_k - (1-theta_k) x_k)/theta_k = x0 - sum (t_i/theta_i) g_i,
/// per-component residual against `limit`.
BoundReport check_anchor(const Trace& trace, double limit = 1e-8);

/// Subgradient-method certificate. Checks: prop1.conjugate, prop1.chain, prop1.distance.
BoundReport check_prop1(const Trace& trace, const CompositeObjective& obj,
                        const CertificateInputs& in);

/// min_{i<=k}(phi(x_i) - phi_bar) against the weighted, Lipschitz and
/// normalized-step bounds. Requires psi to be an indicator.
BoundReport subgrad_rates(const Trace& trace, double phi_bar, double dist,
                          std::optional<double> L, const BoundTolerance& tol);

/// min_{i<=k}(phi(x_i) - phi_bar), one entry per record.
std::vector<double> running_min_gap(const Trace& trace, double phi_bar);

struct SteepBound {
    double value = 0.0;
    double B = 0.0;
    bool capped = false;     // the set reaches t_max; the true sup may be larger
    bool bisection = true;   // false when t/L(t) was not monotone and a scan was used
};

/// sup{ t in [0, t_max] : t / steepness(t) <= B } with
/// B = (sum alpha_i^2 + dist^2) / (2 sum alpha_i).
SteepBound steep_bound(const std::function<double(double)>& steepness,
                       std::span<const double> alpha, double dist, double t_max = 1e6);

}  // namespace proxcert
