#pragma once

#include "proxcert/schedules.hpp"
#include "proxcert/vecspace.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace proxcert {

/// One pass of either algorithm. For the subgradient method y == x and theta == 1.
struct IterateRecord {
    int k = 0;
    double t = 0.0;
    double theta = 1.0;
    Vector x;       // x_k
    Vector y;       // y_k
    Vector x_next;  // x_{k+1}
    Vector g;       // (y_k - x_{k+1}) / t_k
    Vector g_phi;   // gradient (or subgradient) of phi at y_k
    Vector g_psi;   // g - g_phi, a subgradient of psi at x_{k+1}
    double phi_y = 0.0;
    double psi_next = 0.0;
    double f_x_next = 0.0;
    double f_y = 0.0;  // may be +inf when y_k leaves dom psi
    double decrease_margin = 0.0;  // model minus phi(x_{k+1}); algorithm 1 only
    bool decrease_ok = false;
};

enum class AlgorithmKind { prox_gradient, prox_subgradient };

std::string to_string(AlgorithmKind kind);

struct Trace {
    AlgorithmKind algorithm = AlgorithmKind::prox_gradient;
    std::string theta_tag;
    std::string step_tag;
    Vector x0;
    std::vector<IterateRecord> records;
    /// Set when the normalized subgradient run stopped at a zero subgradient.
    bool early_optimal = false;
};

struct StepResult {
    Vector x_next;
    Vector g;
    Vector g_phi;
    Vector g_psi;
};

/// x+ = Prox_t(y - t grad phi(y)) with the composite gradient split recovered algebraically.
StepResult prox_grad_step(const CompositeObjective& obj, const Vector& y, double t);

/// x+ + (theta_next (1 - theta) / theta) (x+ - x).
Vector momentum_update(const Vector& x_next, const Vector& x, double theta, double theta_next);

/// Proximal gradient template with momentum, exactly K iterations.
Trace run_algorithm1(const CompositeObjective& obj, ThetaSchedule theta, const StepRule& steps,
                     const Vector& x0, int K);

using Subgradient = std::function<Vector(const Vector&)>;

StepResult prox_subgrad_step(const CompositeObjective& obj, const Subgradient& subgrad,
                             const Vector& x, double t);

struct ExplicitSteps {
    std::vector<double> t;
};

/// t_k = alpha_k / ||g_phi_k||.
struct NormalizedSteps {
    std::vector<double> alpha;
};

using StepSequence = std::variant<ExplicitSteps, NormalizedSteps>;

ExplicitSteps constant_steps(double t, int K);
/// t_i = c / sqrt(i + 1).
ExplicitSteps sqrt_steps(double c, int K);

/// Proximal subgradient method. In normalized mode a zero subgradient ends the
/// run early with early_optimal set.
Trace run_algorithm2(const CompositeObjective& obj, const Subgradient& subgrad, const Vector& x0,
                     const StepSequence& steps, int K);

}  // namespace proxcert
