#pragma once

#include "proxcert/vecspace.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace proxcert {

// Momentum schedules.

/// Positive root of theta^2 + theta_k^2 theta - theta_k^2 = 0, i.e. the FISTA
/// recurrence theta_{k+1}^2 = theta_k^2 (1 - theta_{k+1}).
double next_theta_fista(double theta);

/// 2 / (k + 2).
double theta_two_over(int k);

/// theta_next^2 >= theta^2 (1 - theta_next) up to 1e-12.
bool validate_theta_pair(double theta, double theta_next);

enum class ThetaKind { constant_one, fista_recurrence, two_over_kplus2, custom };

/// Emits theta_0 = 1, theta_1, ... for one run.
class ThetaSchedule {
public:
    static ThetaSchedule constant_one();
    static ThetaSchedule fista();
    static ThetaSchedule two_over();
    /// Throws std::invalid_argument unless values[0] == 1 and every value lies in (0, 1].
    static ThetaSchedule custom(std::vector<double> values);

    ThetaKind kind() const { return kind_; }
    std::string name() const;

    int index() const { return k_; }
    double current() const { return theta_; }
    /// Moves to k+1 and returns theta_{k+1}.
    double advance();
    /// Value the schedule would emit next, without advancing.
    double peek_next() const;

private:
    ThetaSchedule(ThetaKind kind, std::vector<double> values = {});

    ThetaKind kind_;
    std::vector<double> values_;
    int k_ = 0;
    double theta_ = 1.0;
};

// Step-size rules.

struct FixedStep {
    double t = 1.0;
};

struct Backtracking {
    double t_init = 1.0;
    double shrink = 0.5;
    bool monotone = false;
    int max_shrinks = 100;
};

using StepRule = std::variant<FixedStep, Backtracking>;

void validate(const StepRule& rule);
std::string describe(const StepRule& rule);

/// phi(x+) <= phi(y) + <grad phi(y), x+ - y> + ||x+ - y||^2 / (2t), up to
/// round-off. psi(x+) appears on both sides of the decrease condition and cancels.
bool decrease_holds(const SmoothOracle& phi, const ProxOracle& psi, const Vector& y,
                    const Vector& x_next, double t);

/// Model value minus phi(x+) in the decrease condition (non-negative when it holds exactly).
double decrease_margin(const SmoothOracle& phi, const Vector& y, const Vector& x_next, double t);

struct BacktrackResult {
    double t = 0.0;
    Vector x_next;
    int shrinks = 0;
};

/// Shrinks t from its start value (t_init, or t_prev in monotone mode) until
/// the decrease condition holds. Throws std::runtime_error past max_shrinks.
BacktrackResult backtrack(const SmoothOracle& phi, const ProxOracle& psi, const Vector& y,
                          const Backtracking& rule, std::optional<double> t_prev);

}  // namespace proxcert
