#pragma once

#include <string>
#include <vector>

namespace proxcert {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    /// Corrupts one FISTA theta in the variable-step runs; the suite must then fail.
    bool inject_theta_fault = false;
};

/// Measured tail exponents on lasso-20 with the default seed, K = 1000.
inline constexpr double kBaselineAccelSlope = -3.83;
inline constexpr double kBaselinePlainSlope = -0.92;
inline constexpr double kBaselineTolerance = 0.2;

/// Runs the twelve acceptance criteria in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

std::string acceptance_json(const std::vector<CriterionResult>& results);

}  // namespace proxcert
