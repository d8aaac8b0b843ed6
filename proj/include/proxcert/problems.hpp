#pragma once

#include "proxcert/prox.hpp"
#include "proxcert/solver.hpp"
#include "proxcert/vecspace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace proxcert {

enum class ProblemKind { least_squares, lasso, box_qp, l1_regression };
enum class FstarStrategy { analytic, dual_solve, numeric_grid, unavailable };

std::string to_string(ProblemKind kind);
std::string to_string(FstarStrategy s);
ProblemKind problem_kind_from_string(const std::string& s);
FstarStrategy fstar_strategy_from_string(const std::string& s);

/// A value with an absolute accuracy estimate. accuracy = +inf means uncertified.
struct Estimate {
    double value = 0.0;
    double accuracy = 0.0;
};

/// Serializable description of an instance. `matrix` is row-major.
/// least_squares / lasso / l1_regression: matrix = A, vec = b.
/// box_qp: matrix = Q, vec = c. lo/hi hold the box for box_qp and l1_regression.
struct ProblemData {
    std::string name;
    ProblemKind kind = ProblemKind::least_squares;
    Index rows = 0;
    Index cols = 0;
    std::vector<double> matrix;
    std::vector<double> vec;
    double lambda = 0.0;
    std::vector<double> lo;
    std::vector<double> hi;
    std::optional<std::uint64_t> seed;
    std::vector<double> x0;
    std::optional<FstarStrategy> fstar;  // override for box_qp
};

std::string problem_to_json(const ProblemData& data);
ProblemData problem_from_json(const std::string& text);
ProblemData load_problem_file(const std::string& path);
void save_problem_file(const ProblemData& data, const std::string& path);

struct ProblemInstance {
    CompositeObjective objective;
    std::string name;
    ProblemKind kind = ProblemKind::least_squares;
    Vector x0;
    /// Subgradient selection of phi (the gradient when phi is smooth).
    Subgradient subgradient;
    bool smooth = true;
    /// Gradient Lipschitz constant for smooth phi, Lipschitz constant of phi otherwise.
    std::optional<double> L;
    Estimate f_bar;
    Estimate dist;
    std::optional<Vector> x_bar;
    FstarStrategy fstar_strategy = FstarStrategy::unavailable;
    std::optional<ConjugateOracle> fstar;
    /// Grid used by the numeric-grid conjugate, if any.
    std::optional<GridSpec> grid;
    ProblemData data;

    /// Optimal value of phi over dom psi; equals f_bar when psi is an indicator.
    double phi_bar() const { return f_bar.value; }
};

ProblemInstance make_least_squares(const Matrix& A, const Vector& b, const Vector& x0);
ProblemInstance make_lasso(const Matrix& A, const Vector& b, double lambda, const Vector& x0);
/// fstar defaults to dual_solve; numeric_grid needs dim <= 2 and a bounded box.
ProblemInstance make_box_qp(const Matrix& Q, const Vector& c, const Vector& lo, const Vector& hi,
                            const Vector& x0,
                            FstarStrategy fstar = FstarStrategy::dual_solve);
ProblemInstance make_l1_regression(const Matrix& A, const Vector& b, const Vector& lo,
                                   const Vector& hi, const Vector& x0);

ProblemInstance make_problem(const ProblemData& data);

/// Accelerated run (smooth phi) or diminishing-step subgradient run for
/// `budget` iterations. Returns the best f seen and a certified accuracy.
/// Least squares returns the analytic optimum directly. Throws on budget < 10.
Estimate reference_optimum(const ProblemInstance& problem, int budget);

/// Grid argmin of psi(y) + ||x - y||^2 / (2t). Throws std::domain_error when
/// psi is +inf on every grid point.
Vector brute_force_prox(const std::function<ExtReal(const Vector&)>& psi, double t,
                        const Vector& x, const GridSpec& grid);

/// Names accepted by builtin().
std::vector<std::string> builtin_names();

/// Built-in desk-scale instance. Seeded instances take `seed`, else
/// PROXCERT_SEED from the environment, else their fixed default.
ProblemInstance builtin(const std::string& name, std::optional<std::uint64_t> seed = {});

/// Built-in name or path to a problem JSON file.
ProblemInstance resolve_problem(const std::string& ref);

}  // namespace proxcert
