#pragma once

#include "proxcert/vecspace.hpp"

#include <variant>
#include <vector>

namespace proxcert {

// Closed-form proximal maps and projections.

/// Soft threshold sign(x_i) * max(|x_i| - t*lambda, 0). Exact ties map to 0.
Vector prox_l1(double lambda, double t, const Vector& x);
Vector prox_sq_l2(double lambda, double t, const Vector& x);
Vector project_box(const Vector& lo, const Vector& hi, const Vector& x);
Vector project_l2_ball(double radius, const Vector& center, const Vector& x);

// Analytic conjugates.

/// Conjugate of h(x) = 0.5 x'Qx - b'x + c, i.e. 0.5 (z+b)'Q^{-1}(z+b) - c.
double conjugate_quadratic(const Matrix& Q, const Vector& b, double c, const Vector& z);
/// Support function of [lo, hi], the conjugate of its indicator.
double support_box(const Vector& lo, const Vector& hi, const Vector& z);
/// Conjugate of lambda*||x||_1: indicator of the l-infinity ball of radius lambda.
ExtReal conjugate_l1(double lambda, const Vector& z);

struct ProxZero {};
struct ProxL1 { double lambda; };
struct ProxSqL2 { double lambda; };
struct ProxBox { Vector lo, hi; };
struct ProxL2Ball { double radius; Vector center; };

using ProxSpec = std::variant<ProxZero, ProxL1, ProxSqL2, ProxBox, ProxL2Ball>;

/// Throws std::invalid_argument on lambda <= 0, lo > hi or radius <= 0.
void validate(const ProxSpec& spec);

/// psi value, prox map and indicator flag for a spec.
ProxOracle make_prox_oracle(const ProxSpec& spec);

/// Analytic psi* for a spec.
ConjugateOracle make_prox_conjugate(const ProxSpec& spec);

/// Axis-aligned grid, at most two dimensions.
struct GridSpec {
    Vector lower;
    Vector upper;
    int points_per_axis = 1001;

    void validate() const;
    std::vector<Vector> points() const;
    double spacing() const;
    /// Nearest grid node, with coordinates identical to those from points().
    Vector snap(const Vector& x) const;
};

/// Grid maximum of <z,x> - h(x). Always a lower estimate of h*(z).
/// Throws std::domain_error when h is +infinity on every grid point.
double numeric_conjugate(const std::function<ExtReal(const Vector&)>& h, const GridSpec& grid,
                         const Vector& z);

/// numeric_conjugate with the grid values of h cached once, so repeated
/// evaluations cost one inner product per grid point.
class GridConjugate {
public:
    GridConjugate(const std::function<ExtReal(const Vector&)>& h, const GridSpec& grid);

    double operator()(const Vector& z) const;
    const GridSpec& grid() const { return grid_; }

private:
    GridSpec grid_;
    Matrix points_;  // one column per finite grid point
    Vector values_;
};

}  // namespace proxcert
