#pragma once

#include "proxcert/vecspace.hpp"

namespace proxcert {

struct BoxQpResult {
    Vector u;
    double value = 0.0;
    int iterations = 0;
};

/// Exact minimizer of 0.5 u'Hu + g'u subject to lo <= u <= hi for symmetric
/// positive definite H. Primal active-set method; terminates finitely and the
/// returned point satisfies the KKT conditions to working precision.
/// Bounds may be infinite. Throws std::invalid_argument on bad shapes,
/// std::runtime_error when H is not positive definite on a free subspace.
BoxQpResult solve_box_qp(const Matrix& H, const Vector& g, const Vector& lo, const Vector& hi);

}  // namespace proxcert
