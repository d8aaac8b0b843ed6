#include "proxcert/prox.hpp"

#include <algorithm>
#include <cmath>

namespace proxcert {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_ordered(const Vector& lo, const Vector& hi) {
    require_same_dim(lo, hi, "box");
    for (Index i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i])) throw std::invalid_argument("box: lo must not exceed hi");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

Vector prox_l1(double lambda, double t, const Vector& x) {
    require_positive(lambda, "prox_l1: lambda");
    require_positive(t, "prox_l1: t");
    const double thr = t * lambda;
    Vector out(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        const double a = std::abs(x[i]);
        out[i] = a <= thr ? 0.0 : std::copysign(a - thr, x[i]);
    }
    return out;
}

Vector prox_sq_l2(double lambda, double t, const Vector& x) {
    require_positive(lambda, "prox_sq_l2: lambda");
    require_positive(t, "prox_sq_l2: t");
    return x / (1.0 + t * lambda);
}

Vector project_box(const Vector& lo, const Vector& hi, const Vector& x) {
    require_ordered(lo, hi);
    require_same_dim(lo, x, "project_box");
    return x.cwiseMax(lo).cwiseMin(hi);
}

Vector project_l2_ball(double radius, const Vector& center, const Vector& x) {
    require_positive(radius, "project_l2_ball: radius");
    require_same_dim(center, x, "project_l2_ball");
    const Vector d = x - center;
    const double dn = d.norm();
    if (dn <= radius) return x;
    // Round-off can leave the scaled point an ulp outside; nudge it back in.
    double scale = radius / dn;
    Vector p = center + scale * d;
    for (int i = 0; i < 8 && (p - center).norm() > radius; ++i) {
        scale = std::nextafter(scale, 0.0) * (1.0 - 4e-16);
        p = center + scale * d;
    }
    return p;
}

double conjugate_quadratic(const Matrix& Q, const Vector& b, double c, const Vector& z) {
    if (Q.rows() != Q.cols() || Q.rows() != b.size())
        throw std::invalid_argument("conjugate_quadratic: shape mismatch");
    require_same_dim(b, z, "conjugate_quadratic");
    Eigen::LLT<Matrix> llt(Q);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("conjugate_quadratic: Q is not positive definite");
    const Vector w = z + b;
    return 0.5 * w.dot(llt.solve(w)) - c;
}

double support_box(const Vector& lo, const Vector& hi, const Vector& z) {
    require_ordered(lo, hi);
    require_same_dim(lo, z, "support_box");
    double s = 0.0;
    for (Index i = 0; i < z.size(); ++i) s += std::max(z[i] * lo[i], z[i] * hi[i]);
    return s;
}

ExtReal conjugate_l1(double lambda, const Vector& z) {
    require_positive(lambda, "conjugate_l1: lambda");
    if (z.size() > 0 && z.lpNorm<Eigen::Infinity>() > lambda) return ExtReal::infinity();
    return 0.0;
}

void validate(const ProxSpec& spec) {
    std::visit(overloaded{
                   [](const ProxZero&) {},
                   [](const ProxL1& s) { require_positive(s.lambda, "l1 lambda"); },
                   [](const ProxSqL2& s) { require_positive(s.lambda, "sq_l2 lambda"); },
                   [](const ProxBox& s) { require_ordered(s.lo, s.hi); },
                   [](const ProxL2Ball& s) { require_positive(s.radius, "l2 ball radius"); },
               },
               spec);
}

ProxOracle make_prox_oracle(const ProxSpec& spec) {
    validate(spec);
    return std::visit(
        overloaded{
            [](const ProxZero&) {
                return ProxOracle{[](const Vector&) { return ExtReal(0.0); },
                                  [](double, const Vector& x) { return Vector(x); }, false};
            },
            [](const ProxL1& s) {
                const double lambda = s.lambda;
                return ProxOracle{
                    [lambda](const Vector& x) { return ExtReal(lambda * x.lpNorm<1>()); },
                    [lambda](double t, const Vector& x) { return prox_l1(lambda, t, x); }, false};
            },
            [](const ProxSqL2& s) {
                const double lambda = s.lambda;
                return ProxOracle{
                    [lambda](const Vector& x) { return ExtReal(0.5 * lambda * x.squaredNorm()); },
                    [lambda](double t, const Vector& x) { return prox_sq_l2(lambda, t, x); },
                    false};
            },
            [](const ProxBox& s) {
                const Vector lo = s.lo, hi = s.hi;
                return ProxOracle{
                    [lo, hi](const Vector& x) {
                        for (Index i = 0; i < x.size(); ++i)
                            if (x[i] < lo[i] || x[i] > hi[i]) return ExtReal::infinity();
                        return ExtReal(0.0);
                    },
                    [lo, hi](double, const Vector& x) { return project_box(lo, hi, x); }, true};
            },
            [](const ProxL2Ball& s) {
                const double r = s.radius;
                const Vector c = s.center;
                return ProxOracle{
                    [r, c](const Vector& x) {
                        return (x - c).norm() <= r ? ExtReal(0.0) : ExtReal::infinity();
                    },
                    [r, c](double, const Vector& x) { return project_l2_ball(r, c, x); }, true};
            },
        },
        spec);
}

ConjugateOracle make_prox_conjugate(const ProxSpec& spec) {
    validate(spec);
    auto fn = std::visit(
        overloaded{
            [](const ProxZero&) -> std::function<ExtReal(const Vector&)> {
                return [](const Vector& z) {
                    return z.isZero(0.0) ? ExtReal(0.0) : ExtReal::infinity();
                };
            },
            [](const ProxL1& s) -> std::function<ExtReal(const Vector&)> {
                const double lambda = s.lambda;
                return [lambda](const Vector& z) { return conjugate_l1(lambda, z); };
            },
            [](const ProxSqL2& s) -> std::function<ExtReal(const Vector&)> {
                const double lambda = s.lambda;
                return [lambda](const Vector& z) { return ExtReal(0.5 * z.squaredNorm() / lambda); };
            },
            [](const ProxBox& s) -> std::function<ExtReal(const Vector&)> {
                const Vector lo = s.lo, hi = s.hi;
                return [lo, hi](const Vector& z) { return ExtReal(support_box(lo, hi, z)); };
            },
            [](const ProxL2Ball& s) -> std::function<ExtReal(const Vector&)> {
                const double r = s.radius;
                const Vector c = s.center;
                return [r, c](const Vector& z) { return ExtReal(z.dot(c) + r * z.norm()); };
            },
        },
        spec);
    return ConjugateOracle{std::move(fn), ConjugateKind::analytic};
}

void GridSpec::validate() const {
    require_same_dim(lower, upper, "GridSpec");
    if (lower.size() < 1 || lower.size() > 2)
        throw std::invalid_argument("GridSpec: only one- and two-dimensional grids are supported");
    if (points_per_axis < 101) throw std::invalid_argument("GridSpec: need at least 101 points per axis");
    for (Index i = 0; i < lower.size(); ++i)
        if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            throw std::invalid_argument("GridSpec: bounds must be finite with lower <= upper");
}

double GridSpec::spacing() const {
    return (upper - lower).lpNorm<Eigen::Infinity>() / (points_per_axis - 1);
}

namespace {

double grid_coord(const GridSpec& g, Index axis, int j) {
    const int m = g.points_per_axis;
    if (j == m - 1) return g.upper[axis];
    return g.lower[axis] + (g.upper[axis] - g.lower[axis]) * static_cast<double>(j) / (m - 1);
}

}  // namespace

Vector GridSpec::snap(const Vector& x) const {
    validate();
    require_same_dim(lower, x, "GridSpec::snap");
    const int m = points_per_axis;
    Vector out(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        const double width = upper[i] - lower[i];
        const double pos = width > 0 ? (x[i] - lower[i]) / width * (m - 1) : 0.0;
        const int j = static_cast<int>(std::lround(std::clamp(pos, 0.0, static_cast<double>(m - 1))));
        out[i] = grid_coord(*this, i, j);
    }
    return out;
}

std::vector<Vector> GridSpec::points() const {
    validate();
    const Index dim = lower.size();
    const int m = points_per_axis;
    auto coord = [&](Index axis, int j) { return grid_coord(*this, axis, j); };
    std::vector<Vector> pts;
    if (dim == 1) {
        pts.reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) pts.push_back(Vector::Constant(1, coord(0, j)));
    } else {
        pts.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l) {
                Vector p(2);
                p << coord(0, j), coord(1, l);
                pts.push_back(std::move(p));
            }
    }
    return pts;
}

double numeric_conjugate(const std::function<ExtReal(const Vector&)>& h, const GridSpec& grid,
                         const Vector& z) {
    require_same_dim(grid.lower, z, "numeric_conjugate");
    double best = -std::numeric_limits<double>::infinity();
    for (const Vector& x : grid.points()) {
        const ExtReal hx = h(x);
        if (hx.is_infinite()) continue;
        best = std::max(best, z.dot(x) - hx.value());
    }
    if (best == -std::numeric_limits<double>::infinity())
        throw std::domain_error("numeric_conjugate: h is +infinity on every grid point");
    return best;
}

GridConjugate::GridConjugate(const std::function<ExtReal(const Vector&)>& h, const GridSpec& grid)
    : grid_(grid) {
    const auto pts = grid_.points();
    std::vector<Index> keep;
    std::vector<double> vals;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const ExtReal hx = h(pts[j]);
        if (hx.is_infinite()) continue;
        keep.push_back(static_cast<Index>(j));
        vals.push_back(hx.value());
    }
    if (keep.empty()) throw std::domain_error("GridConjugate: h is +infinity on every grid point");
    points_.resize(grid_.lower.size(), static_cast<Index>(keep.size()));
    values_.resize(static_cast<Index>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) {
        points_.col(static_cast<Index>(a)) = pts[static_cast<std::size_t>(keep[a])];
        values_[static_cast<Index>(a)] = vals[a];
    }
}

double GridConjugate::operator()(const Vector& z) const {
    require_same_dim(grid_.lower, z, "GridConjugate");
    return (points_.transpose() * z - values_).maxCoeff();
}

}  // namespace proxcert
