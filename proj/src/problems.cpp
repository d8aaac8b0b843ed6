#include "proxcert/problems.hpp"

#include "proxcert/box_qp.hpp"
#include "proxcert/schedules.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

namespace proxcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix from_row_major(Index rows, Index cols, const std::vector<double>& v) {
    if (static_cast<Index>(v.size()) != rows * cols)
        throw std::invalid_argument("problem data: matrix has " + std::to_string(v.size()) +
                                    " entries, expected " + std::to_string(rows * cols));
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) M(i, j) = v[static_cast<std::size_t>(i * cols + j)];
    return M;
}

std::vector<double> to_row_major(const Matrix& M) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(M.size()));
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j) v.push_back(M(i, j));
    return v;
}

Vector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void require_shapes(const Matrix& A, const Vector& b, const Vector& x0, const char* where) {
    if (A.rows() != b.size() || A.cols() != x0.size() || A.cols() < 1)
        throw std::invalid_argument(std::string(where) + ": inconsistent dimensions");
    if (!A.allFinite() || !all_finite(b) || !all_finite(x0))
        throw std::invalid_argument(std::string(where) + ": data must be finite");
}

void require_box(const Vector& lo, const Vector& hi, Index n, const char* where) {
    if (lo.size() != n || hi.size() != n)
        throw std::invalid_argument(std::string(where) + ": box has the wrong dimension");
    for (Index i = 0; i < n; ++i)
        if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i])
            throw std::invalid_argument(std::string(where) + ": box is empty");
}

double max_eigenvalue(const Matrix& Q) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

SmoothOracle least_squares_phi(const Matrix& A, const Vector& b, std::optional<double> L) {
    SmoothOracle phi;
    phi.value = [A, b](const Vector& x) { return 0.5 * (A * x - b).squaredNorm(); };
    phi.gradient = [A, b](const Vector& x) -> Vector { return A.transpose() * (A * x - b); };
    phi.lipschitz = L;
    return phi;
}

std::optional<double> positive_or_none(double v) {
    if (v > 0.0) return v;
    return std::nullopt;
}

struct RunBest {
    double f = kInf;
    Vector x;
};

/// Accelerated run with t = 1/L, tracking the best f(x_k).
RunBest accelerated_best(const CompositeObjective& obj, double L, const Vector& x0, int budget) {
    RunBest best{obj.f(x0).raw(), x0};
    const double t = 1.0 / L;
    Vector x = x0, y = x0;
    double theta = 1.0;
    for (int k = 0; k < budget; ++k) {
        const Vector g = obj.phi().gradient(y);
        Vector x_next = obj.psi().prox(t, y - t * g);
        const double fx = obj.f(x_next).raw();
        if (fx < best.f) best = {fx, x_next};
        const double theta_next = next_theta_fista(theta);
        y = x_next + (theta_next * (1.0 - theta) / theta) * (x_next - x);
        x = std::move(x_next);
        theta = theta_next;
    }
    return best;
}

/// Projected subgradient run with t_i = D / (L sqrt(i+1)); returns the best
/// iterate and the Lipschitz-form accuracy bound.
std::pair<RunBest, double> subgradient_best(const CompositeObjective& obj,
                                            const Subgradient& subgrad, double L, double D,
                                            const Vector& x0, int budget) {
    RunBest best{obj.f(x0).raw(), x0};
    Vector x = x0;
    double sum_t = 0.0, sum_t2 = 0.0;
    const double c = (L > 0.0 && D > 0.0) ? D / L : 1.0;
    for (int i = 0; i < budget; ++i) {
        const double t = c / std::sqrt(static_cast<double>(i) + 1.0);
        sum_t += t;
        sum_t2 += t * t;
        x = obj.psi().prox(t, x - t * subgrad(x));
        const double fx = obj.f(x).raw();
        if (fx < best.f) best = {fx, x};
    }
    return {best, (sum_t2 * L * L + D * D) / (2.0 * sum_t)};
}

/// Largest distance from x0 to a point of the box; an upper bound on dist(x0, X).
double box_radius_from(const Vector& x0, const Vector& lo, const Vector& hi) {
    double s = 0.0;
    for (Index i = 0; i < x0.size(); ++i) {
        const double d = std::max(std::abs(x0[i] - lo[i]), std::abs(x0[i] - hi[i]));
        s += d * d;
    }
    return std::sqrt(s);
}

double exact_accuracy(double f) { return 1e-12 * (1.0 + std::abs(f)); }

ConjugateOracle grid_conjugate(const CompositeObjective& obj, const GridSpec& grid) {
    auto gc = std::make_shared<GridConjugate>([&obj](const Vector& x) { return obj.f(x); }, grid);
    return ConjugateOracle{[gc](const Vector& z) { return ExtReal((*gc)(z)); },
                           ConjugateKind::numeric_grid};
}

// --- piecewise-linear minimization in one or two dimensions -----------------

double point_segment_distance(const Vector& p, const Vector& a, const Vector& b) {
    const Vector ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + s * ab)).norm();
}

double cross2(const Vector& o, const Vector& a, const Vector& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Distance from p to the convex hull of 2D points.
double hull_distance_2d(const Vector& p, std::vector<Vector> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vector& a, const Vector& b) { return (a - b).norm() < 1e-13; }),
              pts.end());
    if (pts.size() == 1) return (p - pts[0]).norm();
    std::vector<Vector> hull(2 * pts.size());
    std::size_t h = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (h >= 2 && cross2(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
        hull[h++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = h + 1; i-- > 0;) {
        while (h >= lower && cross2(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
        hull[h++] = pts[i];
    }
    hull.resize(h - 1);
    if (hull.size() >= 3) {
        bool inside = true;
        for (std::size_t i = 0; i < hull.size(); ++i)
            if (cross2(hull[i], hull[(i + 1) % hull.size()], p) < 0) inside = false;
        if (inside) return 0.0;
    }
    double best = kInf;
    for (std::size_t i = 0; i < hull.size(); ++i)
        best = std::min(best, point_segment_distance(p, hull[i], hull[(i + 1) % hull.size()]));
    return best;
}

struct PiecewiseOptimum {
    double f = kInf;
    Vector x;
    double dist = kInf;
};

/// Exact minimum of ||Ax - b||_1 over a bounded box for n <= 2. The optimum is
/// attained on vertices of the arrangement of the lines a_i'x = b_i and the
/// box edges, and the optimal set is the hull of the optimal vertices.
PiecewiseOptimum l1_vertex_enumeration(const Matrix& A, const Vector& b, const Vector& lo,
                                       const Vector& hi, const Vector& x0) {
    const Index n = A.cols();
    auto f = [&](const Vector& x) { return (A * x - b).lpNorm<1>(); };
    std::vector<Vector> cand;
    if (n == 1) {
        cand.push_back(lo);
        cand.push_back(hi);
        for (Index i = 0; i < A.rows(); ++i)
            if (A(i, 0) != 0.0) {
                const double r = b[i] / A(i, 0);
                if (r >= lo[0] && r <= hi[0]) cand.push_back(Vector::Constant(1, r));
            }
    } else {
        struct Line {
            double a0, a1, c;
        };
        std::vector<Line> lines;
        for (Index i = 0; i < A.rows(); ++i)
            if (A(i, 0) != 0.0 || A(i, 1) != 0.0) lines.push_back({A(i, 0), A(i, 1), b[i]});
        lines.push_back({1, 0, lo[0]});
        lines.push_back({1, 0, hi[0]});
        lines.push_back({0, 1, lo[1]});
        lines.push_back({0, 1, hi[1]});
        const double slack = 1e-12 * (1.0 + (hi - lo).lpNorm<Eigen::Infinity>());
        for (std::size_t i = 0; i < lines.size(); ++i)
            for (std::size_t j = i + 1; j < lines.size(); ++j) {
                const Line& p = lines[i];
                const Line& q = lines[j];
                const double det = p.a0 * q.a1 - p.a1 * q.a0;
                if (std::abs(det) < 1e-14 * (std::abs(p.a0) + std::abs(p.a1)) *
                                        (std::abs(q.a0) + std::abs(q.a1)))
                    continue;
                Vector v(2);
                v << (p.c * q.a1 - p.a1 * q.c) / det, (p.a0 * q.c - p.c * q.a0) / det;
                if (v[0] < lo[0] - slack || v[0] > hi[0] + slack || v[1] < lo[1] - slack ||
                    v[1] > hi[1] + slack)
                    continue;
                cand.push_back(project_box(lo, hi, v));
            }
    }
    PiecewiseOptimum out;
    std::vector<double> vals;
    for (const Vector& v : cand) vals.push_back(f(v));
    for (std::size_t i = 0; i < cand.size(); ++i)
        if (vals[i] < out.f) {
            out.f = vals[i];
            out.x = cand[i];
        }
    const double tol = 1e-10 * (1.0 + std::abs(out.f));
    std::vector<Vector> optimal;
    for (std::size_t i = 0; i < cand.size(); ++i)
        if (vals[i] <= out.f + tol) optimal.push_back(cand[i]);
    if (n == 1) {
        double a = kInf, c = -kInf;
        for (const Vector& v : optimal) {
            a = std::min(a, v[0]);
            c = std::max(c, v[0]);
        }
        out.dist = x0[0] < a ? a - x0[0] : (x0[0] > c ? x0[0] - c : 0.0);
    } else {
        out.dist = hull_distance_2d(x0, optimal);
    }
    return out;
}

ProblemData base_data(const std::string& name, ProblemKind kind, const Matrix& M,
                      const Vector& v, const Vector& x0) {
    ProblemData d;
    d.name = name;
    d.kind = kind;
    d.rows = M.rows();
    d.cols = M.cols();
    d.matrix = to_row_major(M);
    d.vec = to_std(v);
    d.x0 = to_std(x0);
    return d;
}

}  // namespace

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::least_squares: return "least_squares";
        case ProblemKind::lasso: return "lasso";
        case ProblemKind::box_qp: return "box_qp";
        case ProblemKind::l1_regression: return "l1_regression";
    }
    return "unknown";
}

std::string to_string(FstarStrategy s) {
    switch (s) {
        case FstarStrategy::analytic: return "analytic";
        case FstarStrategy::dual_solve: return "dual_solve";
        case FstarStrategy::numeric_grid: return "numeric_grid";
        case FstarStrategy::unavailable: return "unavailable";
    }
    return "unknown";
}

ProblemKind problem_kind_from_string(const std::string& s) {
    for (auto k : {ProblemKind::least_squares, ProblemKind::lasso, ProblemKind::box_qp,
                   ProblemKind::l1_regression})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown problem kind '" + s + "'");
}

FstarStrategy fstar_strategy_from_string(const std::string& s) {
    for (auto k : {FstarStrategy::analytic, FstarStrategy::dual_solve, FstarStrategy::numeric_grid,
                   FstarStrategy::unavailable})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown fstar strategy '" + s + "'");
}

// --- JSON -----------------------------------------------------------------

std::string problem_to_json(const ProblemData& d) {
    nlohmann::json j;
    j["name"] = d.name;
    j["kind"] = to_string(d.kind);
    j["rows"] = d.rows;
    j["cols"] = d.cols;
    j["matrix"] = d.matrix;
    j["vector"] = d.vec;
    if (d.kind == ProblemKind::lasso) j["lambda"] = d.lambda;
    if (!d.lo.empty()) j["lo"] = d.lo;
    if (!d.hi.empty()) j["hi"] = d.hi;
    j["seed"] = d.seed ? nlohmann::json(*d.seed) : nlohmann::json(nullptr);
    j["x0"] = d.x0;
    if (d.fstar) j["fstar"] = to_string(*d.fstar);
    return j.dump(2);
}

ProblemData problem_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("problem file: ") + e.what());
    }
    try {
        ProblemData d;
        d.name = j.value("name", std::string("unnamed"));
        d.kind = problem_kind_from_string(j.at("kind").get<std::string>());
        d.rows = j.at("rows").get<Index>();
        d.cols = j.at("cols").get<Index>();
        d.matrix = j.at("matrix").get<std::vector<double>>();
        d.vec = j.at("vector").get<std::vector<double>>();
        d.lambda = j.value("lambda", 0.0);
        d.lo = j.value("lo", std::vector<double>{});
        d.hi = j.value("hi", std::vector<double>{});
        if (j.contains("seed") && !j["seed"].is_null()) d.seed = j["seed"].get<std::uint64_t>();
        d.x0 = j.value("x0", std::vector<double>(static_cast<std::size_t>(d.cols), 0.0));
        if (j.contains("fstar")) d.fstar = fstar_strategy_from_string(j["fstar"].get<std::string>());
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("problem file: ") + e.what());
    }
}

ProblemData load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open problem file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return problem_from_json(ss.str());
}

void save_problem_file(const ProblemData& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write problem file " + path);
    out << problem_to_json(data) << "\n";
}

// --- constructors ---------------------------------------------------------

ProblemInstance make_least_squares(const Matrix& A, const Vector& b, const Vector& x0) {
    require_shapes(A, b, x0, "make_least_squares");
    const Matrix Q = A.transpose() * A;
    const Vector c = A.transpose() * b;
    const double half_bb = 0.5 * b.squaredNorm();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
    const Vector ev = es.eigenvalues();
    const double L = ev.maxCoeff();
    const double rank_tol = 1e-12 * std::max(L, 1.0);
    const bool full_rank = ev.minCoeff() > rank_tol;

    ProblemInstance inst{CompositeObjective(A.cols(), least_squares_phi(A, b, positive_or_none(L)),
                                            make_prox_oracle(ProxZero{}))};
    inst.name = "least_squares";
    inst.kind = ProblemKind::least_squares;
    inst.x0 = x0;
    inst.subgradient = inst.objective.phi().gradient;
    inst.L = positive_or_none(L);

    // Projection of x0 onto the solution set {x : A'Ax = A'b}; the unique
    // solution when A has full column rank.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    const Vector x_bar = x0 - cod.solve(A * x0 - b);
    inst.x_bar = x_bar;
    inst.f_bar = {inst.objective.f(x_bar).value(), 0.0};
    inst.f_bar.accuracy = exact_accuracy(inst.f_bar.value);
    inst.dist = {(x0 - x_bar).norm(), 1e-12 * (1.0 + x_bar.norm())};

    ConjugateOracle fstar;
    fstar.kind = ConjugateKind::analytic;
    if (full_rank) {
        fstar.conj_value = [Q, c, half_bb](const Vector& z) {
            return ExtReal(conjugate_quadratic(Q, c, half_bb, z));
        };
    } else {
        const Matrix V = es.eigenvectors();
        fstar.conj_value = [V, ev, c, half_bb, rank_tol](const Vector& z) {
            const Vector w = z + c;
            const Vector v = V.transpose() * w;
            double s = 0.0;
            for (Index i = 0; i < v.size(); ++i) {
                if (ev[i] > rank_tol) {
                    s += v[i] * v[i] / ev[i];
                } else if (std::abs(v[i]) > 1e-9 * (1.0 + w.norm())) {
                    return ExtReal::infinity();
                }
            }
            return ExtReal(0.5 * s - half_bb);
        };
    }
    inst.fstar_strategy = FstarStrategy::analytic;
    inst.fstar = fstar;
    inst.objective.phi_conjugate = fstar;
    inst.objective.psi_conjugate = make_prox_conjugate(ProxZero{});
    inst.objective.f_conjugate = fstar;
    inst.data = base_data(inst.name, inst.kind, A, b, x0);
    return inst;
}

ProblemInstance make_lasso(const Matrix& A, const Vector& b, double lambda, const Vector& x0) {
    require_shapes(A, b, x0, "make_lasso");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("make_lasso: lambda must be positive");
    const Index n = A.cols();
    const Matrix Q = A.transpose() * A;
    const Vector c = A.transpose() * b;
    const double half_bb = 0.5 * b.squaredNorm();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
    const double L = es.eigenvalues().maxCoeff();
    const bool pd = es.eigenvalues().minCoeff() > 1e-13 * std::max(L, 1.0);

    ProblemInstance inst{CompositeObjective(n, least_squares_phi(A, b, positive_or_none(L)),
                                            make_prox_oracle(ProxL1{lambda}))};
    inst.name = "lasso";
    inst.kind = ProblemKind::lasso;
    inst.x0 = x0;
    inst.subgradient = inst.objective.phi().gradient;
    inst.L = positive_or_none(L);
    inst.objective.psi_conjugate = make_prox_conjugate(ProxL1{lambda});
    inst.data = base_data(inst.name, inst.kind, A, b, x0);
    inst.data.lambda = lambda;

    if (!pd) {
        // No dual solve without Q^{-1}; fall back to a long accelerated run.
        if (!inst.L) throw std::invalid_argument("make_lasso: A must be nonzero");
        const RunBest best = accelerated_best(inst.objective, *inst.L, x0, 200000);
        inst.x_bar = best.x;
        inst.f_bar = {best.f, kInf};
        inst.dist = {(x0 - best.x).norm(), kInf};
        inst.fstar_strategy = FstarStrategy::unavailable;
        return inst;
    }

    // f*(z) = min_{|u|_inf <= lambda} phi*(z - u), a box QP in u with Hessian Q^{-1}.
    auto llt = std::make_shared<Eigen::LLT<Matrix>>(Q);
    const Matrix Qinv = llt->solve(Matrix::Identity(n, n));
    const Vector box_lo = Vector::Constant(n, -lambda);
    const Vector box_hi = Vector::Constant(n, lambda);
    auto dual_u = [=](const Vector& z) -> Vector {
        const Vector w = z + c;
        return solve_box_qp(Qinv, -(Qinv * w), box_lo, box_hi).u;
    };
    ConjugateOracle fstar;
    fstar.kind = ConjugateKind::dual_solve;
    fstar.conj_value = [=](const Vector& z) {
        const Vector v = z + c - dual_u(z);
        return ExtReal(0.5 * v.dot(llt->solve(v)) - half_bb);
    };

    // The dual solution fixes the support and signs; solve the restricted
    // normal equations for x_bar there.
    const Vector u = dual_u(Vector::Zero(n));
    std::vector<Index> support;
    for (Index i = 0; i < n; ++i)
        if (std::abs(u[i]) >= lambda * (1.0 - 1e-12)) support.push_back(i);
    Vector x_bar = Vector::Zero(n);
    if (!support.empty()) {
        const auto s = static_cast<Index>(support.size());
        Matrix Qs(s, s);
        Vector rhs(s);
        for (Index i = 0; i < s; ++i) {
            rhs[i] = c[support[i]] - (u[support[i]] > 0 ? lambda : -lambda);
            for (Index j = 0; j < s; ++j) Qs(i, j) = Q(support[i], support[j]);
        }
        const Vector xs = Qs.llt().solve(rhs);
        for (Index i = 0; i < s; ++i) x_bar[support[i]] = xs[i];
    }
    const double f_bar = inst.objective.f(x_bar).value();
    const double dual_value = -fstar.conj_value(Vector::Zero(n)).value();
    inst.x_bar = x_bar;
    inst.f_bar = {f_bar, std::max(std::abs(f_bar - dual_value), exact_accuracy(f_bar))};
    inst.dist = {(x0 - x_bar).norm(), 1e-10 * (1.0 + x_bar.norm())};
    inst.fstar_strategy = FstarStrategy::dual_solve;
    inst.fstar = fstar;
    inst.objective.f_conjugate = fstar;
    inst.objective.phi_conjugate = ConjugateOracle{
        [=](const Vector& z) {
            const Vector v = z + c;
            return ExtReal(0.5 * v.dot(llt->solve(v)) - half_bb);
        },
        ConjugateKind::analytic};
    return inst;
}

ProblemInstance make_box_qp(const Matrix& Q, const Vector& c, const Vector& lo, const Vector& hi,
                            const Vector& x0, FstarStrategy strategy) {
    const Index n = Q.rows();
    if (Q.cols() != n || c.size() != n || x0.size() != n || n < 1)
        throw std::invalid_argument("make_box_qp: inconsistent dimensions");
    require_box(lo, hi, n, "make_box_qp");
    if (!(Q - Q.transpose()).isZero(1e-12 * (1.0 + Q.cwiseAbs().maxCoeff())))
        throw std::invalid_argument("make_box_qp: Q must be symmetric");
    if (Q.llt().info() != Eigen::Success)
        throw std::invalid_argument("make_box_qp: Q must be positive definite");
    if (strategy == FstarStrategy::analytic)
        throw std::invalid_argument("make_box_qp: no analytic conjugate; use dual_solve");

    const double L = max_eigenvalue(Q);
    SmoothOracle phi;
    phi.value = [Q, c](const Vector& x) { return 0.5 * x.dot(Q * x) + c.dot(x); };
    phi.gradient = [Q, c](const Vector& x) -> Vector { return Q * x + c; };
    phi.lipschitz = L;

    ProblemInstance inst{CompositeObjective(n, phi, make_prox_oracle(ProxBox{lo, hi}))};
    inst.name = "box_qp";
    inst.kind = ProblemKind::box_qp;
    inst.x0 = x0;
    inst.subgradient = inst.objective.phi().gradient;
    inst.L = L;
    inst.objective.psi_conjugate = make_prox_conjugate(ProxBox{lo, hi});
    inst.objective.phi_conjugate = ConjugateOracle{
        [Q, c](const Vector& z) { return ExtReal(conjugate_quadratic(Q, -c, 0.0, z)); },
        ConjugateKind::analytic};

    const Vector x_bar = project_box(lo, hi, solve_box_qp(Q, c, lo, hi).u);
    inst.x_bar = x_bar;
    inst.f_bar = {inst.objective.f(x_bar).value(), 0.0};
    inst.f_bar.accuracy = exact_accuracy(inst.f_bar.value);
    inst.dist = {(x0 - x_bar).norm(), 1e-12 * (1.0 + x_bar.norm())};

    inst.fstar_strategy = strategy;
    if (strategy == FstarStrategy::dual_solve) {
        inst.fstar = ConjugateOracle{
            [Q, c, lo, hi](const Vector& z) {
                return ExtReal(-solve_box_qp(Q, c - z, lo, hi).value);
            },
            ConjugateKind::dual_solve};
    } else if (strategy == FstarStrategy::numeric_grid) {
        if (n > 2 || !all_finite(lo) || !all_finite(hi))
            throw std::invalid_argument("make_box_qp: numeric-grid conjugate needs dim <= 2 and a bounded box");
        GridSpec grid{lo, hi, 1001};
        inst.grid = grid;
        inst.fstar = grid_conjugate(inst.objective, grid);
    }
    inst.objective.f_conjugate = inst.fstar;

    inst.data = base_data(inst.name, inst.kind, Q, c, x0);
    inst.data.lo = to_std(lo);
    inst.data.hi = to_std(hi);
    if (strategy != FstarStrategy::dual_solve) inst.data.fstar = strategy;
    return inst;
}

ProblemInstance make_l1_regression(const Matrix& A, const Vector& b, const Vector& lo,
                                   const Vector& hi, const Vector& x0) {
    require_shapes(A, b, x0, "make_l1_regression");
    const Index n = A.cols();
    require_box(lo, hi, n, "make_l1_regression");
    if (!all_finite(lo) || !all_finite(hi))
        throw std::invalid_argument("make_l1_regression: the box must be bounded");

    SmoothOracle phi;
    phi.value = [A, b](const Vector& x) { return (A * x - b).lpNorm<1>(); };
    phi.gradient = [A, b](const Vector& x) -> Vector {
        const Vector r = A * x - b;
        Vector s(r.size());
        for (Index i = 0; i < r.size(); ++i) s[i] = r[i] > 0 ? 1.0 : (r[i] < 0 ? -1.0 : 0.0);
        return A.transpose() * s;
    };
    double L = 0.0;
    for (Index i = 0; i < A.rows(); ++i) L += A.row(i).norm();

    ProblemInstance inst{CompositeObjective(n, phi, make_prox_oracle(ProxBox{lo, hi}))};
    inst.name = "l1_regression";
    inst.kind = ProblemKind::l1_regression;
    inst.x0 = x0;
    inst.smooth = false;
    inst.subgradient = inst.objective.phi().gradient;
    inst.L = L;
    inst.objective.psi_conjugate = make_prox_conjugate(ProxBox{lo, hi});
    inst.data = base_data(inst.name, inst.kind, A, b, x0);
    inst.data.lo = to_std(lo);
    inst.data.hi = to_std(hi);

    if (n <= 2) {
        const PiecewiseOptimum opt = l1_vertex_enumeration(A, b, lo, hi, x0);
        inst.x_bar = opt.x;
        inst.f_bar = {opt.f, exact_accuracy(opt.f)};
        inst.dist = {opt.dist, 1e-10 * (1.0 + opt.x.norm())};
        GridSpec grid{lo, hi, 1001};
        inst.grid = grid;
        inst.fstar_strategy = FstarStrategy::numeric_grid;
        inst.fstar = grid_conjugate(inst.objective, grid);
        inst.objective.f_conjugate = inst.fstar;
    } else {
        const double D = box_radius_from(project_box(lo, hi, x0), lo, hi) +
                         (x0 - project_box(lo, hi, x0)).norm();
        auto [best, acc] = subgradient_best(inst.objective, inst.subgradient, L, D,
                                            project_box(lo, hi, x0), 200000);
        inst.x_bar = best.x;
        inst.f_bar = {best.f, acc};
        inst.dist = {(x0 - best.x).norm(), kInf};
        inst.fstar_strategy = FstarStrategy::unavailable;
    }
    return inst;
}

ProblemInstance make_problem(const ProblemData& d) {
    const Matrix M = from_row_major(d.rows, d.cols, d.matrix);
    const Vector v = to_vector(d.vec);
    const Vector x0 = to_vector(d.x0);
    ProblemInstance inst = [&] {
        switch (d.kind) {
            case ProblemKind::least_squares: return make_least_squares(M, v, x0);
            case ProblemKind::lasso: return make_lasso(M, v, d.lambda, x0);
            case ProblemKind::box_qp:
                return make_box_qp(M, v, to_vector(d.lo), to_vector(d.hi), x0,
                                   d.fstar.value_or(FstarStrategy::dual_solve));
            case ProblemKind::l1_regression:
                return make_l1_regression(M, v, to_vector(d.lo), to_vector(d.hi), x0);
        }
        throw std::invalid_argument("make_problem: unknown kind");
    }();
    inst.name = d.name;
    inst.data.name = d.name;
    inst.data.seed = d.seed;
    return inst;
}

Estimate reference_optimum(const ProblemInstance& p, int budget) {
    if (budget < 10) throw std::invalid_argument("reference_optimum: budget must be at least 10");
    if (p.kind == ProblemKind::least_squares) return p.f_bar;
    if (!p.L) throw std::invalid_argument("reference_optimum: problem has no Lipschitz constant");
    const bool dist_known = std::isfinite(p.dist.accuracy);
    const double dist = p.dist.value + (dist_known ? p.dist.accuracy : 0.0);
    if (p.smooth) {
        const RunBest best = accelerated_best(p.objective, *p.L, p.x0, budget);
        const double rate = 2.0 * *p.L * dist * dist /
                            ((budget + 1.0) * (budget + 1.0));
        return {best.f, dist_known ? rate : kInf};
    }
    const Vector lo = to_vector(p.data.lo), hi = to_vector(p.data.hi);
    const Vector start = project_box(lo, hi, p.x0);
    const double D = box_radius_from(start, lo, hi);
    auto [best, acc] = subgradient_best(p.objective, p.subgradient, *p.L, D, start, budget);
    return {best.f, acc};
}

Vector brute_force_prox(const std::function<ExtReal(const Vector&)>& psi, double t,
                        const Vector& x, const GridSpec& grid) {
    grid.validate();
    if (x.size() != grid.lower.size())
        throw std::invalid_argument("brute_force_prox: grid dimension does not match x");
    if (!(t > 0.0)) throw std::invalid_argument("brute_force_prox: t must be positive");
    double best = kInf;
    Vector arg;
    for (const Vector& y : grid.points()) {
        const ExtReal v = psi(y);
        if (v.is_infinite()) continue;
        const double total = v.value() + (x - y).squaredNorm() / (2.0 * t);
        if (total < best) {
            best = total;
            arg = y;
        }
    }
    if (arg.size() == 0) throw std::domain_error("brute_force_prox: psi is +inf on the whole grid");
    return arg;
}

// --- built-in instances ---------------------------------------------------

namespace {

struct Generator {
    std::mt19937_64 rng;
    std::normal_distribution<double> normal{0.0, 1.0};

    explicit Generator(std::uint64_t seed) : rng(seed) {}
    Matrix matrix(Index r, Index c) {
        Matrix M(r, c);
        for (Index j = 0; j < c; ++j)
            for (Index i = 0; i < r; ++i) M(i, j) = normal(rng);
        return M;
    }
    Vector vector(Index n) { return matrix(n, 1).col(0); }
    /// r x c with orthonormal columns.
    Matrix orthonormal(Index r, Index c) {
        Eigen::HouseholderQR<Matrix> qr(matrix(r, c));
        return qr.householderQ() * Matrix::Identity(r, c);
    }
};

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("PROXCERT_SEED");
    if (!s || !*s) return std::nullopt;
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != std::string(s).size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("PROXCERT_SEED is not an unsigned integer: ") + s);
    }
}

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

ProblemInstance seeded_instance(const std::string& name, std::uint64_t seed) {
    Generator g(seed);
    if (name == "ls-2d") {
        return make_least_squares(g.matrix(4, 2), g.vector(4), g.vector(2));
    }
    if (name == "lasso-2d") {
        const Matrix A = g.matrix(5, 2);
        const Vector b = g.vector(5);
        const double lambda = 0.3 * (A.transpose() * b).lpNorm<Eigen::Infinity>();
        return make_lasso(A, b, lambda, g.vector(2));
    }
    if (name == "lasso-20") {
        // Singular values spread geometrically over three decades, so the
        // smallest curvature directions keep the run in its sublinear regime.
        const Index m = 40, n = 20;
        const Matrix U = g.orthonormal(m, n);
        const Matrix V = g.orthonormal(n, n);
        Vector s(n);
        for (Index i = 0; i < n; ++i) s[i] = std::pow(10.0, -3.0 * static_cast<double>(i) / (n - 1));
        const Matrix A = U * s.asDiagonal() * V.transpose();
        const Vector x_true = g.vector(n);
        const Vector b = A * x_true + 0.01 * g.vector(m);
        const double lambda = 1e-3 * (A.transpose() * b).lpNorm<Eigen::Infinity>();
        return make_lasso(A, b, lambda, Vector::Zero(n));
    }
    if (name == "boxqp-2d" || name == "boxqp-10") {
        const Index n = name == "boxqp-2d" ? 2 : 10;
        const Matrix M = g.matrix(n, n);
        const Matrix Q = M.transpose() * M / static_cast<double>(n) + 0.1 * Matrix::Identity(n, n);
        const Vector c = 2.0 * g.vector(n);
        const Vector x0 = g.vector(n);
        return make_box_qp(Q, c, Vector::Constant(n, -1.0), Vector::Constant(n, 1.0), x0,
                           n == 2 ? FstarStrategy::numeric_grid : FstarStrategy::dual_solve);
    }
    if (name == "l1reg-2d") {
        const Matrix A = g.matrix(8, 2);
        const Vector b = g.vector(8);
        return make_l1_regression(A, b, Vector::Constant(2, -1.0), Vector::Constant(2, 1.0),
                                  vec({1.0, -1.0}));
    }
    throw std::invalid_argument("unknown built-in problem '" + name + "'");
}

constexpr std::uint64_t kDefaultSeed = 20240611;

}  // namespace

std::vector<std::string> builtin_names() {
    return {"ls-1d",    "ls-2d",    "lasso-1d", "lasso-2d", "lasso-20",
            "boxqp-2d", "boxqp-10", "l1reg-2d", "l1reg-toy"};
}

ProblemInstance builtin(const std::string& name, std::optional<std::uint64_t> seed) {
    ProblemInstance inst = [&]() -> ProblemInstance {
        if (name == "ls-1d") return make_least_squares(Matrix::Constant(1, 1, 2.0), vec({2.0}), vec({0.0}));
        if (name == "lasso-1d")
            return make_lasso(Matrix::Identity(1, 1), vec({3.0}), 1.0, vec({0.0}));
        if (name == "l1reg-toy")
            return make_l1_regression(Matrix::Identity(2, 2), vec({0.5, -0.5}), vec({0.0, 0.0}),
                                      vec({1.0, 1.0}), vec({1.0, 1.0}));
        const std::uint64_t s = seed ? *seed : env_seed().value_or(kDefaultSeed);
        ProblemInstance out = seeded_instance(name, s);
        out.data.seed = s;
        return out;
    }();
    inst.name = inst.data.seed ? name + "#" + std::to_string(*inst.data.seed) : name;
    inst.data.name = name;
    return inst;
}

ProblemInstance resolve_problem(const std::string& ref) {
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), ref) != names.end()) return builtin(ref);
    std::ifstream probe(ref);
    if (!probe)
        throw std::invalid_argument("unknown problem '" + ref +
                                    "': not a built-in name and not a readable file");
    return make_problem(load_problem_file(ref));
}

}  // namespace proxcert
