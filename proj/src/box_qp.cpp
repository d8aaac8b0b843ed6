#include "proxcert/box_qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace proxcert {

namespace {

enum class Status { free, at_lo, at_hi };

}  // namespace

BoxQpResult solve_box_qp(const Matrix& H, const Vector& g, const Vector& lo, const Vector& hi) {
    const Index n = g.size();
    if (H.rows() != n || H.cols() != n || lo.size() != n || hi.size() != n)
        throw std::invalid_argument("solve_box_qp: shape mismatch");
    for (Index i = 0; i < n; ++i)
        if (!(lo[i] <= hi[i])) throw std::invalid_argument("solve_box_qp: lo > hi");

    Vector u = Vector::Zero(n).cwiseMax(lo).cwiseMin(hi);
    std::vector<Status> status(static_cast<std::size_t>(n), Status::free);
    for (Index i = 0; i < n; ++i) {
        if (u[i] == lo[i]) status[i] = Status::at_lo;
        else if (u[i] == hi[i]) status[i] = Status::at_hi;
    }

    const double scale = 1.0 + g.lpNorm<Eigen::Infinity>() + H.lpNorm<Eigen::Infinity>();
    const int max_iter = 100 * static_cast<int>(n) + 100;

    BoxQpResult out;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        std::vector<Index> free_idx;
        for (Index i = 0; i < n; ++i)
            if (status[i] == Status::free) free_idx.push_back(i);

        bool blocked = false;
        if (!free_idx.empty()) {
            const auto nf = static_cast<Index>(free_idx.size());
            Matrix Hff(nf, nf);
            Vector rhs(nf);
            for (Index a = 0; a < nf; ++a) {
                const Index i = free_idx[a];
                double r = -g[i];
                for (Index j = 0; j < n; ++j)
                    if (status[j] != Status::free) r -= H(i, j) * u[j];
                rhs[a] = r;
                for (Index b = 0; b < nf; ++b) Hff(a, b) = H(i, free_idx[b]);
            }
            Eigen::LLT<Matrix> llt(Hff);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("solve_box_qp: matrix is not positive definite");
            const Vector target = llt.solve(rhs);

            double alpha = 1.0;
            Index block = -1;
            Status block_status = Status::free;
            for (Index a = 0; a < nf; ++a) {
                const Index i = free_idx[a];
                const double p = target[a] - u[i];
                if (p < 0.0 && std::isfinite(lo[i])) {
                    const double s = (lo[i] - u[i]) / p;
                    if (s < alpha) { alpha = s; block = i; block_status = Status::at_lo; }
                } else if (p > 0.0 && std::isfinite(hi[i])) {
                    const double s = (hi[i] - u[i]) / p;
                    if (s < alpha) { alpha = s; block = i; block_status = Status::at_hi; }
                }
            }
            alpha = std::max(alpha, 0.0);
            if (block < 0) {
                for (Index a = 0; a < nf; ++a) u[free_idx[a]] = target[a];
            } else {
                for (Index a = 0; a < nf; ++a) {
                    const Index i = free_idx[a];
                    u[i] = std::clamp(u[i] + alpha * (target[a] - u[i]), lo[i], hi[i]);
                }
                u[block] = block_status == Status::at_lo ? lo[block] : hi[block];
                status[block] = block_status;
                blocked = true;
            }
        }
        if (blocked) continue;

        // Subspace minimizer reached: release the bound with the most negative multiplier.
        const Vector grad = H * u + g;
        const double tol = 1e-13 * scale;
        Index release = -1;
        double worst = tol;
        for (Index i = 0; i < n; ++i) {
            if (lo[i] == hi[i]) continue;
            double violation = 0.0;
            if (status[i] == Status::at_lo) violation = -grad[i];
            else if (status[i] == Status::at_hi) violation = grad[i];
            if (violation > worst) { worst = violation; release = i; }
        }
        if (release < 0) {
            out.u = u;
            out.value = 0.5 * u.dot(H * u) + g.dot(u);
            return out;
        }
        status[release] = Status::free;
    }
    throw std::runtime_error("solve_box_qp: active-set iteration limit reached");
}

}  // namespace proxcert
