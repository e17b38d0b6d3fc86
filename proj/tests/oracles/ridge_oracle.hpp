#pragma once

// Matrix-free conjugate gradient on the ridge normal equations, one output
// row at a time. It touches Z only through products Z(Zᵀv), so it shares
// no code path with the factorization in the library.

#include <cmath>
#include <vector>

#include "wincast/linalg.hpp"

namespace wincast::oracle {

inline std::vector<double> apply_normal(const Matrix& z, double lambda, const std::vector<double>& v) {
    const std::size_t h = z.rows();
    const std::size_t n = z.cols();
    std::vector<double> ztv(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < h; ++i) ztv[j] += z(i, j) * v[i];
    std::vector<double> out(h, 0.0);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < n; ++j) out[i] += z(i, j) * ztv[j];
        out[i] += lambda * v[i];
    }
    return out;
}

inline Matrix ridge_cg(const Matrix& z, const Matrix& t, double lambda) {
    const std::size_t h = z.rows();
    Matrix o(t.rows(), h);
    for (std::size_t q = 0; q < t.rows(); ++q) {
        std::vector<double> b(h, 0.0);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < z.cols(); ++j) b[i] += z(i, j) * t(q, j);
        std::vector<double> x(h, 0.0), r = b, p = b;
        double rr = 0.0, bb = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
            rr += r[i] * r[i];
            bb += b[i] * b[i];
        }
        // restarted every 10 steps from the true residual, which keeps
        // rounding drift from breaking conjugacy on ill-conditioned systems
        for (int it = 0; it < 200 * static_cast<int>(h) + 200 && rr > 1e-30 * bb; ++it) {
            const auto ap = apply_normal(z, lambda, p);
            double pap = 0.0;
            for (std::size_t i = 0; i < h; ++i) pap += p[i] * ap[i];
            const double alpha = rr / pap;
            for (std::size_t i = 0; i < h; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            const bool restart = it % 10 == 9;
            if (restart) {
                const auto ax = apply_normal(z, lambda, x);
                for (std::size_t i = 0; i < h; ++i) r[i] = b[i] - ax[i];
            }
            double rr2 = 0.0;
            for (std::size_t i = 0; i < h; ++i) rr2 += r[i] * r[i];
            const double beta = restart ? 0.0 : rr2 / rr;
            for (std::size_t i = 0; i < h; ++i) p[i] = r[i] + beta * p[i];
            rr = rr2;
        }
        for (std::size_t i = 0; i < h; ++i) o(q, i) = x[i];
    }
    return o;
}

// max |O(ZZᵀ+λI) − TZᵀ| / max |TZᵀ|
inline double normal_equation_residual(const Matrix& o, const Matrix& z, const Matrix& t, double lambda) {
    const std::size_t h = z.rows();
    double worst = 0.0, scale = 0.0;
    for (std::size_t q = 0; q < t.rows(); ++q) {
        std::vector<double> orow(o.row(q).begin(), o.row(q).end());
        const auto lhs = apply_normal(z, lambda, orow);
        for (std::size_t i = 0; i < h; ++i) {
            double rhs = 0.0;
            for (std::size_t j = 0; j < z.cols(); ++j) rhs += t(q, j) * z(i, j);
            worst = std::max(worst, std::abs(lhs[i] - rhs));
            scale = std::max(scale, std::abs(rhs));
        }
    }
    return scale == 0.0 ? worst : worst / scale;
}

}  // namespace wincast::oracle
