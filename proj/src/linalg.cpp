#include "wincast/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wincast/error.hpp"
#include "wincast/kernels.hpp"

namespace wincast {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix data length " + std::to_string(data_.size()) +
                                                      " != " + std::to_string(rows_) + "x" +
                                                      std::to_string(cols_));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Matrix::frobenius_norm() const noexcept {
    return std::sqrt(kernels::active().dot(data_.data(), data_.data(), data_.size()));
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    Matrix out(a.rows(), b.cols());
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t p = 0; p < a.cols(); ++p) k.axpy(a(i, p), b.row(p).data(), out.row(i).data(), b.cols());
    return out;
}

Matrix multiply_transposed(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "A Bᵀ shape mismatch");
    Matrix out(a.rows(), b.rows());
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = k.dot(a.row(i).data(), b.row(j).data(), a.cols());
    return out;
}

void accumulate_gram(Matrix& g, const Matrix& z, std::size_t begin, std::size_t end) {
    const std::size_t h = z.rows();
    if (g.rows() != h || g.cols() != h || end > z.cols() || begin > end)
        throw Error(ErrorCode::DimensionMismatch, "gram accumulation shape mismatch");
    const auto& k = kernels::active();
    const std::size_t len = end - begin;
    for (std::size_t i = 0; i < h; ++i) {
        const double* zi = z.row(i).data() + begin;
        for (std::size_t j = i; j < h; ++j) {
            g(i, j) += k.dot(zi, z.row(j).data() + begin, len);
            g(j, i) = g(i, j);
        }
    }
}

// --- RidgeSystem -------------------------------------------------------------

RidgeSystem::RidgeSystem(const Matrix& a, double lambda) : n_(a.rows()), lambda_(lambda), a_(a), l_(n_, n_) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "ridge system must be square");
    const auto& k = kernels::active();
    // A pivot that lost all but ~8 bits of its diagonal counts as a failure.
    // The test is per row so it does not depend on n.
    constexpr double kPivotTol = 256.0 * std::numeric_limits<double>::epsilon();

    // Row-by-row (Banachiewicz): row i only reads rows < i, so the leading
    // h×h block of L is the factor of the leading h×h block of A + λI.
    for (std::size_t i = 0; i < n_; ++i) {
        double* li = l_.row(i).data();
        for (std::size_t j = 0; j < i; ++j) {
            li[j] = (a(i, j) - k.dot(li, l_.row(j).data(), j)) / l_(j, j);
        }
        const double d = a(i, i) + lambda - k.dot(li, li, i);
        if (!(d > kPivotTol * std::abs(a(i, i) + lambda)) || !std::isfinite(d)) return;
        li[i] = std::sqrt(d);
        chol_rows_ = i + 1;
    }
}

std::vector<double> RidgeSystem::solve_leading(std::span<const double> b, std::size_t h) const {
    if (h > n_ || b.size() != h) throw Error(ErrorCode::DimensionMismatch, "ridge solve block size mismatch");
    if (h > chol_rows_) return solve_lu(b, h);

    const auto& k = kernels::active();
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < h; ++i) x[i] = (x[i] - k.dot(l_.row(i).data(), x.data(), i)) / l_(i, i);
    for (std::size_t i = h; i-- > 0;) {
        x[i] /= l_(i, i);
        k.axpy(-x[i], l_.row(i).data(), x.data(), i);
    }
    return x;
}

std::vector<double> RidgeSystem::solve_lu(std::span<const double> b, std::size_t h) const {
    Matrix m(h, h);
    double scale = 0.0;
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < h; ++j) m(i, j) = a_(i, j);
        m(i, i) += lambda_;
        for (std::size_t j = 0; j < h; ++j) scale = std::max(scale, std::abs(m(i, j)));
    }
    std::vector<double> x(b.begin(), b.end());
    const double tiny = static_cast<double>(h) * std::numeric_limits<double>::epsilon() * scale;
    const auto& k = kernels::active();

    for (std::size_t c = 0; c < h; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < h; ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (!(std::abs(m(piv, c)) > tiny)) {
            throw Error(ErrorCode::SingularSystem,
                        "ridge system is numerically singular (block " + std::to_string(h) + ", lambda " +
                            std::to_string(lambda_) + ")");
        }
        if (piv != c) {
            std::swap_ranges(m.row(c).begin(), m.row(c).end(), m.row(piv).begin());
            std::swap(x[c], x[piv]);
        }
        for (std::size_t r = c + 1; r < h; ++r) {
            const double f = m(r, c) / m(c, c);
            if (f == 0.0) continue;
            k.axpy(-f, m.row(c).data() + c, m.row(r).data() + c, h - c);
            x[r] -= f * x[c];
        }
    }
    for (std::size_t i = h; i-- > 0;) {
        x[i] = (x[i] - k.dot(m.row(i).data() + i + 1, x.data() + i + 1, h - i - 1)) / m(i, i);
    }
    return x;
}

// --- ridge ---------------------------------------------------------------------

Matrix solve_ridge(const Matrix& z, const Matrix& t, double lambda) {
    if (z.cols() == 0) throw Error(ErrorCode::EmptyTrainingSet, "ridge regression needs at least one sample");
    if (z.cols() != t.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "Z has " + std::to_string(z.cols()) + " samples, T has " +
                                                      std::to_string(t.cols()));
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error(ErrorCode::InvalidArgument, "lambda must be finite and >= 0");
    if (!z.all_finite() || !t.all_finite()) throw Error(ErrorCode::NonFiniteInput, "non-finite entry in Z or T");

    const std::size_t h = z.rows();
    Matrix gram(h, h);
    accumulate_gram(gram, z, 0, z.cols());
    const Matrix rhs = multiply_transposed(t, z);  // Q×h
    const RidgeSystem sys(gram, lambda);

    Matrix o(t.rows(), h);
    for (std::size_t q = 0; q < t.rows(); ++q) {
        const auto x = sys.solve_leading(rhs.row(q), h);
        std::copy(x.begin(), x.end(), o.row(q).begin());
    }
    return o;
}

double ridge_objective(const Matrix& o, const Matrix& z, const Matrix& t, double lambda) {
    const Matrix pred = o * z;
    const auto& k = kernels::scalar_kernels();
    const auto p = pred.values();
    const auto tv = t.values();
    const auto ov = o.values();
    return k.sq_dist(p.data(), tv.data(), p.size()) + lambda * k.dot(ov.data(), ov.data(), ov.size());
}

// --- Vandermonde / conditioning ---------------------------------------------------

Matrix vandermonde(std::span<const double> x, int degree) {
    if (degree < 0) throw Error(ErrorCode::InvalidArgument, "degree must be >= 0");
    const auto cols = static_cast<std::size_t>(degree) + 1;
    Matrix v(x.size(), cols);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double p = 1.0;
        for (std::size_t j = 0; j < cols; ++j) {
            v(i, j) = p;
            p *= x[i];
        }
    }
    return v;
}

Matrix vandermonde(std::span<const long> indices, int degree) {
    std::vector<double> x(indices.begin(), indices.end());
    return vandermonde(x, degree);
}

std::vector<double> singular_values(const Matrix& a) {
    // Hestenes one-sided Jacobi on the columns of a working copy.
    Matrix u = a.rows() >= a.cols() ? a : a.transposed();
    const std::size_t m = u.rows();
    const std::size_t n = u.cols();
    Matrix ut = u.transposed();  // columns as contiguous rows
    const auto& k = kernels::scalar_kernels();
    const double eps = std::numeric_limits<double>::epsilon();

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* cp = ut.row(p).data();
                double* cq = ut.row(q).data();
                const double alpha = k.dot(cp, cp, m);
                const double beta = k.dot(cq, cq, m);
                const double gamma = k.dot(cp, cq, m);
                if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double xp = cp[i];
                    const double xq = cq[i];
                    cp[i] = c * xp - s * xq;
                    cq[i] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) sv[j] = std::sqrt(k.dot(ut.row(j).data(), ut.row(j).data(), m));
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

double condition_number(const Matrix& a) {
    const auto sv = singular_values(a);
    if (sv.empty() || sv.back() == 0.0) return std::numeric_limits<double>::infinity();
    return sv.front() / sv.back();
}

}  // namespace wincast
