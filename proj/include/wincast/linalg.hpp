#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace wincast {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] std::span<const double> values() const noexcept { return data_; }
    [[nodiscard]] std::span<double> values() noexcept { return data_; }

    [[nodiscard]] Matrix transposed() const;
    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] double frobenius_norm() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// A Bᵀ without forming the transpose (rows of both operands are contiguous).
Matrix multiply_transposed(const Matrix& a, const Matrix& b);

/// Z Zᵀ over columns [begin, end) of Z, added into g (h×h, symmetric).
void accumulate_gram(Matrix& g, const Matrix& z, std::size_t begin, std::size_t end);

/// Factorization of (A + λI) for symmetric A that can solve any leading
/// principal block. Cholesky first; blocks past the first failed pivot fall
/// back to LU with partial pivoting. Throws SingularSystem only when a
/// requested block is singular.
class RidgeSystem {
public:
    RidgeSystem(const Matrix& a, double lambda);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// Number of leading rows that Cholesky factored.
    [[nodiscard]] std::size_t cholesky_rows() const noexcept { return chol_rows_; }

    /// Solves (A_hh + λI) x = b for the leading h×h block; b.size() == h.
    [[nodiscard]] std::vector<double> solve_leading(std::span<const double> b, std::size_t h) const;

private:
    [[nodiscard]] std::vector<double> solve_lu(std::span<const double> b, std::size_t h) const;

    std::size_t n_ = 0;
    double lambda_ = 0.0;
    Matrix a_;
    Matrix l_;
    std::size_t chol_rows_ = 0;
};

/// O* = T Zᵀ (Z Zᵀ + λI)⁻¹, the minimizer of Σ‖t_n − O z_n‖² + λ‖O‖_F².
/// Z is h×N (one column per sample), T is Q×N; returns Q×h.
Matrix solve_ridge(const Matrix& z, const Matrix& t, double lambda);

/// Σ‖t_n − O z_n‖² + λ‖O‖_F²
double ridge_objective(const Matrix& o, const Matrix& z, const Matrix& t, double lambda);

/// Rows [1, x, x², ..., x^degree].
Matrix vandermonde(std::span<const double> x, int degree);
Matrix vandermonde(std::span<const long> indices, int degree);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const Matrix& a);

/// 2-norm condition number σ_max / σ_min; infinity when rank deficient.
double condition_number(const Matrix& a);

}  // namespace wincast
