#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace amcmc {

// Dense row-major matrix. Covers both the tiny p x p covariance work of the
// adaptive sampler and the (K*M) x (K*M) joint kernels of the exact engine.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) {
        return {data_.data() + r * cols_, cols_};
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// y = A x (SIMD-dispatched).
void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
// y = x^T A (SIMD-dispatched).
void vecmat(std::span<const double> x, const Matrix& a, std::span<double> y);
// C = A B.
Matrix matmul(const Matrix& a, const Matrix& b);

// |A|_s = sqrt(Tr(A^T A)), the Schur (Frobenius) norm used on Theta_+.
double schur_norm(const Matrix& a);
double schur_norm_diff(const Matrix& a, const Matrix& b);

bool is_symmetric(const Matrix& a, double tol);

// Lower-triangular Cholesky factor of an SPD matrix; throws NumericalError
// if a pivot is not strictly positive.
Matrix cholesky(const Matrix& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations (ascending).
std::vector<double> symmetric_eigenvalues(const Matrix& a);
double min_eigenvalue(const Matrix& a);

}  // namespace amcmc
