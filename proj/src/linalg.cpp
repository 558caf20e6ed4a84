#include "amcmc/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "amcmc/errors.hpp"
#include "amcmc/simd/kernels.hpp"

namespace amcmc {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.cols() || y.size() != a.rows())
        throw DimensionError("matvec: shape mismatch");
    simd::active().matvec(a.data(), a.rows(), a.cols(), x.data(), y.data());
}

void vecmat(std::span<const double> x, const Matrix& a, std::span<double> y) {
    if (x.size() != a.rows() || y.size() != a.cols())
        throw DimensionError("vecmat: shape mismatch");
    simd::active().vecmat(x.data(), a.data(), a.rows(), a.cols(), y.data());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        simd::active().vecmat(a.data() + r * a.cols(), b.data(), b.rows(),
                              b.cols(), c.data() + r * b.cols());
    return c;
}

double schur_norm(const Matrix& a) {
    const std::size_t n = a.rows() * a.cols();
    return std::sqrt(simd::active().dot(a.data(), a.data(), n));
}

double schur_norm_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("schur_norm_diff: shape mismatch");
    double acc = 0.0;
    const std::size_t n = a.rows() * a.cols();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a.data()[i] - b.data()[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

bool is_symmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::fabs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

Matrix cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("cholesky: square matrix required");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0))
            throw NumericalError("cholesky: matrix not positive definite");
        l(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / l(j, j);
        }
    }
    return l;
}

std::vector<double> symmetric_eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionError("symmetric_eigenvalues: square matrix required");
    const std::size_t n = a.rows();
    Matrix m = a;
    // Cyclic Jacobi; plenty for the p <= ~10 matrices this library handles.
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(m(p, q)) < 1e-300) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = m(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double min_eigenvalue(const Matrix& a) { return symmetric_eigenvalues(a).front(); }

}  // namespace amcmc
