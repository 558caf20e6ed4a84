#include "amcmc/simd/kernels.hpp"

#include <cmath>
#include <cstring>

namespace amcmc::simd {
namespace {

double sum_scalar(const double* v, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i];
    return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double abs_diff_sum_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

double weighted_abs_diff_sum_scalar(const double* w, const double* a,
                                    const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::fabs(a[i] - b[i]);
    return acc;
}

double max_abs_scalar(const double* v, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot_scalar(a + r * cols, x, cols);
}

void vecmat_scalar(const double* x, const double* a, std::size_t rows,
                   std::size_t cols, double* y) {
    std::memset(y, 0, cols * sizeof(double));
    for (std::size_t r = 0; r < rows; ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        const double* row = a + r * cols;
        for (std::size_t c = 0; c < cols; ++c) y[c] += xr * row[c];
    }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar",
        sum_scalar,
        dot_scalar,
        abs_diff_sum_scalar,
        weighted_abs_diff_sum_scalar,
        max_abs_scalar,
        matvec_scalar,
        vecmat_scalar,
        axpy_scalar,
    };
    return table;
}

}  // namespace amcmc::simd
