// NEON variants for aarch64 (float64x2 lanes, baseline on that target).

#include "amcmc/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstring>

namespace amcmc::simd {
namespace {

double sum_neon(const double* v, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(v + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += v[i];
    return vaddvq_f64(acc) + tail;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return vaddvq_f64(acc) + tail;
}

double abs_diff_sum_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double tail = 0.0;
    for (; i < n; ++i) tail += std::fabs(a[i] - b[i]);
    return vaddvq_f64(acc) + tail;
}

double weighted_abs_diff_sum_neon(const double* w, const double* a,
                                  const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(w + i),
                        vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double tail = 0.0;
    for (; i < n; ++i) tail += w[i] * std::fabs(a[i] - b[i]);
    return vaddvq_f64(acc) + tail;
}

double max_abs_neon(const double* v, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(v + i)));
    double m = vmaxvq_f64(acc);
    for (; i < n; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

void matvec_neon(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(a + r * cols, x, cols);
}

void vecmat_neon(const double* x, const double* a, std::size_t rows,
                 std::size_t cols, double* y) {
    std::memset(y, 0, cols * sizeof(double));
    for (std::size_t r = 0; r < rows; ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        const float64x2_t xv = vdupq_n_f64(xr);
        const double* row = a + r * cols;
        std::size_t c = 0;
        for (; c + 2 <= cols; c += 2) {
            float64x2_t acc = vld1q_f64(y + c);
            acc = vfmaq_f64(acc, xv, vld1q_f64(row + c));
            vst1q_f64(y + c, acc);
        }
        for (; c < cols; ++c) y[c] += xr * row[c];
    }
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t acc = vld1q_f64(y + i);
        acc = vfmaq_f64(acc, av, vld1q_f64(x + i));
        vst1q_f64(y + i, acc);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& neon_kernels() {
    static const KernelTable table{
        "neon",
        sum_neon,
        dot_neon,
        abs_diff_sum_neon,
        weighted_abs_diff_sum_neon,
        max_abs_neon,
        matvec_neon,
        vecmat_neon,
        axpy_neon,
    };
    return table;
}

}  // namespace amcmc::simd

#endif  // aarch64
