// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// callers must check avx2_available() before taking this table.

#include "amcmc/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace amcmc::simd {
namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double sum_avx2(const double* v, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += v[i];
    return hsum(acc) + tail;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum(acc) + tail;
}

double abs_diff_sum_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(kSignMask, d));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += std::fabs(a[i] - b[i]);
    return hsum(acc) + tail;
}

double weighted_abs_diff_sum_avx2(const double* w, const double* a,
                                  const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i),
                              _mm256_andnot_pd(kSignMask, d), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += w[i] * std::fabs(a[i] - b[i]);
    return hsum(acc) + tail;
}

double max_abs_avx2(const double* v, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(kSignMask, _mm256_loadu_pd(v + i)));
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_max_pd(lo, hi);
    double m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

void matvec_avx2(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(a + r * cols, x, cols);
}

void vecmat_avx2(const double* x, const double* a, std::size_t rows,
                 std::size_t cols, double* y) {
    std::memset(y, 0, cols * sizeof(double));
    for (std::size_t r = 0; r < rows; ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        const __m256d xv = _mm256_set1_pd(xr);
        const double* row = a + r * cols;
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            __m256d acc = _mm256_loadu_pd(y + c);
            acc = _mm256_fmadd_pd(xv, _mm256_loadu_pd(row + c), acc);
            _mm256_storeu_pd(y + c, acc);
        }
        for (; c < cols; ++c) y[c] += xr * row[c];
    }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(y + i);
        acc = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), acc);
        _mm256_storeu_pd(y + i, acc);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{
        "avx2",
        sum_avx2,
        dot_avx2,
        abs_diff_sum_avx2,
        weighted_abs_diff_sum_avx2,
        max_abs_avx2,
        matvec_avx2,
        vecmat_avx2,
        axpy_avx2,
    };
    return table;
}

}  // namespace amcmc::simd

#endif  // x86-64
