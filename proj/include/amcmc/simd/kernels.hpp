#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the measure and finite-chain engines.
// Every entry point has a scalar reference implementation plus vectorized
// variants (AVX2+FMA on x86-64, NEON on aarch64) selected once at runtime.
// Vector reductions reassociate sums, so variants agree with the scalar
// reference only up to rounding; the equivalence tests pin that gap.

namespace amcmc::simd {

struct KernelTable {
    const char* name;

    // sum_i v[i]
    double (*sum)(const double* v, std::size_t n);
    // sum_i a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i |a[i]-b[i]|   (L1 total-variation distance of prob. vectors)
    double (*abs_diff_sum)(const double* a, const double* b, std::size_t n);
    // sum_i w[i]*|a[i]-b[i]|   (V-norm distance on a finite space)
    double (*weighted_abs_diff_sum)(const double* w, const double* a,
                                    const double* b, std::size_t n);
    // max_i |v[i]|
    double (*max_abs)(const double* v, std::size_t n);
    // y = A x, A row-major rows x cols
    void (*matvec)(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y);
    // y = x^T A, A row-major rows x cols (law propagation)
    void (*vecmat)(const double* x, const double* a, std::size_t rows,
                   std::size_t cols, double* y);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available();
const KernelTable& avx2_kernels();
#endif
#if defined(__aarch64__)
const KernelTable& neon_kernels();
#endif

// Table picked at startup: best available variant, unless the environment
// variable AMCMC_KERNELS names one of "scalar", "avx2", "neon".
const KernelTable& active();

// Test hook; returns the previously active table.
const KernelTable& set_active(const KernelTable& table);

}  // namespace amcmc::simd
