#include "amcmc/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace amcmc::simd {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

namespace {

const KernelTable* pick_table() {
    if (const char* forced = std::getenv("AMCMC_KERNELS")) {
        if (std::strcmp(forced, "scalar") == 0) return &scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(forced, "avx2") == 0 && avx2_available())
            return &avx2_kernels();
#endif
#if defined(__aarch64__)
        if (std::strcmp(forced, "neon") == 0) return &neon_kernels();
#endif
        return &scalar_kernels();  // unknown or unsupported name
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) return &avx2_kernels();
#endif
#if defined(__aarch64__)
    return &neon_kernels();
#endif
    return &scalar_kernels();
}

const KernelTable*& active_slot() {
    static const KernelTable* slot = pick_table();
    return slot;
}

}  // namespace

const KernelTable& active() { return *active_slot(); }

const KernelTable& set_active(const KernelTable& table) {
    const KernelTable* prev = active_slot();
    active_slot() = &table;
    return *prev;
}

}  // namespace amcmc::simd
