#include "degcalc/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace degcalc::simd {

#ifndef DEGCALC_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#ifndef DEGCALC_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

const KernelTable& active_kernels() {
    static const KernelTable* chosen = [] {
        const char* force = std::getenv("DEGCALC_SIMD");
        if (force && std::strcmp(force, "scalar") == 0) return &scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return t;
        if (const KernelTable* t = neon_kernels()) return t;
        return &scalar_kernels();
    }();
    return *chosen;
}

}  // namespace degcalc::simd
