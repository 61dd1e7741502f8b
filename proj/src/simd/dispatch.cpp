#include <cstdlib>
#include <cstring>

#include "duomode/simd/kernels.hpp"

namespace duomode::simd {

#if defined(DUOMODE_HAVE_AVX2)
const KernelSet* avx2_kernels_impl();  // kernels_avx2.cpp
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const KernelSet* avx2_kernels() {
#if defined(DUOMODE_HAVE_AVX2)
    if (cpu_has_avx2()) return avx2_kernels_impl();
#endif
    return nullptr;
}

const KernelSet& active_kernels() {
    const char* env = std::getenv("DUOMODE_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) {
        return scalar_kernels();
    }
    const KernelSet* avx2 = avx2_kernels();
    return avx2 != nullptr ? *avx2 : scalar_kernels();
}

}  // namespace duomode::simd
