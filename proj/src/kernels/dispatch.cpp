#include "wincast/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace wincast::kernels {

#if defined(WINCAST_HAVE_AVX2)
const KernelSet& avx2_kernel_table() noexcept;
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(WINCAST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelSet& select() noexcept {
    const KernelSet* simd = avx2_kernels();
    if (const char* env = std::getenv("WINCAST_KERNELS")) {
        const std::string_view want{env};
        if (want == "scalar") return scalar_kernels();
        if (want == "avx2" && simd != nullptr) return *simd;
    }
    return simd != nullptr ? *simd : scalar_kernels();
}

}  // namespace

const KernelSet* avx2_kernels() noexcept {
#if defined(WINCAST_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelSet& active() noexcept {
    static const KernelSet& set = select();
    return set;
}

}  // namespace wincast::kernels
