#include <cstdlib>
#include <cstring>

#include "inlslab/kernels.hpp"

namespace inls {

#if defined(INLSLAB_HAVE_AVX2)
namespace detail {
const KernelTable* avx2_table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(INLSLAB_HAVE_AVX2)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& kernels() {
    static const KernelTable* active = [] {
        const char* env = std::getenv("INLSLAB_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        const KernelTable* v = avx2_kernels();
        return v ? v : &scalar_kernels();
    }();
    return *active;
}

}  // namespace inls
