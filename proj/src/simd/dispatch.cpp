#include "kpplab/simd/dispatch.hpp"

#include <cstdlib>
#include <cstring>

namespace kpplab::simd {

bool cpu_has_avx2() {
#if KPPLAB_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Mode resolve_mode(Mode requested) {
    if (requested == Mode::Auto) {
        if (const char* env = std::getenv("KPPLAB_SIMD")) {
            if (std::strcmp(env, "scalar") == 0) return Mode::Scalar;
            if (std::strcmp(env, "avx2") == 0) return Mode::Avx2;
        }
        return cpu_has_avx2() ? Mode::Avx2 : Mode::Scalar;
    }
    return requested;
}

const KernelTable& kernels(Mode requested) {
    const Mode m = resolve_mode(requested);
#if KPPLAB_HAVE_AVX2
    if (m == Mode::Avx2 && cpu_has_avx2()) return avx2_kernels();
#endif
    (void)m;
    return scalar_kernels();
}

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Auto: return "auto";
        case Mode::Scalar: return "scalar";
        case Mode::Avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace kpplab::simd
