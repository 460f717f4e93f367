#pragma once

#include "kpplab/simd/kernels.hpp"

namespace kpplab::simd {

enum class Mode { Auto, Scalar, Avx2 };

bool cpu_has_avx2();

// Resolves Auto against CPU capabilities and the KPPLAB_SIMD environment
// override (scalar | avx2 | auto).
Mode resolve_mode(Mode requested = Mode::Auto);

const KernelTable& kernels(Mode requested = Mode::Auto);

const char* mode_name(Mode m);

}  // namespace kpplab::simd
