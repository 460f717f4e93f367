#pragma once

#include <cstdint>

namespace kpplab::simd {

// Inner-loop kernels behind the numerical modules. Every kernel has a scalar
// reference implementation and (on x86-64) an AVX2+FMA variant selected at
// runtime. The scalar reference uses std::fma in the same operation order as
// the vector code, so both variants produce bit-identical results; the
// equivalence suite asserts that.

// Lattice KPP right-hand side on a window of n sites:
//   out[i] = u[i+1] + u[i-1] - 2 u[i] + c[i] u[i] (1 - u[i])
// ghost_left / ghost_right stand in for u[-1] and u[n].
using KppRhsFn = void (*)(const double* u, const double* c, double ghost_left,
                          double ghost_right, double* out, std::int64_t n);

// y[i] = x[i] + h * k[i]
using AxpyFn = void (*)(double* y, const double* x, const double* k, double h,
                        std::int64_t n);

// u[i] += (h/6) * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i])
using Rk4CombineFn = void (*)(double* u, const double* k1, const double* k2,
                              const double* k3, const double* k4, double h,
                              std::int64_t n);

// Advances nlanes independent 2x2 cocycle products by nsteps. Lane state is
// a renormalized product (p11,p12,p21,p22) plus accumulated log norms. The
// per-step diagonal entries d = E + 2 - c(n) are laid out step-major:
// d[step * nlanes + lane]. Every renorm_every steps each lane is rescaled to
// unit Frobenius norm and the log of the norm accumulated.
using CocycleStepsFn = void (*)(double* p11, double* p12, double* p21,
                                double* p22, double* log_scale,
                                const double* d, int nlanes,
                                std::int64_t nsteps, int renorm_every);

struct KernelTable {
    KppRhsFn kpp_rhs;
    AxpyFn axpy;
    Rk4CombineFn rk4_combine;
    CocycleStepsFn cocycle_steps;
    const char* name;
};

const KernelTable& scalar_kernels();
#if KPPLAB_HAVE_AVX2
const KernelTable& avx2_kernels();
#endif

}  // namespace kpplab::simd
