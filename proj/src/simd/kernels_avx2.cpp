#include <immintrin.h>

#include "kpplab/simd/kernels.hpp"

#include "kernels_impl.hpp"

// AVX2+FMA variants. Operation order matches the scalar reference exactly
// (same fma placement, 2*x and 1/sqrt sequences), so results are
// bit-identical; window edges and remainders reuse the scalar bodies.

namespace kpplab::simd {

namespace {

void kpp_rhs_avx2(const double* u, const double* c, double ghost_left,
                  double ghost_right, double* out, std::int64_t n) {
    if (n < 6) {
        detail::kpp_rhs_range(u, c, ghost_left, ghost_right, out, 0, n, n);
        return;
    }
    detail::kpp_rhs_range(u, c, ghost_left, ghost_right, out, 0, 1, n);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d one = _mm256_set1_pd(1.0);
    std::int64_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d left = _mm256_loadu_pd(u + i - 1);
        const __m256d center = _mm256_loadu_pd(u + i);
        const __m256d right = _mm256_loadu_pd(u + i + 1);
        const __m256d cv = _mm256_loadu_pd(c + i);
        const __m256d t = _mm256_add_pd(left, right);
        const __m256d lap = _mm256_sub_pd(t, _mm256_mul_pd(two, center));
        const __m256d cu = _mm256_mul_pd(cv, center);
        const __m256d onemu = _mm256_sub_pd(one, center);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(cu, onemu, lap));
    }
    detail::kpp_rhs_range(u, c, ghost_left, ghost_right, out, i, n, n);
}

void axpy_avx2(double* y, const double* x, const double* k, double h,
               std::int64_t n) {
    const __m256d hv = _mm256_set1_pd(h);
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d kv = _mm256_loadu_pd(k + i);
        const __m256d xv = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(hv, kv, xv));
    }
    detail::axpy_range(y, x, k, h, i, n);
}

void rk4_combine_avx2(double* u, const double* k1, const double* k2,
                      const double* k3, const double* k4, double h,
                      std::int64_t n) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d h6 = _mm256_set1_pd(h / 6.0);
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mid =
            _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i));
        const __m256d ends =
            _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_loadu_pd(k4 + i));
        const __m256d s = _mm256_fmadd_pd(two, mid, ends);
        const __m256d uv = _mm256_loadu_pd(u + i);
        _mm256_storeu_pd(u + i, _mm256_fmadd_pd(h6, s, uv));
    }
    detail::rk4_combine_range(u, k1, k2, k3, k4, h, i, n);
}

void cocycle_steps_avx2(double* p11, double* p12, double* p21, double* p22,
                        double* log_scale, const double* d, int nlanes,
                        std::int64_t nsteps, int renorm_every) {
    const int vec_lanes = nlanes - nlanes % 4;
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::int64_t s = 0; s < nsteps; ++s) {
        const double* ds = d + s * nlanes;
        for (int l = 0; l < vec_lanes; l += 4) {
            const __m256d dv = _mm256_loadu_pd(ds + l);
            const __m256d v11 = _mm256_loadu_pd(p11 + l);
            const __m256d v12 = _mm256_loadu_pd(p12 + l);
            const __m256d v21 = _mm256_loadu_pd(p21 + l);
            const __m256d v22 = _mm256_loadu_pd(p22 + l);
            const __m256d n11 = _mm256_fmsub_pd(dv, v11, v21);
            const __m256d n12 = _mm256_fmsub_pd(dv, v12, v22);
            _mm256_storeu_pd(p21 + l, v11);
            _mm256_storeu_pd(p22 + l, v12);
            _mm256_storeu_pd(p11 + l, n11);
            _mm256_storeu_pd(p12 + l, n12);
        }
        for (int l = vec_lanes; l < nlanes; ++l)
            detail::cocycle_step_lane(p11[l], p12[l], p21[l], p22[l], ds[l]);
        if ((s + 1) % renorm_every != 0) continue;
        for (int l = 0; l < vec_lanes; l += 4) {
            const __m256d v11 = _mm256_loadu_pd(p11 + l);
            const __m256d v12 = _mm256_loadu_pd(p12 + l);
            const __m256d v21 = _mm256_loadu_pd(p21 + l);
            const __m256d v22 = _mm256_loadu_pd(p22 + l);
            const __m256d t1 = _mm256_fmadd_pd(v11, v11, _mm256_mul_pd(v12, v12));
            const __m256d t2 = _mm256_fmadd_pd(v21, v21, _mm256_mul_pd(v22, v22));
            const __m256d s2 = _mm256_add_pd(t1, t2);
            const __m256d inv = _mm256_div_pd(one, _mm256_sqrt_pd(s2));
            alignas(32) double s2a[4];
            _mm256_store_pd(s2a, s2);
            // No vector log; four libm calls keep parity with the scalar path.
            for (int j = 0; j < 4; ++j) log_scale[l + j] += 0.5 * std::log(s2a[j]);
            _mm256_storeu_pd(p11 + l, _mm256_mul_pd(v11, inv));
            _mm256_storeu_pd(p12 + l, _mm256_mul_pd(v12, inv));
            _mm256_storeu_pd(p21 + l, _mm256_mul_pd(v21, inv));
            _mm256_storeu_pd(p22 + l, _mm256_mul_pd(v22, inv));
        }
        for (int l = vec_lanes; l < nlanes; ++l)
            detail::cocycle_renorm_lane(p11[l], p12[l], p21[l], p22[l],
                                        log_scale[l]);
    }
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{kpp_rhs_avx2, axpy_avx2, rk4_combine_avx2,
                                   cocycle_steps_avx2, "avx2"};
    return table;
}

}  // namespace kpplab::simd
