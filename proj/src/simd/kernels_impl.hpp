#pragma once

#include <cmath>
#include <cstdint>

// Shared scalar bodies. The AVX2 translation unit reuses these for window
// edges and vector remainders so both variants execute identical operations
// on every site.

namespace kpplab::simd::detail {

inline double kpp_rhs_site(double left, double center, double right, double c) {
    const double lap = (left + right) - 2.0 * center;
    return std::fma(c * center, 1.0 - center, lap);
}

inline void kpp_rhs_range(const double* u, const double* c, double ghost_left,
                          double ghost_right, double* out, std::int64_t begin,
                          std::int64_t end, std::int64_t n) {
    for (std::int64_t i = begin; i < end; ++i) {
        const double left = (i == 0) ? ghost_left : u[i - 1];
        const double right = (i == n - 1) ? ghost_right : u[i + 1];
        out[i] = kpp_rhs_site(left, u[i], right, c[i]);
    }
}

inline void axpy_range(double* y, const double* x, const double* k, double h,
                       std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) y[i] = std::fma(h, k[i], x[i]);
}

inline void rk4_combine_range(double* u, const double* k1, const double* k2,
                              const double* k3, const double* k4, double h,
                              std::int64_t begin, std::int64_t end) {
    const double h6 = h / 6.0;
    for (std::int64_t i = begin; i < end; ++i) {
        const double mid = k2[i] + k3[i];
        const double ends = k1[i] + k4[i];
        const double s = std::fma(2.0, mid, ends);
        u[i] = std::fma(h6, s, u[i]);
    }
}

inline void cocycle_step_lane(double& p11, double& p12, double& p21,
                              double& p22, double d) {
    const double n11 = std::fma(d, p11, -p21);
    const double n12 = std::fma(d, p12, -p22);
    p21 = p11;
    p22 = p12;
    p11 = n11;
    p12 = n12;
}

inline void cocycle_renorm_lane(double& p11, double& p12, double& p21,
                                double& p22, double& log_scale) {
    const double t1 = std::fma(p11, p11, p12 * p12);
    const double t2 = std::fma(p21, p21, p22 * p22);
    const double s2 = t1 + t2;
    const double inv = 1.0 / std::sqrt(s2);
    log_scale += 0.5 * std::log(s2);
    p11 *= inv;
    p12 *= inv;
    p21 *= inv;
    p22 *= inv;
}

inline void cocycle_steps_range(double* p11, double* p12, double* p21,
                                double* p22, double* log_scale, const double* d,
                                int nlanes, std::int64_t nsteps,
                                int renorm_every, int lane_begin,
                                int lane_end) {
    for (std::int64_t s = 0; s < nsteps; ++s) {
        const double* ds = d + s * nlanes;
        for (int l = lane_begin; l < lane_end; ++l)
            cocycle_step_lane(p11[l], p12[l], p21[l], p22[l], ds[l]);
        if ((s + 1) % renorm_every == 0) {
            for (int l = lane_begin; l < lane_end; ++l)
                cocycle_renorm_lane(p11[l], p12[l], p21[l], p22[l], log_scale[l]);
        }
    }
}

}  // namespace kpplab::simd::detail
