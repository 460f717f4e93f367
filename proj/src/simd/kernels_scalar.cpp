#include "kpplab/simd/kernels.hpp"

#include "kernels_impl.hpp"

namespace kpplab::simd {

namespace {

void kpp_rhs_scalar(const double* u, const double* c, double ghost_left,
                    double ghost_right, double* out, std::int64_t n) {
    detail::kpp_rhs_range(u, c, ghost_left, ghost_right, out, 0, n, n);
}

void axpy_scalar(double* y, const double* x, const double* k, double h,
                 std::int64_t n) {
    detail::axpy_range(y, x, k, h, 0, n);
}

void rk4_combine_scalar(double* u, const double* k1, const double* k2,
                        const double* k3, const double* k4, double h,
                        std::int64_t n) {
    detail::rk4_combine_range(u, k1, k2, k3, k4, h, 0, n);
}

void cocycle_steps_scalar(double* p11, double* p12, double* p21, double* p22,
                          double* log_scale, const double* d, int nlanes,
                          std::int64_t nsteps, int renorm_every) {
    detail::cocycle_steps_range(p11, p12, p21, p22, log_scale, d, nlanes,
                                nsteps, renorm_every, 0, nlanes);
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{kpp_rhs_scalar, axpy_scalar,
                                   rk4_combine_scalar, cocycle_steps_scalar,
                                   "scalar"};
    return table;
}

}  // namespace kpplab::simd
