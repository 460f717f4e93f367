#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "kpplab/simd/dispatch.hpp"

using namespace kpplab;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo,
                               double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("dispatch reports a valid table") {
    const auto& kt = simd::kernels();
    CHECK(kt.kpp_rhs != nullptr);
    CHECK(kt.axpy != nullptr);
    CHECK(kt.rk4_combine != nullptr);
    CHECK(kt.cocycle_steps != nullptr);
    CHECK(simd::kernels(simd::Mode::Scalar).name == std::string("scalar"));
}

TEST_CASE("environment override forces the scalar path") {
    setenv("KPPLAB_SIMD", "scalar", 1);
    CHECK(simd::resolve_mode(simd::Mode::Auto) == simd::Mode::Scalar);
    CHECK(simd::kernels(simd::Mode::Auto).name == std::string("scalar"));
    unsetenv("KPPLAB_SIMD");
    if (simd::cpu_has_avx2())
        CHECK(simd::kernels(simd::Mode::Auto).name == std::string("avx2"));
}

#if KPPLAB_HAVE_AVX2

TEST_CASE("kpp_rhs avx2 matches scalar bit for bit") {
    if (!simd::cpu_has_avx2()) return;
    std::mt19937_64 rng(7);
    const auto& sc = simd::scalar_kernels();
    const auto& vx = simd::avx2_kernels();
    for (std::size_t n : {1u, 2u, 5u, 6u, 7u, 16u, 33u, 100u, 1201u}) {
        auto u = random_vec(rng, n, 0.0, 1.0);
        auto c = random_vec(rng, n, 0.3, 3.0);
        std::vector<double> a(n), b(n);
        sc.kpp_rhs(u.data(), c.data(), 1.0, 0.0, a.data(), static_cast<std::int64_t>(n));
        vx.kpp_rhs(u.data(), c.data(), 1.0, 0.0, b.data(), static_cast<std::int64_t>(n));
        CHECK(bit_equal(a, b));
    }
}

TEST_CASE("axpy and rk4_combine avx2 match scalar bit for bit") {
    if (!simd::cpu_has_avx2()) return;
    std::mt19937_64 rng(8);
    const auto& sc = simd::scalar_kernels();
    const auto& vx = simd::avx2_kernels();
    for (std::size_t n : {1u, 3u, 4u, 9u, 64u, 257u}) {
        auto x = random_vec(rng, n, -1.0, 1.0);
        auto k1 = random_vec(rng, n, -2.0, 2.0);
        auto k2 = random_vec(rng, n, -2.0, 2.0);
        auto k3 = random_vec(rng, n, -2.0, 2.0);
        auto k4 = random_vec(rng, n, -2.0, 2.0);
        std::vector<double> ya(n), yb(n);
        sc.axpy(ya.data(), x.data(), k1.data(), 0.01, static_cast<std::int64_t>(n));
        vx.axpy(yb.data(), x.data(), k1.data(), 0.01, static_cast<std::int64_t>(n));
        CHECK(bit_equal(ya, yb));

        auto ua = x, ub = x;
        sc.rk4_combine(ua.data(), k1.data(), k2.data(), k3.data(), k4.data(),
                       0.02, static_cast<std::int64_t>(n));
        vx.rk4_combine(ub.data(), k1.data(), k2.data(), k3.data(), k4.data(),
                       0.02, static_cast<std::int64_t>(n));
        CHECK(bit_equal(ua, ub));
    }
}

TEST_CASE("cocycle_steps avx2 matches scalar bit for bit") {
    if (!simd::cpu_has_avx2()) return;
    std::mt19937_64 rng(9);
    const auto& sc = simd::scalar_kernels();
    const auto& vx = simd::avx2_kernels();
    for (int lanes : {1, 3, 4, 5, 8, 13}) {
        const std::int64_t steps = 160;
        auto d = random_vec(rng, static_cast<std::size_t>(lanes) * steps, 1.5, 4.0);
        auto mk = [&](const simd::KernelTable& kt) {
            std::vector<double> p11(lanes, 1.0), p12(lanes, 0.0), p21(lanes, 0.0),
                p22(lanes, 1.0), ls(lanes, 0.0);
            kt.cocycle_steps(p11.data(), p12.data(), p21.data(), p22.data(),
                             ls.data(), d.data(), lanes, steps, 16);
            std::vector<double> all;
            for (auto* v : {&p11, &p12, &p21, &p22, &ls})
                all.insert(all.end(), v->begin(), v->end());
            return all;
        };
        CHECK(bit_equal(mk(sc), mk(vx)));
    }
}

#endif  // KPPLAB_HAVE_AVX2
