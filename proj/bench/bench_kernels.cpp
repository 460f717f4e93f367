#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kpplab/simd/dispatch.hpp"

using namespace kpplab;

namespace {

std::vector<double> random_vec(std::size_t n, double lo, double hi, int seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

void bm_kpp_rhs(benchmark::State& state, simd::Mode mode) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto u = random_vec(n, 0.0, 1.0, 1);
    const auto c = random_vec(n, 0.5, 2.5, 2);
    std::vector<double> out(n);
    const auto& kt = simd::kernels(mode);
    for (auto _ : state) {
        kt.kpp_rhs(u.data(), c.data(), 1.0, 0.0, out.data(),
                   static_cast<std::int64_t>(n));
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_cocycle(benchmark::State& state, simd::Mode mode) {
    const int lanes = static_cast<int>(state.range(0));
    constexpr std::int64_t steps = 4096;
    const auto d = random_vec(static_cast<std::size_t>(lanes) * steps, 1.5, 4.0, 3);
    const auto& kt = simd::kernels(mode);
    for (auto _ : state) {
        std::vector<double> p11(lanes, 1.0), p12(lanes, 0.0), p21(lanes, 0.0),
            p22(lanes, 1.0), ls(lanes, 0.0);
        kt.cocycle_steps(p11.data(), p12.data(), p21.data(), p22.data(),
                         ls.data(), d.data(), lanes, steps, 16);
        benchmark::DoNotOptimize(ls.data());
    }
    state.SetItemsProcessed(state.iterations() * steps * lanes);
}

}  // namespace

BENCHMARK_CAPTURE(bm_kpp_rhs, scalar, simd::Mode::Scalar)->Arg(1200)->Arg(16384);
BENCHMARK_CAPTURE(bm_kpp_rhs, dispatch, simd::Mode::Auto)->Arg(1200)->Arg(16384);
BENCHMARK_CAPTURE(bm_cocycle, scalar, simd::Mode::Scalar)->Arg(4)->Arg(16);
BENCHMARK_CAPTURE(bm_cocycle, dispatch, simd::Mode::Auto)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
