#include <benchmark/benchmark.h>

#include "padicrot/haar.hpp"
#include "padicrot/parallel.hpp"
#include "padicrot/rotation.hpp"

using namespace padicrot;

static void BM_PAdicMultiply(benchmark::State& state) {
    auto rng = make_rng(1, 0);
    PAdic a = sample_uniform_Zp(7, rng, static_cast<int>(state.range(0)));
    PAdic b = sample_uniform_Zp(7, rng, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PAdicMultiply)->Arg(16)->Arg(32)->Arg(64);

static void BM_HenselSqrt(benchmark::State& state) {
    PAdic x = PAdic::from_int(7, 2);
    for (auto _ : state) benchmark::DoNotOptimize(hensel_sqrt(x));
}
BENCHMARK(BM_HenselSqrt);

static void BM_QuaternionMultiply(benchmark::State& state) {
    auto rng = make_rng(2, 0);
    Quaternion x = sample_sphere(7, rng), y = sample_sphere(7, rng);
    for (auto _ : state) benchmark::DoNotOptimize(quat_mul(x, y));
}
BENCHMARK(BM_QuaternionMultiply);

static void BM_Kappa3(benchmark::State& state) {
    auto rng = make_rng(3, 0);
    Quaternion x = sample_sphere(7, rng);
    for (auto _ : state) benchmark::DoNotOptimize(kappa3(x));
}
BENCHMARK(BM_Kappa3);

static void BM_So2TotalMass(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(so2_total_mass(2, -5));
}
BENCHMARK(BM_So2TotalMass);

static void BM_So3Histogram(benchmark::State& state) {
    unsigned p = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(so3_histogram(p, 1));
}
BENCHMARK(BM_So3Histogram)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_So3MonteCarlo(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(so3_mc_samples(7, 1, 4096, 1));
}
BENCHMARK(BM_So3MonteCarlo)->Unit(benchmark::kMillisecond);

static void BM_So4MonteCarlo(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(so4_mc_samples(3, 1, 4096, 1));
}
BENCHMARK(BM_So4MonteCarlo)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
