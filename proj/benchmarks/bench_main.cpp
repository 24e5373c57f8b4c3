#include <benchmark/benchmark.h>

#include <vector>

#include "pathvar/calculus.hpp"
#include "pathvar/functions.hpp"
#include "pathvar/localtime.hpp"
#include "pathvar/partitions.hpp"
#include "pathvar/paths.hpp"
#include "pathvar/roughpath.hpp"
#include "pathvar/variation.hpp"

namespace pathvar {
namespace {

SampledPath make_path(double hurst, std::size_t steps, double horizon = 1.0) {
    FbmOptions o;
    o.hurst = hurst;
    o.num_steps = steps;
    o.horizon = horizon;
    o.seed = 1;
    return generate_fbm(o);
}

void BM_FbmCirculant(benchmark::State& state) {
    FbmOptions o;
    o.hurst = 0.25;
    o.num_steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        o.seed++;
        benchmark::DoNotOptimize(generate_fbm(o));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FbmCirculant)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Unit(benchmark::kMillisecond);

void BM_VariationUniform(benchmark::State& state) {
    const auto s = make_path(0.25, 1 << 16);
    const std::vector<double> eval{0.25, 0.5, 0.75, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(pth_variation_scalar(s, {Scheme::uniform, 4, static_cast<int>(state.range(0))}, 4, eval));
}
BENCHMARK(BM_VariationUniform)->DenseRange(10, 16, 2)->Unit(benchmark::kMillisecond);

void BM_LebesguePartition(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto s = make_path(0.5, 1 << 16, resolvable_horizon(0.5, 1 << 16, n));
    for (auto _ : state) benchmark::DoNotOptimize(lebesgue_dyadic(s, n));
}
BENCHMARK(BM_LebesguePartition)->DenseRange(6, 12, 2)->Unit(benchmark::kMicrosecond);

void BM_ChangeOfVariable(benchmark::State& state) {
    const auto s = make_path(0.25, 1 << 16);
    const auto f = parse_function("cos");
    for (auto _ : state)
        benchmark::DoNotOptimize(change_of_variable_residual(*f, s, {Scheme::uniform, 8, 12}, 4, std::vector<double>{1.0}));
}
BENCHMARK(BM_ChangeOfVariable)->Unit(benchmark::kMillisecond);

void BM_LocalTimeUpcrossing(benchmark::State& state) {
    const int n = 10;
    const auto s = make_path(0.5, 1 << 16, resolvable_horizon(0.5, 1 << 16, n));
    const SpatialGrid g = SpatialGrid::for_path(s, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(local_time_upcrossing(s, n, 2, s.horizon(), g));
        benchmark::DoNotOptimize(occupation_density(s, s.horizon(), n, g));
    }
}
BENCHMARK(BM_LocalTimeUpcrossing)->Unit(benchmark::kMillisecond);

void BM_ChenCheck(benchmark::State& state) {
    const auto s = make_path(0.25, 1 << 14);
    const ReducedRoughPath X = canonical_lift_samples(s, static_cast<int>(state.range(0)));
    const auto triples = grid_triples(s, 1000, 2);
    for (auto _ : state) benchmark::DoNotOptimize(check_reduced_chen(X, triples));
}
BENCHMARK(BM_ChenCheck)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RoughIntegral(benchmark::State& state) {
    const auto s = make_path(0.25, 1 << 14);
    const ReducedRoughPath X = canonical_lift_samples(s, 4);
    const ControlledPath Y = controlled_from_function(parse_function("cos"), s, 4);
    for (auto _ : state) benchmark::DoNotOptimize(rough_integral(Y, X, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_RoughIntegral)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pathvar

BENCHMARK_MAIN();
