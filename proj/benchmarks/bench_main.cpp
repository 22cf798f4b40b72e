#include <benchmark/benchmark.h>

#include "lpkit/corpus.hpp"
#include "lpkit/cube_geometry.hpp"
#include "lpkit/grid.hpp"
#include "lpkit/square_functions.hpp"

using namespace lpkit;

namespace {

GridFunction sample_input(int dim, std::size_t n) {
    return make_corpus(1, CorpusFamily::gaussian_bump, 1, GridSpec(dim, n, 1.0)).entries()[0].function;
}

void BM_ForwardTransform(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const auto f = sample_input(dim, static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_ForwardTransform)->Args({1, 256})->Args({1, 4096})->Args({2, 64})->Args({2, 256});

void BM_GSq(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const auto f = sample_input(dim, static_cast<std::size_t>(state.range(1)));
    const auto quad = QuadratureConfig::defaults_for(f.spec());
    for (auto _ : state) benchmark::DoNotOptimize(g_sq(f, 0.0, 2.0, quad));
}
BENCHMARK(BM_GSq)->Args({1, 256})->Args({2, 64})->Unit(benchmark::kMillisecond);

void BM_HlMaximal(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const auto f = sample_input(dim, static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(hl_maximal(f, 1.0));
}
BENCHMARK(BM_HlMaximal)->Args({1, 256})->Args({2, 32})->Unit(benchmark::kMillisecond);

void BM_Whitney(benchmark::State& state) {
    const int k_max = static_cast<int>(state.range(0));
    const auto omega = OpenSetMask::from_boxes(2, 1.0, {{{0.25, 0.25}, {0.75, 0.5}}, {{0.5, 0.25}, {0.75, 0.875}}}, false);
    for (auto _ : state) benchmark::DoNotOptimize(whitney_decompose(omega, k_max));
}
BENCHMARK(BM_Whitney)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
