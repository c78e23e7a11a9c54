// Serial-reference vs OpenMP kernel comparison. Run with
//   ./build/bench/conceptmap_bench --benchmark_time_unit=ms

#include "conceptmap/kernels.hpp"
#include "conceptmap/linkage.hpp"
#include "conceptmap/map_equation.hpp"
#include "conceptmap/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

std::vector<double> random_rows(std::size_t n, std::size_t dim, std::uint64_t seed) {
    conceptmap::Rng rng(seed);
    std::vector<double> data(n * dim);
    for (auto& x : data) x = rng.gaussian();
    return data;
}

void bm_cosine_matrix_serial(benchmark::State& state) {
    const std::size_t n = state.range(0), dim = 300;
    const auto data = random_rows(n, dim, 1);
    for (auto _ : state) {
        auto out = conceptmap::kernels::cosine_matrix_serial(data.data(), n, dim);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n * (n - 1) / 2);
}

void bm_cosine_matrix_omp(benchmark::State& state) {
    const std::size_t n = state.range(0), dim = 300;
    const auto data = random_rows(n, dim, 1);
    for (auto _ : state) {
        auto out = conceptmap::kernels::cosine_matrix(data.data(), n, dim);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n * (n - 1) / 2);
}

void bm_query_cosines_serial(benchmark::State& state) {
    const std::size_t n = state.range(0), dim = 300;
    const auto data = random_rows(n, dim, 2);
    const auto query = random_rows(1, dim, 3);
    for (auto _ : state) {
        auto out = conceptmap::kernels::query_cosines_serial(query.data(), data.data(), n, dim);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void bm_query_cosines_omp(benchmark::State& state) {
    const std::size_t n = state.range(0), dim = 300;
    const auto data = random_rows(n, dim, 2);
    const auto query = random_rows(1, dim, 3);
    for (auto _ : state) {
        auto out = conceptmap::kernels::query_cosines(query.data(), data.data(), n, dim);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void bm_average_linkage(benchmark::State& state) {
    const std::size_t n = state.range(0);
    conceptmap::Rng rng(5);
    std::vector<double> dist(n * (n - 1) / 2);
    for (auto& x : dist) x = rng.uniform(0.0, 2.0);
    for (auto _ : state) {
        auto copy = dist;
        auto d = conceptmap::average_linkage(std::move(copy), static_cast<std::uint32_t>(n));
        benchmark::DoNotOptimize(d.merges.data());
    }
}

} // namespace

BENCHMARK(bm_cosine_matrix_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_cosine_matrix_omp)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_query_cosines_serial)->Arg(4096)->Arg(16384)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_query_cosines_omp)->Arg(4096)->Arg(16384)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_average_linkage)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
