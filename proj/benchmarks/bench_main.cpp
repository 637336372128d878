#include <vector>

#include <benchmark/benchmark.h>

#include "betti/circle_oracle.hpp"
#include "betti/complex.hpp"
#include "betti/estimator.hpp"
#include "betti/homology.hpp"

namespace {

using namespace betti;

void BM_VietorisRipsCircle(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto s = sample(ManifoldModel::circle(), n, 1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vr_complex(s, 0.1, {.max_dim = 2}));
    }
}
BENCHMARK(BM_VietorisRipsCircle)->Arg(20)->Arg(100)->Arg(400);

void BM_VietorisRipsSphereFull(benchmark::State& state)
{
    const auto s = sample(ManifoldModel::sphere2(), static_cast<std::size_t>(state.range(0)), 1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vr_complex(s, 0.5));
    }
}
BENCHMARK(BM_VietorisRipsSphereFull)->Arg(50)->Arg(100);

void BM_FirstBetti(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto c = vr_complex(sample(ManifoldModel::circle(), n, 2, 0), 0.1, {.max_dim = 2});
    state.counters["simplices"] = static_cast<double>(c.total_size());
    for (auto _ : state) {
        benchmark::DoNotOptimize(::betti::betti(c, 1));
    }
}
BENCHMARK(BM_FirstBetti)->Arg(20)->Arg(100)->Arg(400);

void BM_CircleOracle(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(circle_homotopy_prob(n, 0.1));
    }
}
BENCHMARK(BM_CircleOracle)->Arg(10)->Arg(100)->Arg(1024);

void BM_EstimateCurve(benchmark::State& state)
{
    CurveRequest request;
    request.n = 20;
    request.trials = static_cast<std::size_t>(state.range(0));
    request.workers = 1;
    for (int i = 1; i <= 16; ++i) {
        request.grid.push_back(0.02 * i);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_curve(request));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateCurve)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
