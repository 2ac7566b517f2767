#include <benchmark/benchmark.h>

#include "spinpoint/spinpoint.hpp"

using namespace spinpoint;

static void BM_DefectMatrix(benchmark::State& state) {
    const auto spec = DefectSpec::product({DefectSpec::r_flip(0.5), DefectSpec::mass_jump(1.5), DefectSpec::flux(0.2)});
    for (auto _ : state) benchmark::DoNotOptimize(defect_matrix(spec));
}
BENCHMARK(BM_DefectMatrix);

static void BM_TransferToScattering(benchmark::State& state) {
    const auto m = defect_matrix(DefectSpec::r_flip(0.5));
    double k = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(transfer_to_scattering(m, k));
        k = k < 20.0 ? k + 0.01 : 0.1;
    }
}
BENCHMARK(BM_TransferToScattering);

// elements: defect, free, defect, ...
static void BM_DeviceSpectrum(benchmark::State& state) {
    std::vector<Element> elems;
    for (int i = 0; i < state.range(0); ++i) {
        if (i > 0) elems.emplace_back(FreeSegment{0.7});
        elems.emplace_back(i % 2 ? DefectSpec::x1(1.0) : DefectSpec::r_flip(0.5));
    }
    const Device device(std::move(elems));
    const auto grid = default_k_grid();
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(device, grid, Channel::LeftUp));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_DeviceSpectrum)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Dispersion(benchmark::State& state) {
    const PeriodicComb comb(Device({DefectSpec::r_flip(0.5)}), 1.0);
    const auto grid = make_grid(1e-3, 10.0, static_cast<std::size_t>(state.range(0)), Spacing::Linear);
    for (auto _ : state) benchmark::DoNotOptimize(dispersion(comb, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dispersion)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_BandEdges(benchmark::State& state) {
    const PeriodicComb comb(Device({DefectSpec::r_flip(0.25)}), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(band_edges(comb, 0.05, 12.0));
}
BENCHMARK(BM_BandEdges)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
