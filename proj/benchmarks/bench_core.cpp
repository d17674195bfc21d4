#include <rlf/calib.hpp>
#include <rlf/coupling.hpp>
#include <rlf/geometry.hpp>
#include <rlf/mna.hpp>
#include <rlf/neumann.hpp>
#include <rlf/synth.hpp>
#include <rlf/tolerance.hpp>

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

namespace {

using namespace rlf;

Netlist bandpass() { return build_bandpass_netlist(synth_bandpass(BandpassSpec::from_hz(4e9, 12e9, 50.0))); }

MutualMatrix layout_matrix(std::size_t segments_per_turn) {
    const std::vector<std::string> labels = {"Ls1", "Ls2", "Ls3", "Ls4", "Lx1", "Lx2", "Lx3", "Lx4"};
    std::vector<Polyline3D> paths;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        SpiralParams p;
        p.segments_per_turn = segments_per_turn;
        p.center = {static_cast<double>(i % 4) * 160e-6, static_cast<double>(i / 4) * 160e-6, 0.0};
        paths.push_back(spiral_path(p));
    }
    return mutual_matrix(labels, paths);
}

void BM_EvaluateBandpass(benchmark::State& state) {
    const auto n = bandpass();
    const auto grid = FrequencyGrid::logarithmic(1e8, 3e10, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_netlist(n, grid, {Parallelism{1}}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateBandpass)->Arg(101)->Arg(1001);

void BM_NeumannSpirals(benchmark::State& state) {
    SpiralParams a;
    a.segments_per_turn = static_cast<std::size_t>(state.range(0));
    SpiralParams b = a;
    b.center = {160e-6, 0.0, 0.0};
    const auto pa = spiral_path(a);
    const auto pb = spiral_path(b);
    for (auto _ : state) {
        benchmark::DoNotOptimize(neumann_mutual(pa, pb));
    }
}
BENCHMARK(BM_NeumannSpirals)->Arg(16)->Arg(64)->Arg(256);

void BM_MutualMatrix(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(layout_matrix(static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_MutualMatrix)->Arg(32);

void BM_WindingSearch(benchmark::State& state) {
    const auto n = bandpass();
    const auto mm = layout_matrix(16);
    const auto grid = FrequencyGrid::linear(1e9, 2e10, 401);
    WindingSearchOptions opt;
    opt.parallelism = Parallelism{static_cast<unsigned>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(winding_search(n, mm, grid, opt));
    }
}
BENCHMARK(BM_WindingSearch)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_ToleranceMc(benchmark::State& state) {
    const auto n = bandpass();
    const auto grid = FrequencyGrid::linear(1e9, 2e10, 401);
    const auto spec = ToleranceSpec::common(0.1, 200, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tolerance_mc(n, spec, grid, Parallelism{1}));
    }
}
BENCHMARK(BM_ToleranceMc)->Unit(benchmark::kMillisecond);

void BM_CalibrationMc(benchmark::State& state) {
    const auto grid = FrequencyGrid::linear(1e9, 20e9, 96);
    const std::vector<CalStandard> stds = {open_standard(grid), short_standard(grid), load_standard(grid)};
    const ComplexSeries dut(grid.size(), Complex(0.1));
    std::vector<NetworkData> paths(stds.size() + 1, cable_path(grid, CablePath{}));
    UncertaintyConfig cfg;
    cfg.trials = 200;
    for (auto _ : state) {
        benchmark::DoNotOptimize(calibration_mc(stds, dut, paths, cfg, Parallelism{1}));
    }
}
BENCHMARK(BM_CalibrationMc)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
