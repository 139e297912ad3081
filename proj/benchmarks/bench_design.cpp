#include <benchmark/benchmark.h>

#include "sppal/optimizer.hpp"

using namespace sppal;

namespace {

void BM_FrfDesignBand(benchmark::State& state) {
    const DesignModel model = make_design_model(DesignParams{}, standard_air());
    const TransducerSpec spec = build_stack(model.geometry, model.bounds.x0, model.params.drive_voltage);
    for (auto _ : state) benchmark::DoNotOptimize(frf_transfer_matrix(spec, model.load, model.freqs).center_velocity.data());
    state.counters["freqs"] = static_cast<double>(model.freqs.size());
}
BENCHMARK(BM_FrfDesignBand)->Unit(benchmark::kMicrosecond);

void BM_EvaluateDesign(benchmark::State& state) {
    DesignParams params;
    params.config = state.range(0) ? XdcrConfig::Full : XdcrConfig::Half;
    const DesignModel model = make_design_model(params, standard_air());
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_design(model, model.bounds.x0).objectives.f1);
}
BENCHMARK(BM_EvaluateDesign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MakeDesignModel(benchmark::State& state) {
    const Medium air = standard_air();
    for (auto _ : state) benchmark::DoNotOptimize(make_design_model(DesignParams{}, air).er.er_db);
}
BENCHMARK(BM_MakeDesignModel)->Unit(benchmark::kMillisecond);

void BM_Nsga2TwoParabolas(benchmark::State& state) {
    const Evaluator f = [](const std::vector<double>& x) {
        return Score{{x[0] * x[0], (x[0] - 2.0) * (x[0] - 2.0)}, false};
    };
    Nsga2Config c;
    c.reference = std::array<double, 2>{4.0, 4.0};
    for (auto _ : state) benchmark::DoNotOptimize(nsga2(f, {{-5.0, 5.0}}, c).hypervolume.back());
}
BENCHMARK(BM_Nsga2TwoParabolas)->Unit(benchmark::kMillisecond);

void BM_HypervolumeFront(benchmark::State& state) {
    std::vector<std::array<double, 2>> pts;
    const int n = static_cast<int>(state.range(0));
    for (int i = 0; i < n; ++i) {
        const double x = 2.0 * i / (n - 1);
        pts.push_back({x * x, (x - 2.0) * (x - 2.0)});
    }
    for (auto _ : state) benchmark::DoNotOptimize(hypervolume_2d(pts, {4.0, 4.0}));
}
BENCHMARK(BM_HypervolumeFront)->Arg(40)->Arg(400);

}  // namespace
