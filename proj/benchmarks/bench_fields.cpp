#include <benchmark/benchmark.h>

#include "sppal/linfield.hpp"
#include "sppal/nlfield.hpp"

using namespace sppal;

namespace {

SourceProfile mode8_plate(const Medium& air) {
    const PlateSpec s = size_plate_for(60e3, 0.45, 8, aluminum(), air);
    const ModeShape mode = plate_mode_shape(s);
    return stepped_profile(mode, 1.0, StepPolicy::Practical, radial_grid(s.radius_a, 60e3, air, mode.nodal_radii));
}

void BM_PistonOffAxis(benchmark::State& state) {
    const Medium air = standard_air();
    const SourceProfile p = piston_profile({0.0508, 0.1});
    for (auto _ : state) benchmark::DoNotOptimize(rayleigh_pressure(p, air, 60e3, {0.03, 0.4}));
}
BENCHMARK(BM_PistonOffAxis);

void BM_SteppedPlateOffAxis(benchmark::State& state) {
    const Medium air = standard_air();
    const SourceProfile p = mode8_plate(air);
    for (auto _ : state) benchmark::DoNotOptimize(rayleigh_pressure(p, air, 60e3, {0.03, 0.4}));
}
BENCHMARK(BM_SteppedPlateOffAxis)->Unit(benchmark::kMicrosecond);

void BM_EquivalenceRatio(benchmark::State& state) {
    const Medium air = standard_air();
    const SourceProfile p = mode8_plate(air);
    for (auto _ : state) benchmark::DoNotOptimize(equivalence_ratio(p, air, 60e3, 0.45).er_db);
}
BENCHMARK(BM_EquivalenceRatio)->Unit(benchmark::kMicrosecond);

void BM_PlateModeShape(benchmark::State& state) {
    const Medium air = standard_air();
    const PlateSpec s = size_plate_for(60e3, 0.45, static_cast<int>(state.range(0)), aluminum(), air);
    for (auto _ : state) benchmark::DoNotOptimize(plate_mode_shape(s).natural_frequency);
}
BENCHMARK(BM_PlateModeShape)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

// Virtual source on a short volume in front of a small aperture; scales with the radial order.
void BM_VirtualSource(benchmark::State& state) {
    const Medium air = standard_air();
    const SourceProfile p = piston_profile({0.02, 0.1});
    const PrimaryPair pair = make_primary_pair(39e3, 40e3, p, p);
    VolumeGridOptions o;
    o.z_max = 0.1;
    o.r_max = 0.03;
    o.order = static_cast<int>(state.range(0));
    const VolumeGrid g = make_volume_grid(pair, air, o);
    for (auto _ : state) benchmark::DoNotOptimize(build_virtual_source(pair, air, g).q.data());
    state.counters["nodes"] = static_cast<double>(g.size());
}
BENCHMARK(BM_VirtualSource)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_AudioObservation(benchmark::State& state) {
    const Medium air = standard_air();
    const SourceProfile p = piston_profile({0.02, 0.1});
    const PrimaryPair pair = make_primary_pair(39e3, 40e3, p, p);
    VolumeGridOptions o;
    o.z_max = 0.1;
    o.r_max = 0.03;
    const VirtualSource src = build_virtual_source(pair, air, make_volume_grid(pair, air, o));
    for (auto _ : state) benchmark::DoNotOptimize(quasilinear_pressure(src, air, {0.0, 0.3}).pressure);
}
BENCHMARK(BM_AudioObservation)->Unit(benchmark::kMicrosecond);

}  // namespace
