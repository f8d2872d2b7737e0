#include <benchmark/benchmark.h>

#include "wva/constants.hpp"
#include "wva/grating.hpp"
#include "wva/metrology.hpp"
#include "wva/noise.hpp"
#include "wva/waveguide.hpp"

using namespace wva;

namespace {

const waveguide::WaveguideGeometry geometry;

grating::GratingSpec single() {
    return grating::single_grating(grating::HostDispersion::from_waveguide(geometry, 1550e-9), 1550e-9, 3e-4, 6.58e-3);
}

std::vector<double> gap_grid(const grating::GratingSpec& spec, std::size_t n) {
    const double dw = spec.coupling() * spec.host.group_velocity;
    const double w0 = wavelength_to_omega(1550e-9);
    return grating::linear_grid(w0 - 8 * dw, w0 + 8 * dw, n);
}

void BM_ModeSolve(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(waveguide::solve_te_modes(geometry, 1550e-9));
}
BENCHMARK(BM_ModeSolve);

void BM_ModeOverlapAlpha(benchmark::State& state) {
    const auto p = waveguide::solve_mode_pair(geometry, 1550e-9);
    for (auto _ : state) benchmark::DoNotOptimize(waveguide::mode_overlap_alpha(p.te0, p.te1, geometry));
}
BENCHMARK(BM_ModeOverlapAlpha);

void BM_FundamentalSpectrum(benchmark::State& state) {
    const auto spec = single();
    const auto grid = gap_grid(spec, static_cast<std::size_t>(state.range(0)));
    grating::SpectrumOptions o;
    o.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(grating::grating_spectrum(spec, grid, o));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FundamentalSpectrum)->Arg(400)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_ThinLayerPoint(benchmark::State& state) {
    const auto spec = single();
    const auto profile = grating::profile_from_spec(spec);
    const auto n = grating::segment_count_for(profile, static_cast<double>(state.range(0)));
    const double w = wavelength_to_omega(1550e-9);
    for (auto _ : state) benchmark::DoNotOptimize(grating::thin_layer_matrix(profile, w, n));
    state.counters["segments"] = static_cast<double>(n);
}
BENCHMARK(BM_ThinLayerPoint)->Arg(20)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_QuantumFisher(benchmark::State& state) {
    const double w0 = wavelength_to_omega(1550e-9);
    const auto fam = metrology::linear_phase_family(w0, 1e-4, 2e-11, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(metrology::qfi(fam, w0, metrology::Restriction::dark_port));
}
BENCHMARK(BM_QuantumFisher);

void BM_DriftExperiment(benchmark::State& state) {
    const auto p = waveguide::solve_mode_pair(geometry, 1550e-9);
    noise::BiasModel m;
    noise::DriftConfig c;
    c.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(noise::simulate_drift_experiment(m, c, p));
}
BENCHMARK(BM_DriftExperiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
