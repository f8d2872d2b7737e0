#include "wva_app/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "wva/constants.hpp"

namespace wva::app {

Scenario::Scenario(const ScenarioConfig& c)
    : config(c),
      modes(waveguide::solve_mode_pair(c.waveguide.geometry, c.waveguide.wavelength)),
      host(grating::HostDispersion::from_waveguide(c.waveguide.geometry, c.waveguide.wavelength)) {}

double Scenario::omega0() const { return wavelength_to_omega(config.waveguide.wavelength); }

grating::GratingSpec Scenario::single_grating() const {
    return grating::single_grating(host, config.waveguide.wavelength, config.grating.index_amplitude,
                                   config.grating.length);
}

grating::GratingSpec Scenario::double_grating() const {
    return grating::multi_grating(host, config.grating.double_centers, config.grating.double_amplitudes,
                                  config.grating.length);
}

grating::SpectrumOptions Scenario::single_options() const {
    grating::SpectrumOptions o;
    o.method = config.single_method();
    o.segments_per_period = config.grating.segments_per_period;
    return o;
}

grating::SpectrumOptions Scenario::double_options() const {
    grating::SpectrumOptions o;
    o.method = grating::SpectrumMethod::thin_layer;
    o.segments_per_period = config.grating.segments_per_period;
    return o;
}

double Scenario::single_bragg_omega() const {
    const auto spec = single_grating();
    return host.reference_omega + (spec.bragg_wavenumber() - host.reference_beta) * host.group_velocity;
}

std::vector<double> Scenario::single_grid(std::size_t points, double span_kappa) const {
    const auto spec = single_grating();
    const double center = single_bragg_omega();
    const double half = span_kappa * std::max(spec.coupling(), 1e-12 * host.reference_beta) * host.group_velocity;
    return grating::linear_grid(center - half, center + half, points);
}

std::vector<double> Scenario::double_grid(std::size_t points) const {
    const double w0 = omega0();
    const double half = 0.5 * (wavelength_to_omega(config.grating.window_min) -
                               wavelength_to_omega(config.grating.window_max));
    return grating::linear_grid(w0 - half, w0 + half, points);
}

std::vector<double> Scenario::sweep_grid() const {
    return grating::linear_grid(wavelength_to_omega(config.interferometer.sweep_max),
                                wavelength_to_omega(config.interferometer.sweep_min),
                                config.interferometer.sweep_points);
}

double Scenario::pipeline_dispersion() const {
    return grating::grating_phase_dispersion(double_grating(), omega0(), double_options()).second;
}

}  // namespace wva::app
