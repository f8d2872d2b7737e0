#pragma once

#include <vector>

#include "wva/grating.hpp"
#include "wva/waveguide.hpp"
#include "wva_app/config.hpp"

namespace wva::app {

// Physical objects assembled from a validated config.
struct Scenario {
    explicit Scenario(const ScenarioConfig& config);

    const ScenarioConfig& config;
    waveguide::ModePair modes;
    grating::HostDispersion host;

    double omega0() const;
    grating::GratingSpec single_grating() const;
    grating::GratingSpec double_grating() const;
    grating::SpectrumOptions single_options() const;
    grating::SpectrumOptions double_options() const;

    // omega at zero detuning of the single grating
    double single_bragg_omega() const;
    std::vector<double> single_grid(std::size_t points, double span_kappa) const;
    // Symmetric about omega0, spanning the configured wavelength window.
    std::vector<double> double_grid(std::size_t points) const;
    std::vector<double> sweep_grid() const;

    // Arm phase slope of the double grating at the design wavelength.
    double pipeline_dispersion() const;
};

}  // namespace wva::app
