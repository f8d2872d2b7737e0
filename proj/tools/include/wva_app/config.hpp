#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wva/grating.hpp"
#include "wva/interferometer.hpp"
#include "wva/noise.hpp"
#include "wva/waveguide.hpp"

namespace wva::app {

struct WaveguideSection {
    waveguide::WaveguideGeometry geometry;
    double wavelength = 1550e-9;
    waveguide::ThermoOpticModel thermo;
    double t_min = 0.0;
    double t_max = 50.0;

    bool operator==(const WaveguideSection&) const = default;
};

struct GratingSection {
    double length = 6.58e-3;
    double index_amplitude = 3e-4;
    std::string method = "fundamental";  // single grating: fundamental | thin-layer
    std::size_t points = 4000;
    double span_kappa = 8.0;
    double segments_per_period = grating::default_segments_per_period;
    std::vector<double> double_centers{1549.82e-9, 1550.18e-9};
    std::vector<double> double_amplitudes{3e-4, 3e-4};
    double window_min = 1549.5e-9;
    double window_max = 1550.5e-9;
    std::size_t double_points = 201;

    bool operator==(const GratingSection&) const = default;
};

struct InterferometerSection {
    double kappa = 0.05;
    std::string readout = "mode-ratio";  // mode-ratio | displacement
    std::vector<double> phases{0.0, 0.002, 0.004, 0.006};
    std::size_t profile_points = 601;
    double sweep_min = 1549.97e-9;
    double sweep_max = 1550.03e-9;
    std::size_t sweep_points = 81;

    bool operator==(const InterferometerSection&) const = default;
};

struct MetrologySection {
    double detected_power = 2e-3;

    bool operator==(const MetrologySection&) const = default;
};

struct NoiseSection {
    double bias = 0.0;
    double sigma_walk = 1e-5;
    double dt = 6.4e-6;
    std::size_t steps = 1000;
    std::size_t trajectories = 5;
    std::string drift_readout = "displacement";  // displacement | mode-ratio
    std::vector<double> bias_values{0.002, 0.01, 0.02};
    double bias_phi_max = 0.2;
    std::size_t bias_points = 41;
    double delta_L = 10e-6;
    double delta_T = 1.0;

    bool operator==(const NoiseSection&) const = default;
};

struct OutputSection {
    std::string directory = "wva-output";
    std::vector<std::string> formats{"csv"};

    bool operator==(const OutputSection&) const = default;
};

struct ScenarioConfig {
    WaveguideSection waveguide;
    GratingSection grating;
    InterferometerSection interferometer;
    MetrologySection metrology;
    NoiseSection noise;
    OutputSection output;
    std::uint64_t seed = 7;

    bool operator==(const ScenarioConfig&) const = default;

    void validate() const;

    grating::SpectrumMethod single_method() const;
    interferometer::ReadoutMethod readout_method() const;
    noise::DriftReadout drift_readout() const;
    noise::BiasModel bias_model() const;
    noise::DriftConfig drift_config() const;
    bool wants(const std::string& format) const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse YAML text; overrides are "dotted.key=value" pairs applied on top of the file.
ScenarioConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {},
                                 const std::string& source = "<config>");
ScenarioConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

std::string emit_config(const ScenarioConfig& config);

}  // namespace wva::app
