#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "wva/metrology.hpp"
#include "wva/waveguide.hpp"

namespace wva::noise {

using metrology::Architecture;

struct BiasModel {
    double bias = 0.0;          // initial misread fraction
    double sigma_walk = 1e-5;   // 1/s
    double dt = 6.4e-6;         // s
    std::size_t steps = 1000;
    std::uint64_t seed = 7;

    void validate() const;
};

// Linear law: MZI phi + b, WVA phi + 2 kappa b.
double biased_estimate(double phi, double b, double kappa, Architecture architecture);

// Full response with a misread fraction b. MZI at mid-fringe: S = sin(phi) + b (1 - sin(phi)) for b >= 0
// (upper-port photons moved to the lower port); WVA mode ratio: S = sqrt(1-k^2) tan(phi/2) / k + b.
double biased_signal(double phi, double b, double kappa, Architecture architecture);

// Phase from a signal with the linear calibration: MZI S, WVA 2 kappa S.
double linear_phase(double signal, double kappa, Architecture architecture);

std::vector<double> random_walk_bias(const BiasModel& model);

enum class DriftReadout { displacement, mode_ratio };

struct DriftConfig {
    double power = 2e-3;
    double wavelength = 1550e-9;
    double kappa = 0.05;
    std::size_t trajectories = 5;
    DriftReadout readout = DriftReadout::displacement;
    unsigned threads = 0;

    void validate() const;
};

struct DriftTrajectory {
    std::uint64_t seed = 0;
    double photons_per_step = 0.0;
    std::vector<double> times;
    std::vector<double> bias;
    std::vector<double> phase_estimate_mzi;  // running mean, rad
    std::vector<double> phase_estimate_wva;
    std::vector<double> cumulative_signal_mzi;  // photon-count difference
    std::vector<double> cumulative_signal_wva;  // assigned positions, micrometres
};

struct DriftExperiment {
    std::vector<DriftTrajectory> trajectories;
    double photons_per_step = 0.0;
    double right_position_um = 0.0;  // <x> of the right half of the dark-port profile at phi = 0
    double wva_slope = 0.0;          // dS/d(rho) of the WVA readout at rho = 0
};

DriftExperiment simulate_drift_experiment(const BiasModel& model, const DriftConfig& config,
                                          const waveguide::ModePair& modes);

// Pointwise mean over trajectories of one series.
std::vector<double> trajectory_mean(const DriftExperiment& experiment,
                                    std::vector<double> DriftTrajectory::*series);

struct DriftRates {
    double mzi_deg_per_s = 0.0;
    double wva_deg_per_s = 0.0;
};

// Standard deviation of the phase-offset drift rate, pooled over trajectories.
DriftRates drift_rate_std(const DriftExperiment& experiment, const BiasModel& model, double kappa);

struct AllanPoint {
    double tau = 0.0;
    double sigma = 0.0;
};

AllanPoint allan_deviation(const std::vector<double>& samples, double dt, std::size_t m);

// m = 1, 2, 4, ... up to N/4.
std::vector<AllanPoint> allan_curve(const std::vector<double>& samples, double dt);

struct AllanRow {
    double tau = 0.0;
    double sigma_mzi = 0.0;
    double sigma_wva = 0.0;
    double ratio = 0.0;
};

struct AllanComparison {
    std::vector<AllanRow> rows;
    double mean_ratio = 0.0;
};

// Allan curves of the trajectory-averaged cumulative signals.
AllanComparison allan_comparison(const DriftExperiment& experiment, double dt);

struct ThermalDriftModel {
    double delta_L = 10e-6;
    waveguide::WaveguideGeometry geometry;
    waveguide::ThermoOpticModel thermo;
    double wavelength = 1550e-9;
    double dphi_domega = 0.0;
    std::pair<double, double> t_range{0.0, 50.0};

    void validate() const;
};

struct ThermalCoefficients {
    double dn0_dT = 0.0;
    double dn1_dT = 0.0;
};

ThermalCoefficients effective_thermal_coefficients(const ThermalDriftModel& model);

struct ThermalDrift {
    double delta_phi = 0.0;
    double delta_omega_over_omega = 0.0;
    double mode_mismatch_phi01 = 0.0;
    double displacement_signal_factor = 1.0;
};

ThermalDrift thermal_drift(const ThermalDriftModel& model, const ThermalCoefficients& coefficients, double delta_T);
ThermalDrift thermal_drift(const ThermalDriftModel& model, double delta_T);

}  // namespace wva::noise
