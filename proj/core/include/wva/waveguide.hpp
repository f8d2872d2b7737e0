#pragma once

#include <utility>
#include <vector>

namespace wva::waveguide {

// Symmetric planar slab: core |x| <= half_width with index core_index, cladding elsewhere.
struct WaveguideGeometry {
    double half_width = 0.3e-6;
    double core_index = 1.98;
    double cladding_index = 1.45;

    void validate() const;
    double numerical_aperture() const;
    double v_number(double vacuum_wavenumber) const;

    bool operator==(const WaveguideGeometry&) const = default;
};

struct TEModeSolution {
    int mode_index = 0;
    double vacuum_wavenumber = 0.0;
    double propagation_constant = 0.0;
    double transverse_wavenumber = 0.0;
    double decay_constant = 0.0;
    double core_amplitude = 0.0;
    double edge_amplitude_plus = 0.0;
    double edge_amplitude_minus = 0.0;
    double effective_index = 0.0;
    double residual = 0.0;  // |gamma d - K d tan(K d - m pi/2)| at the returned root
};

struct ThermoOpticModel {
    double dn1_dT = 2.45e-5;
    double dn2_dT = 9.5e-6;
    double reference_temperature = 25.0;

    void validate() const;
    WaveguideGeometry at(const WaveguideGeometry& geometry, double temperature) const;

    bool operator==(const ThermoOpticModel&) const = default;
};

struct ModePair {
    WaveguideGeometry geometry;
    TEModeSolution te0;
    TEModeSolution te1;
};

// Number of guided TE modes, V > m pi/2.
int supported_mode_count(const WaveguideGeometry& geometry, double wavelength);

std::vector<TEModeSolution> solve_te_modes(const WaveguideGeometry& geometry, double wavelength);

TEModeSolution solve_te_mode(const WaveguideGeometry& geometry, double wavelength, int mode_index);

ModePair solve_mode_pair(const WaveguideGeometry& geometry, double wavelength);

double evaluate_mode(const TEModeSolution& mode, const WaveguideGeometry& geometry, double x);

// Closed-form integral of the squared field over [a, b].
double mode_power(const TEModeSolution& mode, const WaveguideGeometry& geometry, double a, double b);

// Integral of mode_a * mode_b over [a, b] by adaptive Gauss-Kronrod.
double mode_overlap(const TEModeSolution& mode_a, const TEModeSolution& mode_b,
                    const WaveguideGeometry& geometry, double a, double b);

// alpha = int_{-d}^{0} TE0 TE1 - int_{0}^{d} TE0 TE1
double mode_overlap_alpha(const TEModeSolution& mode0, const TEModeSolution& mode1,
                          const WaveguideGeometry& geometry);

double propagation_constant(const WaveguideGeometry& geometry, double omega, int mode_index = 0);

// (d beta / d omega)^-1 by a central difference with relative step 1e-6.
double native_group_velocity(const WaveguideGeometry& geometry, double omega, int mode_index = 0,
                             double relative_step = 1e-6);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> temperatures;
    std::vector<double> effective_indices;
};

SlopeFit thermo_optic_fit(const WaveguideGeometry& geometry, const ThermoOpticModel& model,
                          double wavelength, int mode_index, std::pair<double, double> t_range,
                          int points = 11);

double thermo_optic_slope(const WaveguideGeometry& geometry, const ThermoOpticModel& model,
                          double wavelength, int mode_index, std::pair<double, double> t_range);

}  // namespace wva::waveguide
