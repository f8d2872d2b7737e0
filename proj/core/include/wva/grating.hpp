#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "wva/waveguide.hpp"

namespace wva::grating {

using complex = std::complex<double>;

// Host waveguide propagation constant, linearized about a reference frequency:
// beta(w) = reference_beta + (w - reference_omega) / group_velocity.
struct HostDispersion {
    double reference_omega = 0.0;
    double reference_beta = 0.0;
    double group_velocity = 0.0;

    double beta(double omega) const;
    double mean_index() const;
    void validate() const;

    static HostDispersion dispersionless(double index, double reference_omega);
    static HostDispersion from_waveguide(const waveguide::WaveguideGeometry& geometry, double wavelength);
};

struct GratingComponent {
    double period = 0.0;
    double index_amplitude = 0.0;
};

struct GratingSpec {
    double mean_index = 0.0;
    std::vector<GratingComponent> components;
    double length = 0.0;
    HostDispersion host;

    void validate() const;
    double bragg_wavenumber(std::size_t i = 0) const;
    double bragg_wavelength(std::size_t i = 0) const;
    double coupling(std::size_t i = 0) const;
    double detuning(double omega, std::size_t i = 0) const;
    double shortest_period() const;
    double index(double z) const;
};

// Period whose band gap is centred on the given vacuum wavelength: Lambda = pi / beta(omega).
double period_for_center(const HostDispersion& host, double center_wavelength);

GratingSpec single_grating(const HostDispersion& host, double center_wavelength, double index_amplitude,
                           double length);

GratingSpec multi_grating(const HostDispersion& host, const std::vector<double>& center_wavelengths,
                          const std::vector<double>& index_amplitudes, double length);

struct Matrix2 {
    complex m11{1.0, 0.0};
    complex m12{0.0, 0.0};
    complex m21{0.0, 0.0};
    complex m22{1.0, 0.0};

    complex det() const { return m11 * m22 - m12 * m21; }
    complex reflection() const { return m21 / m11; }
    complex transmission() const { return 1.0 / m11; }
};

struct InfiniteResponse {
    double detuning = 0.0;
    complex q;
    std::optional<double> group_velocity;  // only outside the gap, |delta| >= kappa
};

InfiniteResponse infinite_grating_response(const GratingSpec& spec, double omega);

// Coupled-mode fundamental matrix; exp(-i beta z) propagation convention.
Matrix2 fundamental_matrix(const GratingSpec& spec, double omega);

struct IndexProfile {
    std::function<double(double)> index;
    double length = 0.0;
    double mean_index = 0.0;
    double shortest_period = 0.0;
    HostDispersion host;
};

IndexProfile profile_from_spec(const GratingSpec& spec);
IndexProfile reversed_profile(const IndexProfile& profile);

inline constexpr double min_segments_per_period = 20.0;
inline constexpr double default_segments_per_period = 128.0;

std::size_t minimum_segment_count(const IndexProfile& profile);
std::size_t segment_count_for(const IndexProfile& profile, double segments_per_period);

// Product of per-segment interface and propagation matrices, closed by an exit interface to the
// host index; exp(+i beta z) convention.
Matrix2 thin_layer_matrix(const IndexProfile& profile, double omega, std::size_t segment_count);

enum class SpectrumMethod { fundamental, thin_layer };

struct SpectrumOptions {
    SpectrumMethod method = SpectrumMethod::fundamental;
    double segments_per_period = default_segments_per_period;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct GratingResponse {
    std::vector<double> omega;
    std::vector<complex> r;
    std::vector<complex> t;
    std::vector<double> transmission;
    std::vector<double> transmitted_phase;     // unwrapped arg t, rad
    std::vector<double> group_velocity;        // from the transmitted phase, m/s
    std::vector<double> vg_ratio_transmitted;  // V_g / v_g
    std::vector<double> vg_ratio_reflected;    // from the unwrapped reflection phase
    std::vector<double> effective_index;
};

GratingResponse grating_spectrum(const GratingSpec& spec, const std::vector<double>& omega_grid,
                                 const SpectrumOptions& options = {});

// Same computation on an arbitrary profile (thin-layer only).
GratingResponse profile_spectrum(const IndexProfile& profile, const std::vector<double>& omega_grid,
                                 const SpectrumOptions& options = {});

std::vector<double> linear_grid(double lo, double hi, std::size_t points);

// phi = (beta_e - beta) L and d phi / d omega at one frequency, from the transmitted phase.
std::pair<double, double> grating_phase_dispersion(const GratingSpec& spec, double omega,
                                                   const SpectrumOptions& options = {});

// (L / v_g)(v_g / V_g - 1)
double excess_dispersion(double length, double native_group_velocity, double grating_group_velocity);

}  // namespace wva::grating
