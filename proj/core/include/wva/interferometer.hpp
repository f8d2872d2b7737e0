#pragma once

#include <array>
#include <complex>
#include <vector>

#include "wva/grating.hpp"
#include "wva/waveguide.hpp"

namespace wva::interferometer {

using complex = std::complex<double>;

// Amplitudes over (path) x (mode): upper-TE0, upper-TE1, lower-TE0, lower-TE1.
struct JointState {
    std::array<complex, 4> a{complex(1.0, 0.0), complex(0.0, 0.0), complex(0.0, 0.0), complex(0.0, 0.0)};

    double norm2() const;
};

struct ModeAmplitudes {
    complex te0;
    complex te1;

    double probability() const { return std::norm(te0) + std::norm(te1); }
};

enum class ReadoutMethod { mode_ratio, displacement };

struct ReadoutConfig {
    double kappa = 0.05;
    ReadoutMethod method = ReadoutMethod::mode_ratio;

    void validate() const;
    // phi << kappa << 1
    bool weak_regime(double phi) const;
};

struct DarkPortProfile {
    std::vector<double> x;
    std::vector<double> intensity;
    double i_left = 0.0;
    double i_right = 0.0;
    double mean_x = 0.0;
};

struct DisplacementReadout {
    double signal = 0.0;
    DarkPortProfile profile;
};

struct FrequencyReadout {
    double signal = 0.0;
    double phi = 0.0;
    double postselection_probability = 0.0;
};

JointState preselected_state();

// Individual elements, in pipeline order.
JointState apply_coupler(const JointState& in);
JointState apply_arm_phase(const JointState& in, double phi);
JointState apply_mode_converter(const JointState& in, double kappa);

JointState propagate(double phi, double kappa);

ModeAmplitudes dark_port_state(const JointState& state);
ModeAmplitudes bright_port_state(const JointState& state);

// Multiply the TE0 amplitude by exp(i phi01), a relative mode phase picked up before detection.
ModeAmplitudes apply_mode_phase(const ModeAmplitudes& dark, double phi01);

// Signed |TE0/TE1| with the sign of Re(TE0/TE1).
double mode_ratio_signal(const ModeAmplitudes& dark);

// Core-window intensity integrals of |a0 TE0 + a1 TE1|^2 over [-d, 0] and [0, d].
struct HalfIntegrals {
    double left = 0.0;
    double right = 0.0;
};

HalfIntegrals dark_port_halves(const ModeAmplitudes& dark, const waveguide::ModePair& modes);

DisplacementReadout displacement_signal(const ModeAmplitudes& dark, const waveguide::ModePair& modes,
                                        std::size_t grid_points = 601, double window_half_widths = 3.0);

// Linear gain g in S ~ g phi / kappa for the displacement readout: -alpha / int_{-d}^{d} TE1^2.
double displacement_gain(const waveguide::ModePair& modes);

FrequencyReadout simulate_frequency_readout(double omega, const grating::GratingSpec& grating,
                                            const ReadoutConfig& config,
                                            const grating::SpectrumOptions& spectrum = {},
                                            const waveguide::ModePair* modes = nullptr);

}  // namespace wva::interferometer
