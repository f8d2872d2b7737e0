#pragma once

#include <functional>

#include "wva/interferometer.hpp"
#include "wva/waveguide.hpp"

namespace wva::metrology {

enum class Architecture { mzi, wva };

const char* to_string(Architecture a);

struct PrecisionScenario {
    double detected_power = 2e-3;
    double input_power = 2e-3;
    double wavelength = 1550e-9;
    double kappa = 0.05;
    double dphi_domega = 0.0;           // s
    double integration_bandwidth = 1.0;  // Hz

    void validate() const;
    // Detected power P with the WVA input raised to P / kappa^2.
    static PrecisionScenario at_detected_power(double detected_power, double wavelength, double kappa,
                                               double dphi_domega);
};

struct PrecisionReport {
    Architecture architecture = Architecture::mzi;
    double fisher_per_photon = 0.0;  // s^2
    double qfi_per_photon = 0.0;     // s^2
    double crb_delta_omega = 0.0;    // rad/s per sqrt(Hz)
    double photon_rate = 0.0;        // 1/s
};

double photon_rate(double power, double wavelength);

// P0 (d ln P0)^2 + P1 (d ln P1)^2; the pair need not be normalized.
double fisher_two_outcome(double p0, double p1, double dp0, double dp1);

double crb_frequency(const PrecisionScenario& scenario, Architecture architecture);

PrecisionReport precision_report(const PrecisionScenario& scenario, Architecture architecture);

enum class Restriction { full, dark_port };

using StateFamily = std::function<interferometer::JointState(double omega)>;

// Pure-state QFI of the family at omega, central difference with relative step 1e-7.
// The dark-port value is per input photon: P * QFI(normalized dark state) + (dP)^2 / P.
double qfi(const StateFamily& family, double omega, Restriction restriction, double relative_step = 1e-7);

// Family omega -> propagate(phi0 + dphi_domega (omega - omega0), kappa).
StateFamily linear_phase_family(double omega0, double phi0, double dphi_domega, double kappa);

// Fisher information of counting TE0/TE1 at the dark port, per input photon.
double dark_mode_ratio_fisher(const StateFamily& family, double omega, double relative_step = 1e-7);

// Mode-resolved counting at both output ports (four outcomes), per input photon.
double full_mode_ratio_fisher(const StateFamily& family, double omega, double relative_step = 1e-7);

// (d phi)^2 4 (int_0^d TE0 TE1)^2 / int_{-d}^{d} TE1^2
double displacement_fisher(const waveguide::ModePair& modes, double dphi_domega);

// omega dphi/domega times dS/dphi, with dS/dphi = 1 (MZI) or 1/(2 kappa) (WVA).
double sensitivity(double kappa, double omega, double dphi_domega, Architecture architecture);

}  // namespace wva::metrology
