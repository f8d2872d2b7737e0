#include "wva/metrology.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "wva/constants.hpp"
#include "wva/error.hpp"

namespace wva::metrology {

using interferometer::JointState;

const char* to_string(Architecture a) { return a == Architecture::mzi ? "mzi" : "wva"; }

void PrecisionScenario::validate() const {
    if (!(detected_power > 0.0) || !(input_power > 0.0)) throw InvalidArgument("powers must be positive");
    if (input_power < detected_power * (1.0 - 1e-12)) {
        throw InvalidArgument("input_power must be at least detected_power");
    }
    if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be positive");
    if (!(kappa > 0.0 && kappa <= 1.0)) throw InvalidArgument("kappa must lie in (0, 1]");
    if (!(dphi_domega > 0.0)) throw InvalidArgument("dispersion dphi_domega must be positive");
    if (!(integration_bandwidth > 0.0)) throw InvalidArgument("integration bandwidth must be positive");
}

PrecisionScenario PrecisionScenario::at_detected_power(double detected_power, double wavelength, double kappa,
                                                       double dphi_domega) {
    PrecisionScenario s;
    s.detected_power = detected_power;
    s.input_power = detected_power / (kappa * kappa);
    s.wavelength = wavelength;
    s.kappa = kappa;
    s.dphi_domega = dphi_domega;
    s.validate();
    return s;
}

double photon_rate(double power, double wavelength) {
    if (!(power > 0.0)) throw InvalidArgument("power must be positive");
    if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be positive");
    return power * wavelength / (planck * speed_of_light);
}

namespace {

double outcome_term(double p, double dp) {
    if (p < 0.0) throw InvalidArgument("outcome probability must be nonnegative");
    if (p == 0.0) {
        if (dp == 0.0) return 0.0;
        std::ostringstream msg;
        msg << "divergent information: zero-probability outcome with derivative " << dp;
        throw DivergentInformation(msg.str());
    }
    return dp * dp / p;
}

template <typename F>
auto five_point(const F& f, double x, double h) {
    return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) * (1.0 / (12.0 * h));
}

using Vec4 = std::array<std::complex<double>, 4>;

// Pure-state QFI of a normalized vector family of size n embedded in the first n entries.
double pure_qfi(const Vec4& psi, const Vec4& dpsi, int n) {
    double dd = 0.0;
    std::complex<double> overlap = 0.0;
    for (int i = 0; i < n; ++i) {
        dd += std::norm(dpsi[i]);
        overlap += std::conj(psi[i]) * dpsi[i];
    }
    return 4.0 * (dd - std::norm(overlap));
}

Vec4 normalized(const Vec4& v, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(v[i]);
    if (!(s > 0.0)) throw NumericalError("state with zero norm in QFI stencil");
    Vec4 out{};
    const double k = 1.0 / std::sqrt(s);
    for (int i = 0; i < n; ++i) out[i] = v[i] * k;
    return out;
}

Vec4 derivative(const StateFamily& family, double omega, double h, int n, bool normalize) {
    auto at = [&](double w) {
        Vec4 v = family(w).a;
        return normalize ? normalized(v, n) : v;
    };
    const Vec4 m2 = at(omega - 2.0 * h), m1 = at(omega - h), p1 = at(omega + h), p2 = at(omega + 2.0 * h);
    Vec4 out{};
    for (int i = 0; i < 4; ++i) out[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
    return out;
}

void check_step(double omega, double relative_step) {
    if (!(omega > 0.0) || !(relative_step > 0.0)) {
        throw NumericalError("derivative stencil needs positive omega and step");
    }
}

}  // namespace

double fisher_two_outcome(double p0, double p1, double dp0, double dp1) {
    return outcome_term(p0, dp0) + outcome_term(p1, dp1);
}

double crb_frequency(const PrecisionScenario& scenario, Architecture architecture) {
    scenario.validate();
    const double power = architecture == Architecture::mzi ? scenario.detected_power : scenario.input_power;
    const double n = photon_rate(power, scenario.wavelength) / scenario.integration_bandwidth;
    return 1.0 / (std::sqrt(n) * scenario.dphi_domega);
}

PrecisionReport precision_report(const PrecisionScenario& scenario, Architecture architecture) {
    scenario.validate();
    PrecisionReport r;
    r.architecture = architecture;
    const double dphi = scenario.dphi_domega;
    if (architecture == Architecture::mzi) {
        // Mid-fringe outcome pair sin^2(phi/2), cos^2(phi/2).
        const double phi = pi / 2.0;
        const double s = std::sin(phi / 2.0), c = std::cos(phi / 2.0);
        r.fisher_per_photon = fisher_two_outcome(s * s, c * c, s * c * dphi, -s * c * dphi);
        r.photon_rate = photon_rate(scenario.detected_power, scenario.wavelength);
    } else {
        // Weak-value dark-port pair phi^2/4, kappa^2 per input photon.
        const double phi = 1e-4;
        r.fisher_per_photon = fisher_two_outcome(phi * phi / 4.0, scenario.kappa * scenario.kappa,
                                                 phi / 2.0 * dphi, 0.0);
        r.photon_rate = photon_rate(scenario.input_power, scenario.wavelength);
    }
    r.qfi_per_photon = dphi * dphi;
    r.crb_delta_omega = crb_frequency(scenario, architecture);
    return r;
}

double qfi(const StateFamily& family, double omega, Restriction restriction, double relative_step) {
    check_step(omega, relative_step);
    const double h = relative_step * omega;
    if (restriction == Restriction::full) {
        const Vec4 psi = normalized(family(omega).a, 4);
        return pure_qfi(psi, derivative(family, omega, h, 4, true), 4);
    }
    const Vec4 raw = family(omega).a;
    const double p = std::norm(raw[0]) + std::norm(raw[1]);
    if (!(p > 0.0)) throw NumericalError("dark port carries no light");
    const Vec4 psi = normalized(raw, 2);
    const double q = pure_qfi(psi, derivative(family, omega, h, 2, true), 2);
    auto power = [&](double w) {
        const Vec4 v = family(w).a;
        return std::norm(v[0]) + std::norm(v[1]);
    };
    const double dp = five_point(power, omega, h);
    return p * q + dp * dp / p;
}

StateFamily linear_phase_family(double omega0, double phi0, double dphi_domega, double kappa) {
    return [=](double omega) { return interferometer::propagate(phi0 + dphi_domega * (omega - omega0), kappa); };
}

namespace {

double outcome_fisher(const StateFamily& family, double omega, double relative_step, int first, int count) {
    check_step(omega, relative_step);
    const double h = relative_step * omega;
    double total = 0.0;
    for (int i = first; i < first + count; i += 2) {
        auto p0 = [&](double w) { return std::norm(family(w).a[i]); };
        auto p1 = [&](double w) { return std::norm(family(w).a[i + 1]); };
        total += fisher_two_outcome(p0(omega), p1(omega), five_point(p0, omega, h), five_point(p1, omega, h));
    }
    return total;
}

}  // namespace

double dark_mode_ratio_fisher(const StateFamily& family, double omega, double relative_step) {
    return outcome_fisher(family, omega, relative_step, 0, 2);
}

double full_mode_ratio_fisher(const StateFamily& family, double omega, double relative_step) {
    return outcome_fisher(family, omega, relative_step, 0, 4);
}

double displacement_fisher(const waveguide::ModePair& modes, double dphi_domega) {
    const double d = modes.geometry.half_width;
    const double j = waveguide::mode_overlap(modes.te0, modes.te1, modes.geometry, 0.0, d);
    const double i1 = waveguide::mode_power(modes.te1, modes.geometry, -d, d);
    return dphi_domega * dphi_domega * 4.0 * j * j / i1;
}

double sensitivity(double kappa, double omega, double dphi_domega, Architecture architecture) {
    if (!(dphi_domega > 0.0)) throw InvalidArgument("dispersion must be positive");
    const double slope = architecture == Architecture::mzi ? 1.0 : 1.0 / (2.0 * kappa);
    return omega * dphi_domega * slope;
}

}  // namespace wva::metrology
