#include "wva/interferometer.hpp"


#include <cmath>

#include "wva/error.hpp"
#include "quadrature.hpp"

namespace wva::interferometer {

namespace {

constexpr complex I(0.0, 1.0);
const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

double JointState::norm2() const {
    double s = 0.0;
    for (const auto& x : a) s += std::norm(x);
    return s;
}

void ReadoutConfig::validate() const {
    if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("kappa must lie in (0, 1)");
}

bool ReadoutConfig::weak_regime(double phi) const { return std::abs(phi) < 0.5 * kappa && kappa < 0.3; }

JointState preselected_state() { return JointState{}; }

JointState apply_coupler(const JointState& in) {
    JointState out;
    for (int m = 0; m < 2; ++m) {
        const complex u = in.a[m];
        const complex l = in.a[2 + m];
        out.a[m] = (u + I * l) * inv_sqrt2;
        out.a[2 + m] = (I * u + l) * inv_sqrt2;
    }
    return out;
}

JointState apply_arm_phase(const JointState& in, double phi) {
    JointState out;
    const complex up = std::polar(1.0, phi / 2.0);
    const complex down = std::polar(1.0, -phi / 2.0);
    out.a = {in.a[0] * up, in.a[1] * up, in.a[2] * down, in.a[3] * down};
    return out;
}

JointState apply_mode_converter(const JointState& in, double kappa) {
    const double c = std::sqrt(1.0 - kappa * kappa);
    JointState out;
    for (int arm = 0; arm < 2; ++arm) {
        const double sign = arm == 0 ? 1.0 : -1.0;
        const complex t0 = in.a[2 * arm];
        const complex t1 = in.a[2 * arm + 1];
        out.a[2 * arm] = c * t0 + sign * I * kappa * t1;
        out.a[2 * arm + 1] = sign * I * kappa * t0 + c * t1;
    }
    return out;
}

JointState propagate(double phi, double kappa) {
    if (!(std::abs(phi) < 3.141592653589793)) throw InvalidArgument("|phi| must be below pi");
    ReadoutConfig{kappa, ReadoutMethod::mode_ratio}.validate();
    JointState s = apply_coupler(preselected_state());
    s = apply_arm_phase(s, phi);
    s = apply_mode_converter(s, kappa);
    return apply_coupler(s);
}

ModeAmplitudes dark_port_state(const JointState& state) { return {state.a[0], state.a[1]}; }

ModeAmplitudes bright_port_state(const JointState& state) { return {state.a[2], state.a[3]}; }

ModeAmplitudes apply_mode_phase(const ModeAmplitudes& dark, double phi01) {
    return {dark.te0 * std::polar(1.0, phi01), dark.te1};
}

double mode_ratio_signal(const ModeAmplitudes& dark) {
    if (std::abs(dark.te1) < 1e-15) throw UndefinedSignal("mode-ratio signal undefined: TE1 amplitude vanishes");
    const complex ratio = dark.te0 / dark.te1;
    return std::copysign(std::abs(ratio), ratio.real());
}

HalfIntegrals dark_port_halves(const ModeAmplitudes& dark, const waveguide::ModePair& modes) {
    const auto& g = modes.geometry;
    const double d = g.half_width;
    // |a0 f0 + a1 f1|^2 = |a0|^2 f0^2 + |a1|^2 f1^2 + 2 Re(a0 conj a1) f0 f1
    const double w00 = std::norm(dark.te0);
    const double w11 = std::norm(dark.te1);
    const double w01 = 2.0 * (dark.te0 * std::conj(dark.te1)).real();
    const double p0 = waveguide::mode_power(modes.te0, g, 0.0, d);
    const double p1 = waveguide::mode_power(modes.te1, g, 0.0, d);
    const double cross = waveguide::mode_overlap(modes.te0, modes.te1, g, 0.0, d);
    // TE0^2 and TE1^2 are even; TE0 TE1 is odd.
    return {w00 * p0 + w11 * p1 - w01 * cross, w00 * p0 + w11 * p1 + w01 * cross};
}

DisplacementReadout displacement_signal(const ModeAmplitudes& dark, const waveguide::ModePair& modes,
                                        std::size_t grid_points, double window_half_widths) {
    const auto& g = modes.geometry;
    const double d = g.half_width;
    const auto halves = dark_port_halves(dark, modes);
    const double total = halves.left + halves.right;
    if (!(total > 0.0)) throw UndefinedSignal("displacement signal undefined: zero dark-port intensity");

    auto density = [&](double x) {
        return std::norm(dark.te0 * waveguide::evaluate_mode(modes.te0, g, x) +
                         dark.te1 * waveguide::evaluate_mode(modes.te1, g, x));
    };

    DisplacementReadout out;
    out.signal = (halves.right - halves.left) / total;
    out.profile.i_left = halves.left;
    out.profile.i_right = halves.right;

    auto moment = [&](double x) { return x * density(x); };
    const double first = detail::integrate(moment, -d, 0.0) +
                         detail::integrate(moment, 0.0, d);
    out.profile.mean_x = first / total;

    if (grid_points >= 2) {
        const double span = window_half_widths * d;
        out.profile.x.resize(grid_points);
        out.profile.intensity.resize(grid_points);
        for (std::size_t i = 0; i < grid_points; ++i) {
            const double x = -span + 2.0 * span * static_cast<double>(i) / (grid_points - 1);
            out.profile.x[i] = x;
            out.profile.intensity[i] = density(x);
        }
    }
    return out;
}

double displacement_gain(const waveguide::ModePair& modes) {
    const double d = modes.geometry.half_width;
    const double alpha = waveguide::mode_overlap_alpha(modes.te0, modes.te1, modes.geometry);
    return -alpha / waveguide::mode_power(modes.te1, modes.geometry, -d, d);
}

FrequencyReadout simulate_frequency_readout(double omega, const grating::GratingSpec& grating,
                                            const ReadoutConfig& config,
                                            const grating::SpectrumOptions& spectrum,
                                            const waveguide::ModePair* modes) {
    config.validate();
    FrequencyReadout out;
    out.phi = grating::grating_phase_dispersion(grating, omega, spectrum).first;
    const auto dark = dark_port_state(propagate(out.phi, config.kappa));
    out.postselection_probability = dark.probability();
    if (config.method == ReadoutMethod::mode_ratio) {
        out.signal = mode_ratio_signal(dark);
    } else {
        if (modes == nullptr) throw InvalidArgument("displacement readout needs the waveguide mode pair");
        out.signal = displacement_signal(dark, *modes, 0).signal;
    }
    return out;
}

}  // namespace wva::interferometer
