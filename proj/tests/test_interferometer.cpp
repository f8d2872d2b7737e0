#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "wva/error.hpp"
#include "wva/interferometer.hpp"

using namespace wva;
using namespace wva::interferometer;

namespace {

const waveguide::ModePair& pair() {
    static const auto p = waveguide::solve_mode_pair(waveguide::WaveguideGeometry{}, 1550e-9);
    return p;
}

}  // namespace

TEST(Interferometer, StagesAreUnitary) {
    JointState s;
    s.a = {complex(0.3, 0.1), complex(-0.2, 0.5), complex(0.4, -0.3), complex(0.1, 0.2)};
    const double n = s.norm2();
    EXPECT_NEAR(apply_coupler(s).norm2(), n, 1e-14);
    EXPECT_NEAR(apply_arm_phase(s, 0.7).norm2(), n, 1e-14);
    EXPECT_NEAR(apply_mode_converter(s, 0.3).norm2(), n, 1e-14);
    for (const double phi : {-1.0, 0.0, 1e-3, 2.5}) EXPECT_NEAR(propagate(phi, 0.05).norm2(), 1.0, 1e-14);
}

TEST(Interferometer, OutputMatchesClosedForm) {
    const complex i(0.0, 1.0);
    for (const double phi : {-0.9, -1e-3, 0.0, 2e-4, 0.4, 1.7}) {
        for (const double kappa : {0.01, 0.05, 0.3, 0.9}) {
            const auto s = propagate(phi, kappa);
            const double q = std::sqrt(1.0 - kappa * kappa);
            EXPECT_NEAR(std::abs(s.a[0] - i * q * std::sin(phi / 2)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(s.a[1] - i * kappa * std::cos(phi / 2)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(s.a[2] - i * q * std::cos(phi / 2)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(s.a[3] + i * kappa * std::sin(phi / 2)), 0.0, 1e-14);
        }
    }
}

TEST(Interferometer, DarkPortIntensity) {
    for (const double kappa : {0.02, 0.05, 0.1}) {
        for (const double phi : {0.0, 1e-4, 1e-3}) {
            const auto dark = dark_port_state(propagate(phi, kappa));
            const double exact = (1 - kappa * kappa) * std::pow(std::sin(phi / 2), 2) +
                                 kappa * kappa * std::pow(std::cos(phi / 2), 2);
            EXPECT_NEAR(dark.probability(), exact, 1e-15);
            EXPECT_NEAR(dark.probability() / (kappa * kappa + phi * phi / 4) - 1.0, 0.0, 0.01);
            EXPECT_NEAR(dark.probability() + bright_port_state(propagate(phi, kappa)).probability(), 1.0, 1e-14);
        }
    }
}

TEST(Interferometer, ModeRatioWeakValue) {
    const double kappa = 0.05;
    for (const double phi : {-1e-3, 1e-4, 2e-3}) {
        const double s = mode_ratio_signal(dark_port_state(propagate(phi, kappa)));
        const double exact = std::sqrt(1 - kappa * kappa) * std::tan(phi / 2) / kappa;
        EXPECT_NEAR(s, exact, 1e-12);
        EXPECT_NEAR(s, phi / (2 * kappa), 0.01 * std::abs(phi / (2 * kappa)));
    }
    EXPECT_THROW(mode_ratio_signal(ModeAmplitudes{complex(1, 0), complex(0, 0)}), UndefinedSignal);
}

TEST(Interferometer, ModePhaseRotatesTe0) {
    const auto dark = dark_port_state(propagate(1e-3, 0.05));
    const auto shifted = apply_mode_phase(dark, 0.3);
    EXPECT_NEAR(std::abs(shifted.te1 - dark.te1), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(shifted.te0), std::abs(dark.te0), 1e-15);
    EXPECT_NEAR(std::arg(shifted.te0 / dark.te0), 0.3, 1e-12);
}

TEST(Interferometer, DisplacementSignalAntisymmetric) {
    const double kappa = 0.05;
    const auto zero = displacement_signal(dark_port_state(propagate(0.0, kappa)), pair());
    EXPECT_NEAR(zero.signal, 0.0, 1e-9);
    const double phi = 2e-3;
    const auto plus = displacement_signal(dark_port_state(propagate(phi, kappa)), pair());
    const auto minus = displacement_signal(dark_port_state(propagate(-phi, kappa)), pair());
    EXPECT_NEAR(plus.signal, -minus.signal, 1e-9);
    EXPECT_NE(plus.signal, 0.0);
    // Weak regime: dark ~ (phi/2, kappa), so (R - L) / (R + L) ~ phi kappa |alpha| / (kappa^2 int TE1^2) = g phi / kappa.
    const double gain = displacement_gain(pair());
    EXPECT_NEAR(std::abs(plus.signal), gain * phi / kappa, 0.02 * gain * phi / kappa);
}

TEST(Interferometer, DisplacementProfileHalvesAddUp) {
    const auto dark = dark_port_state(propagate(3e-3, 0.05));
    const auto r = displacement_signal(dark, pair(), 601);
    EXPECT_NEAR((r.profile.i_right - r.profile.i_left) / (r.profile.i_right + r.profile.i_left), r.signal, 1e-9);
    // The cross term is odd and cancels over the symmetric core window.
    const auto& m = pair();
    const double d = m.geometry.half_width;
    const double core = std::norm(dark.te0) * waveguide::mode_power(m.te0, m.geometry, -d, d) +
                        std::norm(dark.te1) * waveguide::mode_power(m.te1, m.geometry, -d, d);
    const auto halves = dark_port_halves(dark, m);
    EXPECT_NEAR((halves.left + halves.right) / core, 1.0, 1e-9);
}

TEST(Interferometer, WeakRegimeAndValidation) {
    const ReadoutConfig c{0.05, ReadoutMethod::mode_ratio};
    EXPECT_TRUE(c.weak_regime(1e-4));
    EXPECT_FALSE(c.weak_regime(0.05));
    EXPECT_THROW((ReadoutConfig{0.0, ReadoutMethod::mode_ratio}.validate()), InvalidArgument);
    EXPECT_THROW((ReadoutConfig{1.0, ReadoutMethod::mode_ratio}.validate()), InvalidArgument);
    EXPECT_THROW(propagate(4.0, 0.05), InvalidArgument);
}
