#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "wva/constants.hpp"
#include "wva/error.hpp"
#include "wva/grating.hpp"

using namespace wva;
using grating::SpectrumMethod;
using grating::SpectrumOptions;

namespace {

grating::HostDispersion default_host() {
    return grating::HostDispersion::from_waveguide(waveguide::WaveguideGeometry{}, 1550e-9);
}

double bragg_omega(const grating::GratingSpec& spec, std::size_t i = 0) {
    const auto& h = spec.host;
    return h.reference_omega + (spec.bragg_wavenumber(i) - h.reference_beta) * h.group_velocity;
}

SpectrumOptions with(SpectrumMethod m) {
    SpectrumOptions o;
    o.method = m;
    return o;
}

// Uniform-grating transmission from coupled-mode theory, any detuning.
double cmt_transmission(double kappa, double delta, double length) {
    const std::complex<double> s = std::sqrt(std::complex<double>(kappa * kappa - delta * delta));
    const std::complex<double> sl = s * length;
    const std::complex<double> denom = std::cosh(sl) * std::cosh(sl) +
                                       (delta * delta / (s * s)) * std::sinh(sl) * std::sinh(sl);
    return 1.0 / std::abs(denom);
}

}  // namespace

TEST(Grating, PeriodCentresGap) {
    const auto host = default_host();
    const auto spec = grating::single_grating(host, 1550e-9, 3e-4, 6.58e-3);
    EXPECT_NEAR(spec.detuning(wavelength_to_omega(1550e-9)), 0.0, 1e-9 * spec.bragg_wavenumber());
    EXPECT_NEAR(spec.coupling() * spec.length, 4.0, 0.01);
}

TEST(Grating, ZeroModulationIsTransparent) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 0.0, 1e-3);
    const auto grid = grating::linear_grid(wavelength_to_omega(1550.2e-9), wavelength_to_omega(1549.8e-9), 11);
    for (const auto m : {SpectrumMethod::fundamental, SpectrumMethod::thin_layer}) {
        const auto r = grating::grating_spectrum(spec, grid, with(m));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            EXPECT_NEAR(std::abs(r.r[i]), 0.0, 1e-12);
            EXPECT_NEAR(r.transmission[i], 1.0, 1e-9);
            EXPECT_NEAR(r.vg_ratio_transmitted[i], 1.0, 1e-6);
        }
    }
}

TEST(Grating, GapCentreTransmission) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    const double kl = spec.coupling() * spec.length;
    const auto m = grating::fundamental_matrix(spec, bragg_omega(spec));
    EXPECT_NEAR(std::norm(m.transmission()), 1.0 / std::pow(std::cosh(kl), 2), 1e-12);
    EXPECT_NEAR(std::norm(m.reflection()), std::pow(std::tanh(kl), 2), 1e-12);
}

TEST(Grating, BandEdgeAndBeyondClosedForms) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    const double kappa = spec.coupling();
    const double kl = kappa * spec.length;
    const double vg = spec.host.group_velocity;
    const double wb = bragg_omega(spec);
    // delta = kappa: T = 1 / (1 + (kappa L)^2)
    const auto edge = grating::fundamental_matrix(spec, wb + kappa * vg);
    EXPECT_NEAR(std::norm(edge.transmission()), 1.0 / (1.0 + kl * kl), 1e-9);
    // delta = sqrt(2) kappa: T = 1 / (1 + sin^2(kappa L))
    const auto out = grating::fundamental_matrix(spec, wb + std::sqrt(2.0) * kappa * vg);
    EXPECT_NEAR(std::norm(out.transmission()), 1.0 / (1.0 + std::pow(std::sin(kl), 2)), 1e-9);
}

TEST(Grating, DeterminantIsOne) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    for (const double d : {-10.0, -1.0, -0.3, 0.0, 0.5, 1.0, 3.0}) {
        const auto m = grating::fundamental_matrix(spec, bragg_omega(spec) + d * spec.coupling() * spec.host.group_velocity);
        EXPECT_NEAR(std::abs(m.det() - 1.0), 0.0, 1e-10);
    }
}

TEST(Grating, FundamentalMatchesCoupledModeSweep) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    const double kappa = spec.coupling();
    const double wb = bragg_omega(spec);
    const auto grid = grating::linear_grid(wb - 6 * kappa * spec.host.group_velocity,
                                           wb + 6 * kappa * spec.host.group_velocity, 501);
    const auto r = grating::grating_spectrum(spec, grid, with(SpectrumMethod::fundamental));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double delta = spec.detuning(grid[i]);
        if (std::abs(std::abs(delta) - kappa) < 1e-9 * kappa) continue;
        EXPECT_NEAR(r.transmission[i], cmt_transmission(kappa, delta, spec.length), 1e-9);
    }
}

TEST(Grating, ThinLayerAgreesWithFundamental) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    const double dw = spec.coupling() * spec.host.group_velocity;
    const double wb = bragg_omega(spec);
    const auto grid = grating::linear_grid(wb - 4 * dw, wb + 4 * dw, 81);
    const auto a = grating::grating_spectrum(spec, grid, with(SpectrumMethod::fundamental));
    const auto b = grating::grating_spectrum(spec, grid, with(SpectrumMethod::thin_layer));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(a.transmission[i], b.transmission[i], 2e-3);
        EXPECT_NEAR(std::norm(b.r[i]) + b.transmission[i], 1.0, 1e-9);
    }
}

TEST(Grating, SegmentDoublingConverges) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    const auto profile = grating::profile_from_spec(spec);
    const double dw = spec.coupling() * spec.host.group_velocity;
    const std::size_t n = grating::segment_count_for(profile, grating::default_segments_per_period);
    for (const double d : {-2.0, 0.0, 1.5}) {
        const double w = bragg_omega(spec) + d * dw;
        const double t1 = std::norm(grating::thin_layer_matrix(profile, w, n).transmission());
        const double t2 = std::norm(grating::thin_layer_matrix(profile, w, 2 * n).transmission());
        EXPECT_LT(std::abs(t1 - t2), 1e-3);
    }
}

TEST(Grating, SegmentFloorEnforced) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 1e-4);
    const auto profile = grating::profile_from_spec(spec);
    const std::size_t floor = grating::minimum_segment_count(profile);
    EXPECT_GE(static_cast<double>(floor), 20.0 * spec.length / spec.shortest_period() - 1.0);
    EXPECT_THROW(grating::thin_layer_matrix(profile, bragg_omega(spec), floor / 2), InvalidArgument);
}

TEST(Grating, ReversalPreservesTransmissionMagnitude) {
    const auto host = default_host();
    const auto spec = grating::multi_grating(host, {1549.9e-9, 1550.1e-9}, {3e-4, 2e-4}, 5e-4);
    const auto fwd = grating::profile_from_spec(spec);
    const auto rev = grating::reversed_profile(fwd);
    const std::size_t n = grating::segment_count_for(fwd, 64);
    for (const double lam : {1549.8e-9, 1549.9e-9, 1550.0e-9, 1550.07e-9}) {
        const double w = wavelength_to_omega(lam);
        const auto a = grating::thin_layer_matrix(fwd, w, n);
        const auto b = grating::thin_layer_matrix(rev, w, n);
        EXPECT_NEAR(std::abs(a.transmission()), std::abs(b.transmission()), 1e-9);
    }
}

TEST(Grating, InfiniteGroupVelocity) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    const double kappa = spec.coupling();
    const double vg = spec.host.group_velocity;
    const auto inside = grating::infinite_grating_response(spec, bragg_omega(spec) + 0.5 * kappa * vg);
    EXPECT_FALSE(inside.group_velocity.has_value());
    const auto outside = grating::infinite_grating_response(spec, bragg_omega(spec) + 2.0 * kappa * vg);
    ASSERT_TRUE(outside.group_velocity.has_value());
    EXPECT_NEAR(*outside.group_velocity / vg, std::sqrt(1.0 - 0.25), 1e-9);
}

TEST(Grating, HartmanRegimeInsideGap) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    const double dw = spec.coupling() * spec.host.group_velocity;
    const double wb = bragg_omega(spec);
    const auto r = grating::grating_spectrum(spec, grating::linear_grid(wb - dw, wb + dw, 201));
    EXPECT_LT(r.transmission[100], 0.01);
    EXPECT_GT(r.vg_ratio_transmitted[100], 1.0);
}

TEST(Grating, CoarseGridRejected) {
    const auto spec = grating::single_grating(default_host(), 1550e-9, 3e-4, 6.58e-3);
    const double dw = spec.coupling() * spec.host.group_velocity;
    const double w0 = bragg_omega(spec) + 1.2 * dw;
    // Find a second point whose residual-phase step, measured directly, exceeds pi/2.
    auto residual = [&](double w) {
        const auto t = std::conj(grating::fundamental_matrix(spec, w).transmission());
        return std::arg(t * std::polar(1.0, -spec.host.beta(w) * spec.length));
    };
    double w1 = 0.0;
    for (double step = 0.05; step < 20.0; step += 0.05) {
        const double diff = std::remainder(residual(w0 + step * dw) - residual(w0), 2.0 * pi);
        if (std::abs(diff) > 0.6 * pi) {
            w1 = w0 + step * dw;
            break;
        }
    }
    ASSERT_GT(w1, 0.0);
    EXPECT_THROW(grating::grating_spectrum(spec, {w0, w1}), GridTooCoarse);
}

TEST(Grating, DoubleGratingWindow) {
    const auto spec = grating::multi_grating(default_host(), {1549.82e-9, 1550.18e-9}, {3e-4, 3e-4}, 6.58e-3);
    const double w0 = wavelength_to_omega(1550e-9);
    const auto r = grating::grating_spectrum(spec, {w0 - 1e8, w0, w0 + 1e8}, with(SpectrumMethod::thin_layer));
    EXPECT_GE(r.transmission[1], 0.98);
    EXPECT_NEAR(r.vg_ratio_transmitted[1], 0.68, 0.03);
}

TEST(Grating, RejectsInvalidSpecs) {
    const auto host = default_host();
    EXPECT_THROW(grating::single_grating(host, 1550e-9, 3e-4, -1.0), InvalidArgument);
    EXPECT_THROW(grating::multi_grating(host, {1549e-9}, {1e-4, 2e-4}, 1e-3), InvalidArgument);
}
