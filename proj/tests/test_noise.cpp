#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "wva/error.hpp"
#include "wva/noise.hpp"

using namespace wva;
using namespace wva::noise;

namespace {

const waveguide::ModePair& pair() {
    static const auto p = waveguide::solve_mode_pair(waveguide::WaveguideGeometry{}, 1550e-9);
    return p;
}

}  // namespace

TEST(Noise, RandomWalkVariance) {
    BiasModel m;
    m.steps = 100;
    const int seeds = 10000;
    double sum = 0, sum2 = 0;
    for (int s = 0; s < seeds; ++s) {
        m.seed = 1000 + s;
        const double last = random_walk_bias(m).back();
        sum += last;
        sum2 += last * last;
    }
    const double mean = sum / seeds;
    const double var = sum2 / seeds - mean * mean;
    const double expected = 100.0 * std::pow(m.sigma_walk * m.dt, 2);
    EXPECT_NEAR(var / expected, 1.0, 0.05);
    EXPECT_LT(std::abs(mean), 4.0 * std::sqrt(expected / seeds));
}

TEST(Noise, RandomWalkStartsFromBias) {
    BiasModel m;
    m.bias = 0.01;
    m.sigma_walk = 0.0;
    for (const double b : random_walk_bias(m)) EXPECT_DOUBLE_EQ(b, 0.01);
}

TEST(Noise, BiasOffsetSuppression) {
    for (const double b : {0.002, 0.01, 0.02}) {
        for (const double kappa : {0.02, 0.05, 0.1}) {
            EXPECT_NEAR(biased_estimate(0.0, b, kappa, Architecture::wva) /
                            biased_estimate(0.0, b, kappa, Architecture::mzi),
                        2 * kappa, 1e-12);
            const double mzi = linear_phase(biased_signal(0.0, b, kappa, Architecture::mzi), kappa, Architecture::mzi);
            const double wva = linear_phase(biased_signal(0.0, b, kappa, Architecture::wva), kappa, Architecture::wva);
            EXPECT_NEAR(wva / mzi, 2 * kappa, 0.05 * 2 * kappa);
        }
    }
}

TEST(Noise, UnbiasedSignalsInvertToPhase) {
    const double kappa = 0.05;
    for (const double phi : {1e-4, 1e-3}) {
        EXPECT_NEAR(linear_phase(biased_signal(phi, 0.0, kappa, Architecture::mzi), kappa, Architecture::mzi), phi,
                    1e-3 * phi);
        EXPECT_NEAR(linear_phase(biased_signal(phi, 0.0, kappa, Architecture::wva), kappa, Architecture::wva), phi,
                    1e-2 * phi);
    }
}

TEST(Noise, AllanWhiteNoiseSlope) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> cumulative(1 << 16);
    double acc = 0;
    for (auto& v : cumulative) v = (acc += n(rng));
    const auto curve = allan_curve(cumulative, 1.0);
    ASSERT_GE(curve.size(), 8u);
    // Least-squares slope of log sigma against log tau over the well-populated part.
    const std::size_t k = curve.size() - 3;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = std::log(curve[i].tau), y = std::log(curve[i].sigma);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    EXPECT_NEAR(slope, -0.5, 0.05);
    EXPECT_NEAR(curve[0].sigma, 1.0, 0.02);
}

TEST(Noise, AllanZeroOnRamp) {
    std::vector<double> ramp(256);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 3.0 + 0.25 * static_cast<double>(i);
    for (const auto& p : allan_curve(ramp, 1e-3)) EXPECT_NEAR(p.sigma, 0.0, 1e-9);
    EXPECT_THROW(allan_deviation(ramp, 1e-3, 200), InsufficientData);
    EXPECT_THROW(allan_curve({1.0, 2.0}, 1.0), InsufficientData);
}

TEST(Noise, NullDriftHasNoBias) {
    BiasModel m;
    m.sigma_walk = 0.0;
    m.steps = 200;
    DriftConfig c;
    c.trajectories = 2;
    const auto ex = simulate_drift_experiment(m, c, pair());
    const double shot = 1.0 / std::sqrt(ex.photons_per_step * m.steps);
    for (const auto& t : ex.trajectories) {
        for (const double b : t.bias) EXPECT_EQ(b, 0.0);
        EXPECT_LT(std::abs(t.phase_estimate_mzi.back()), 6.0 * shot);
        EXPECT_LT(std::abs(t.phase_estimate_wva.back()), 6.0 * shot);
    }
}

TEST(Noise, DriftSuppressionFactor) {
    BiasModel m;
    DriftConfig c;
    const auto ex = simulate_drift_experiment(m, c, pair());
    const auto rates = drift_rate_std(ex, m, c.kappa);
    EXPECT_NEAR(rates.wva_deg_per_s / rates.mzi_deg_per_s, 2 * c.kappa, 1e-9);
    EXPECT_GT(rates.mzi_deg_per_s, 5.7e-4 / 2);
    EXPECT_LT(rates.mzi_deg_per_s, 5.7e-4 * 2);
}

TEST(Noise, DriftDeterministicAcrossThreads) {
    BiasModel m;
    m.steps = 100;
    DriftConfig c;
    c.trajectories = 4;
    c.threads = 1;
    const auto a = simulate_drift_experiment(m, c, pair());
    c.threads = 3;
    const auto b = simulate_drift_experiment(m, c, pair());
    for (std::size_t k = 0; k < a.trajectories.size(); ++k) {
        EXPECT_EQ(a.trajectories[k].bias, b.trajectories[k].bias);
        EXPECT_EQ(a.trajectories[k].cumulative_signal_wva, b.trajectories[k].cumulative_signal_wva);
        EXPECT_EQ(a.trajectories[k].phase_estimate_mzi, b.trajectories[k].phase_estimate_mzi);
    }
}

TEST(Noise, ModeRatioReadoutRuns) {
    BiasModel m;
    m.steps = 100;
    DriftConfig c;
    c.readout = DriftReadout::mode_ratio;
    c.trajectories = 2;
    const auto ex = simulate_drift_experiment(m, c, pair());
    EXPECT_EQ(ex.trajectories.size(), 2u);
    EXPECT_EQ(ex.trajectories[0].phase_estimate_wva.size(), 100u);
}

TEST(Noise, ThermalDriftIsLinear) {
    ThermalDriftModel model;
    model.dphi_domega = 2.034e-11;
    const auto one = thermal_drift(model, 1.0);
    const auto three = thermal_drift(model, 3.0);
    EXPECT_NEAR(three.delta_phi, 3 * one.delta_phi, 1e-12 * std::abs(one.delta_phi));
    EXPECT_NEAR(three.mode_mismatch_phi01, 3 * one.mode_mismatch_phi01, 1e-12 * std::abs(one.mode_mismatch_phi01));
    EXPECT_NEAR(one.delta_phi, 1e-3, 5e-5);
    EXPECT_NEAR(one.delta_omega_over_omega, 3.9e-8, 3.9e-9);
    EXPECT_NEAR(one.mode_mismatch_phi01, 5e-4, 5e-5);
    // delta_phi = k0 dn/dT delta_L
    const auto coeff = effective_thermal_coefficients(model);
    EXPECT_NEAR(one.delta_phi, 2 * M_PI / model.wavelength * coeff.dn0_dT * model.delta_L,
                1e-9 * std::abs(one.delta_phi));
}

TEST(Noise, Validation) {
    BiasModel m;
    m.dt = 0.0;
    EXPECT_THROW(random_walk_bias(m), InvalidArgument);
    DriftConfig c;
    c.trajectories = 0;
    EXPECT_THROW(simulate_drift_experiment(BiasModel{}, c, pair()), InvalidArgument);
}
