#include "wva/noise.hpp"


#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "wva/constants.hpp"
#include "wva/error.hpp"
#include "quadrature.hpp"
#include "wva/interferometer.hpp"

namespace wva::noise {

void BiasModel::validate() const {
    if (!(dt > 0.0)) throw InvalidArgument("bias model dt must be positive");
    if (!(sigma_walk >= 0.0)) throw InvalidArgument("sigma_walk must be nonnegative");
    if (!(std::abs(bias) < 0.5)) throw InvalidArgument("|bias| must be below 0.5");
    if (steps == 0) throw InvalidArgument("bias model needs at least one step");
}

void DriftConfig::validate() const {
    if (!(power > 0.0)) throw InvalidArgument("drift power must be positive");
    if (!(wavelength > 0.0)) throw InvalidArgument("drift wavelength must be positive");
    if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("kappa must lie in (0, 1)");
    if (trajectories == 0) throw InvalidArgument("drift experiment needs at least one trajectory");
}

double biased_estimate(double phi, double b, double kappa, Architecture architecture) {
    if (!(std::abs(b) < 0.5)) throw InvalidArgument("|b| must be below 0.5");
    return architecture == Architecture::mzi ? phi + b : phi + 2.0 * kappa * b;
}

double biased_signal(double phi, double b, double kappa, Architecture architecture) {
    if (architecture == Architecture::mzi) {
        const double s = std::sin(phi);
        return b >= 0.0 ? s + b * (1.0 - s) : s + b * (1.0 + s);
    }
    return std::sqrt(1.0 - kappa * kappa) * std::tan(phi / 2.0) / kappa + b;
}

double linear_phase(double signal, double kappa, Architecture architecture) {
    return architecture == Architecture::mzi ? signal : 2.0 * kappa * signal;
}

std::vector<double> random_walk_bias(const BiasModel& model) {
    model.validate();
    std::mt19937_64 rng(model.seed);
    std::normal_distribution<double> step(0.0, 1.0);
    std::vector<double> b(model.steps);
    const double scale = model.sigma_walk * model.dt;
    double acc = model.bias;
    for (auto& v : b) {
        acc += scale * step(rng);
        v = acc;
    }
    return b;
}

namespace {

// Exact below 1e5 trials, Gaussian approximation above.
double sample_binomial(std::mt19937_64& rng, double n, double p) {
    p = std::clamp(p, 0.0, 1.0);
    if (n < 1e5) {
        std::binomial_distribution<long long> dist(static_cast<long long>(n), p);
        return static_cast<double>(dist(rng));
    }
    std::normal_distribution<double> z(0.0, 1.0);
    const double draw = n * p + std::sqrt(n * p * (1.0 - p)) * z(rng);
    return std::clamp(std::round(draw), 0.0, n);
}

struct WvaReadoutModel {
    waveguide::ModePair modes;
    double right_position_um = 0.0;
    double slope = 0.0;  // dS/d(rho) at rho = 0
    double half_power0 = 0.0;  // int_0^d TE0^2
    double half_power1 = 0.0;
    double half_cross = 0.0;   // int_0^d TE0 TE1

    // Right-half share of the core intensity of rho TE0 + TE1.
    double right_fraction(double rho) const {
        const double even = rho * rho * half_power0 + half_power1;
        return (even + 2.0 * rho * half_cross) / (2.0 * even);
    }
};

WvaReadoutModel make_readout_model(const waveguide::ModePair& modes, DriftReadout readout) {
    WvaReadoutModel m;
    m.modes = modes;
    const auto& g = modes.geometry;
    const double d = g.half_width;
    m.half_power0 = waveguide::mode_power(modes.te0, g, 0.0, d);
    m.half_power1 = waveguide::mode_power(modes.te1, g, 0.0, d);
    m.half_cross = waveguide::mode_overlap(modes.te0, modes.te1, g, 0.0, d);
    auto weighted = [&](double x) {
        const double f = waveguide::evaluate_mode(modes.te1, g, x);
        return x * f * f;
    };
    const double first = detail::integrate(weighted, 0.0, d);
    m.right_position_um = first / waveguide::mode_power(modes.te1, g, 0.0, d) * 1e6;
    m.slope = readout == DriftReadout::displacement ? 2.0 * interferometer::displacement_gain(modes) : 2.0;
    return m;
}

DriftTrajectory run_trajectory(const BiasModel& model, const DriftConfig& config, const WvaReadoutModel& wva,
                               double photons, std::uint64_t seed) {
    BiasModel walk = model;
    walk.seed = seed;
    DriftTrajectory tr;
    tr.seed = seed;
    tr.photons_per_step = photons;
    tr.bias = random_walk_bias(walk);

    // Shot noise uses a stream independent of the bias walk.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const double kappa = config.kappa;
    const double phi = 0.0;
    const auto dark = interferometer::dark_port_state(interferometer::propagate(phi, kappa));
    const double p_dark = dark.probability();
    const double ratio = interferometer::mode_ratio_signal(dark);

    const std::size_t n = model.steps;
    tr.times.resize(n);
    tr.phase_estimate_mzi.resize(n);
    tr.phase_estimate_wva.resize(n);
    tr.cumulative_signal_mzi.resize(n);
    tr.cumulative_signal_wva.resize(n);
    double sum_mzi = 0.0, sum_wva = 0.0, cum_mzi = 0.0, cum_wva = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double b = tr.bias[k];
        tr.times[k] = static_cast<double>(k + 1) * model.dt;

        // MZI at mid-fringe: lower port probability (1 + sin phi) / 2, fraction |b| misread across ports.
        const double lower = sample_binomial(rng, photons, 0.5 * (1.0 + std::sin(phi)));
        const double upper = photons - lower;
        const double moved = b >= 0.0 ? b * upper : b * lower;
        const double diff = (lower + moved) - (upper - moved);
        cum_mzi += diff;
        sum_mzi += linear_phase(diff / photons, kappa, Architecture::mzi);

        // WVA: post-selected photons; the bias offsets the TE0/TE1 amplitude ratio.
        const double n_dark = sample_binomial(rng, photons, p_dark);
        const double rho = ratio + b;
        double p_plus = 0.5;
        if (config.readout == DriftReadout::displacement) {
            p_plus = wva.right_fraction(rho);
        } else {
            p_plus = (1.0 + rho) * (1.0 + rho) / (2.0 * (1.0 + rho * rho));
        }
        double signal = 0.0;
        if (n_dark > 0.0) {
            const double n_plus = sample_binomial(rng, n_dark, p_plus);
            const double d = 2.0 * n_plus - n_dark;
            signal = d / n_dark;
            cum_wva += config.readout == DriftReadout::displacement ? d * wva.right_position_um : d;
        }
        sum_wva += 2.0 * kappa * signal / wva.slope;

        tr.cumulative_signal_mzi[k] = cum_mzi;
        tr.cumulative_signal_wva[k] = cum_wva;
        tr.phase_estimate_mzi[k] = sum_mzi / static_cast<double>(k + 1);
        tr.phase_estimate_wva[k] = sum_wva / static_cast<double>(k + 1);
    }
    return tr;
}

}  // namespace

DriftExperiment simulate_drift_experiment(const BiasModel& model, const DriftConfig& config,
                                          const waveguide::ModePair& modes) {
    model.validate();
    config.validate();
    const double photons = std::round(metrology::photon_rate(config.power, config.wavelength) * model.dt);
    if (!(photons >= 1.0)) {
        std::ostringstream msg;
        msg << "zero photons per step (power " << config.power << " W, dt " << model.dt << " s)";
        throw InvalidArgument(msg.str());
    }
    const WvaReadoutModel wva = make_readout_model(modes, config.readout);

    DriftExperiment out;
    out.photons_per_step = photons;
    out.right_position_um = wva.right_position_um;
    out.wva_slope = wva.slope;
    out.trajectories.resize(config.trajectories);

    unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trajectories));
    auto body = [&](std::size_t k) {
        out.trajectories[k] = run_trajectory(model, config, wva, photons, model.seed + k);
    };
    if (threads <= 1) {
        for (std::size_t k = 0; k < config.trajectories; ++k) body(k);
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < config.trajectories; k += threads) body(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<double> trajectory_mean(const DriftExperiment& experiment,
                                    std::vector<double> DriftTrajectory::*series) {
    if (experiment.trajectories.empty()) return {};
    std::vector<double> mean((experiment.trajectories.front().*series).size(), 0.0);
    for (const auto& tr : experiment.trajectories) {
        const auto& s = tr.*series;
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += s[i];
    }
    for (auto& v : mean) v /= static_cast<double>(experiment.trajectories.size());
    return mean;
}

namespace {

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) throw InsufficientData("drift-rate statistics need at least two steps");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(v.size() - 1));
}

}  // namespace

DriftRates drift_rate_std(const DriftExperiment& experiment, const BiasModel& model, double kappa) {
    std::vector<double> mzi, wva;
    for (const auto& tr : experiment.trajectories) {
        double prev_mzi = biased_estimate(0.0, model.bias, kappa, Architecture::mzi);
        double prev_wva = biased_estimate(0.0, model.bias, kappa, Architecture::wva);
        for (double b : tr.bias) {
            const double off_mzi = biased_estimate(0.0, b, kappa, Architecture::mzi);
            const double off_wva = biased_estimate(0.0, b, kappa, Architecture::wva);
            mzi.push_back((off_mzi - prev_mzi) / model.dt);
            wva.push_back((off_wva - prev_wva) / model.dt);
            prev_mzi = off_mzi;
            prev_wva = off_wva;
        }
    }
    const double deg = 180.0 / pi;
    return DriftRates{sample_std(mzi) * deg, sample_std(wva) * deg};
}

AllanPoint allan_deviation(const std::vector<double>& samples, double dt, std::size_t m) {
    const std::size_t n = samples.size();
    if (m == 0 || n < 2 * m + 1) {
        std::ostringstream msg;
        msg << "insufficient data: Allan deviation with m = " << m << " needs at least " << 2 * m + 1
            << " samples, got " << n;
        throw InsufficientData(msg.str());
    }
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    const double tau = static_cast<double>(m) * dt;
    double acc = 0.0;
    for (std::size_t i = 0; i + 2 * m < n; ++i) {
        const double d2 = samples[i + 2 * m] - 2.0 * samples[i + m] + samples[i];
        acc += d2 * d2;
    }
    const double var = acc / (2.0 * tau * tau * static_cast<double>(n - 2 * m));
    return {tau, std::sqrt(var)};
}

std::vector<AllanPoint> allan_curve(const std::vector<double>& samples, double dt) {
    std::vector<AllanPoint> curve;
    for (std::size_t m = 1; m <= samples.size() / 4; m *= 2) curve.push_back(allan_deviation(samples, dt, m));
    if (curve.empty()) throw InsufficientData("Allan curve needs at least 4 samples");
    return curve;
}

AllanComparison allan_comparison(const DriftExperiment& experiment, double dt) {
    const auto mzi = allan_curve(trajectory_mean(experiment, &DriftTrajectory::cumulative_signal_mzi), dt);
    const auto wva = allan_curve(trajectory_mean(experiment, &DriftTrajectory::cumulative_signal_wva), dt);
    AllanComparison out;
    for (std::size_t i = 0; i < mzi.size(); ++i) {
        const double ratio = mzi[i].sigma > 0.0 ? wva[i].sigma / mzi[i].sigma : 0.0;
        out.rows.push_back({mzi[i].tau, mzi[i].sigma, wva[i].sigma, ratio});
        out.mean_ratio += ratio;
    }
    out.mean_ratio /= static_cast<double>(out.rows.size());
    return out;
}

void ThermalDriftModel::validate() const {
    if (!(delta_L >= 0.0)) throw InvalidArgument("delta_L must be nonnegative");
    if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be positive");
    if (!(dphi_domega > 0.0)) throw InvalidArgument("dispersion dphi_domega must be positive");
    geometry.validate();
    thermo.validate();
}

ThermalCoefficients effective_thermal_coefficients(const ThermalDriftModel& model) {
    model.validate();
    return {waveguide::thermo_optic_slope(model.geometry, model.thermo, model.wavelength, 0, model.t_range),
            waveguide::thermo_optic_slope(model.geometry, model.thermo, model.wavelength, 1, model.t_range)};
}

ThermalDrift thermal_drift(const ThermalDriftModel& model, const ThermalCoefficients& c, double delta_T) {
    model.validate();
    const double scale = 2.0 * pi * model.delta_L / model.wavelength;
    ThermalDrift out;
    out.delta_phi = scale * c.dn0_dT * delta_T;
    const double omega = wavelength_to_omega(model.wavelength);
    out.delta_omega_over_omega = out.delta_phi / (omega * model.dphi_domega);
    out.mode_mismatch_phi01 = scale * (c.dn0_dT - c.dn1_dT) * delta_T;
    out.displacement_signal_factor = std::cos(out.mode_mismatch_phi01);
    return out;
}

ThermalDrift thermal_drift(const ThermalDriftModel& model, double delta_T) {
    return thermal_drift(model, effective_thermal_coefficients(model), delta_T);
}

}  // namespace wva::noise
