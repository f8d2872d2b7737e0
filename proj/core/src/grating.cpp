#include "wva/grating.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "wva/constants.hpp"
#include "wva/error.hpp"

namespace wva::grating {

double HostDispersion::beta(double omega) const {
    return reference_beta + (omega - reference_omega) / group_velocity;
}

double HostDispersion::mean_index() const { return reference_beta * speed_of_light / reference_omega; }

void HostDispersion::validate() const {
    if (!(reference_omega > 0.0) || !(reference_beta > 0.0) || !(group_velocity > 0.0)) {
        throw InvalidArgument("host dispersion needs positive reference omega, beta and group velocity");
    }
}

HostDispersion HostDispersion::dispersionless(double index, double reference_omega) {
    return HostDispersion{reference_omega, index * reference_omega / speed_of_light, speed_of_light / index};
}

HostDispersion HostDispersion::from_waveguide(const waveguide::WaveguideGeometry& geometry, double wavelength) {
    const double omega = wavelength_to_omega(wavelength);
    return HostDispersion{omega, waveguide::propagation_constant(geometry, omega, 0),
                          waveguide::native_group_velocity(geometry, omega, 0)};
}

void GratingSpec::validate() const {
    host.validate();
    if (!(length > 0.0)) throw InvalidArgument("grating length must be positive");
    if (!(mean_index > 0.0)) throw InvalidArgument("grating mean_index must be positive");
    if (components.empty() || components.size() > 2) {
        throw InvalidArgument("grating needs one or two index components");
    }
    for (const auto& c : components) {
        if (!(c.period > 0.0)) throw InvalidArgument("grating period must be positive");
        if (!(c.index_amplitude >= 0.0) || !(c.index_amplitude < 0.1 * mean_index)) {
            throw InvalidArgument("grating index amplitude must satisfy 0 <= n_a << mean index");
        }
    }
}

double GratingSpec::bragg_wavenumber(std::size_t i) const { return pi / components.at(i).period; }

double GratingSpec::bragg_wavelength(std::size_t i) const { return 2.0 * mean_index * components.at(i).period; }

double GratingSpec::coupling(std::size_t i) const {
    return pi * components.at(i).index_amplitude / bragg_wavelength(i);
}

double GratingSpec::detuning(double omega, std::size_t i) const { return host.beta(omega) - bragg_wavenumber(i); }

double GratingSpec::shortest_period() const {
    double p = std::numeric_limits<double>::infinity();
    for (const auto& c : components) p = std::min(p, c.period);
    return p;
}

double GratingSpec::index(double z) const {
    double n = mean_index;
    for (const auto& c : components) n += c.index_amplitude * std::cos(2.0 * pi * z / c.period);
    return n;
}

double period_for_center(const HostDispersion& host, double center_wavelength) {
    if (!(center_wavelength > 0.0)) throw InvalidArgument("center wavelength must be positive");
    return pi / host.beta(wavelength_to_omega(center_wavelength));
}

GratingSpec single_grating(const HostDispersion& host, double center_wavelength, double index_amplitude,
                           double length) {
    return multi_grating(host, {center_wavelength}, {index_amplitude}, length);
}

GratingSpec multi_grating(const HostDispersion& host, const std::vector<double>& center_wavelengths,
                          const std::vector<double>& index_amplitudes, double length) {
    if (center_wavelengths.size() != index_amplitudes.size()) {
        throw InvalidArgument("one index amplitude is required per band-gap center");
    }
    GratingSpec spec;
    spec.host = host;
    spec.mean_index = host.mean_index();
    spec.length = length;
    for (std::size_t i = 0; i < center_wavelengths.size(); ++i) {
        spec.components.push_back({period_for_center(host, center_wavelengths[i]), index_amplitudes[i]});
    }
    spec.validate();
    return spec;
}

InfiniteResponse infinite_grating_response(const GratingSpec& spec, double omega) {
    spec.validate();
    if (spec.components.size() != 1) throw InvalidArgument("infinite-grating response needs a single component");
    const double delta = spec.detuning(omega);
    const double kappa = spec.coupling();
    InfiniteResponse out;
    out.detuning = delta;
    const double q2 = delta * delta - kappa * kappa;
    if (q2 >= 0.0) {
        out.q = complex(std::copysign(std::sqrt(q2), delta), 0.0);
        const double vg = spec.host.group_velocity;
        out.group_velocity = delta == 0.0 ? vg : vg * std::sqrt(std::max(0.0, 1.0 - kappa * kappa / (delta * delta)));
    } else {
        out.q = complex(0.0, std::sqrt(-q2));
    }
    return out;
}

namespace {

// cos(qL) and sin(qL)/q for real q^2 of either sign, continued analytically into the gap.
std::pair<double, double> propagation_terms(double q2, double length) {
    const double aq = std::sqrt(std::abs(q2));
    const double x = aq * length;
    if (x < 1e-4) {
        const double s = q2 * length * length;
        return {1.0 - s / 2.0 + s * s / 24.0, length * (1.0 - s / 6.0 + s * s / 120.0)};
    }
    if (q2 > 0.0) return {std::cos(x), std::sin(x) / aq};
    return {std::cosh(x), std::sinh(x) / aq};
}

}  // namespace

Matrix2 fundamental_matrix(const GratingSpec& spec, double omega) {
    if (spec.components.size() != 1) {
        throw InvalidArgument("fundamental matrix needs a single sinusoidal component; use the thin-layer method");
    }
    const double delta = spec.detuning(omega);
    const double kappa = spec.coupling();
    const double length = spec.length;
    const auto [c, s] = propagation_terms(delta * delta - kappa * kappa, length);
    const double bl = spec.bragg_wavenumber() * length;
    Matrix2 f;
    f.m11 = complex(c, delta * s) * std::polar(1.0, bl);
    f.m21 = complex(0.0, -kappa * s) * std::polar(1.0, bl - pi / 2.0);
    f.m22 = std::conj(f.m11);
    f.m12 = std::conj(f.m21);
    return f;
}

IndexProfile profile_from_spec(const GratingSpec& spec) {
    spec.validate();
    IndexProfile p;
    p.index = [spec](double z) { return spec.index(z); };
    p.length = spec.length;
    p.mean_index = spec.mean_index;
    p.shortest_period = spec.shortest_period();
    p.host = spec.host;
    return p;
}

IndexProfile reversed_profile(const IndexProfile& profile) {
    IndexProfile p = profile;
    auto f = profile.index;
    const double length = profile.length;
    p.index = [f, length](double z) { return f(length - z); };
    return p;
}

namespace {

void validate_profile(const IndexProfile& profile) {
    profile.host.validate();
    if (!profile.index) throw InvalidArgument("index profile callable is empty");
    if (!(profile.length > 0.0) || !(profile.shortest_period > 0.0) || !(profile.mean_index > 0.0)) {
        throw InvalidArgument("index profile needs positive length, shortest period and mean index");
    }
}

std::size_t segments_at(const IndexProfile& profile, double per_period) {
    const double n = per_period * profile.length / profile.shortest_period;
    return static_cast<std::size_t>(std::ceil(n * (1.0 - 1e-12)));
}

// Midpoint-sampled layers; reused for every frequency.
struct LayerStack {
    std::vector<double> indices;
    double segment_length = 0.0;
    double mean_index = 0.0;
    HostDispersion host;

    LayerStack(const IndexProfile& profile, std::size_t segment_count) {
        validate_profile(profile);
        const std::size_t floor = minimum_segment_count(profile);
        if (segment_count < floor) {
            std::ostringstream msg;
            msg << "segment_count " << segment_count << " is below the resolution floor; minimum is " << floor
                << " (" << min_segments_per_period << " per shortest period)";
            throw InvalidArgument(msg.str());
        }
        segment_length = profile.length / static_cast<double>(segment_count);
        mean_index = profile.mean_index;
        host = profile.host;
        indices.resize(segment_count);
        for (std::size_t p = 0; p < segment_count; ++p) {
            indices[p] = profile.index((static_cast<double>(p) + 0.5) * segment_length);
            if (!(indices[p] > 0.0)) throw InvalidArgument("index profile must stay positive");
        }
    }

    // F applied to the column (v1, v2), layers taken right to left.
    std::pair<complex, complex> apply(double omega, complex v1, complex v2) const {
        const std::size_t n = indices.size();
        const double phase_scale = host.beta(omega) * segment_length / mean_index;
        auto interface = [&](double nl, double nr) {
            const double s = (nl + nr) / (2.0 * nr);
            const double d = (nl - nr) / (2.0 * nr);
            const complex a1 = s * v1 + d * v2;
            const complex a2 = d * v1 + s * v2;
            v1 = a1;
            v2 = a2;
        };
        interface(indices[n - 1], mean_index);
        for (std::size_t p = n; p-- > 0;) {
            const complex e = std::polar(1.0, -phase_scale * indices[p]);
            v1 *= e;
            v2 *= std::conj(e);
            interface(p == 0 ? mean_index : indices[p - 1], indices[p]);
        }
        return {v1, v2};
    }

    Matrix2 matrix(double omega) const {
        const auto [a11, a21] = apply(omega, 1.0, 0.0);
        const auto [a12, a22] = apply(omega, 0.0, 1.0);
        return Matrix2{a11, a12, a21, a22};
    }
};

template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += threads) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

double wrap(double x, double half_range) {
    const double full = 2.0 * half_range;
    double y = std::fmod(x + half_range, full);
    if (y <= 0.0) y += full;
    return y - half_range;
}

// Second-order finite differences on a possibly non-uniform grid.
std::vector<double> gradient(const std::vector<double>& y, const std::vector<double>& x) {
    const std::size_t n = y.size();
    std::vector<double> g(n, 0.0);
    if (n < 2) return g;
    g[0] = (y[1] - y[0]) / (x[1] - x[0]);
    g[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = x[i] - x[i - 1];
        const double h2 = x[i + 1] - x[i];
        g[i] = (h1 * h1 * y[i + 1] - h2 * h2 * y[i - 1] + (h2 * h2 - h1 * h1) * y[i]) / (h1 * h2 * (h1 + h2));
    }
    return g;
}

void check_grid(const std::vector<double>& omega) {
    if (omega.empty()) return;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!(omega[i] > 0.0) || !std::isfinite(omega[i])) throw InvalidArgument("omega grid must be positive");
        if (i > 0 && !(omega[i] > omega[i - 1])) throw InvalidArgument("omega grid must be strictly ascending");
    }
}

void finish_response(GratingResponse& out, const HostDispersion& host, double length) {
    const std::size_t n = out.omega.size();
    out.transmission.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.transmission[i] = std::norm(out.t[i]);
    if (n == 0) return;

    // Transmitted phase: strip the host phase beta L, unwrap the residual, add it back.
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) {
        residual[i] = std::arg(out.t[i] * std::polar(1.0, -host.beta(out.omega[i]) * length));
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double step = wrap(residual[i] - residual[i - 1], pi);
        if (std::abs(step) > pi / 2.0) {
            std::ostringstream msg;
            msg << "grid too coarse: transmitted phase changes by " << step << " rad between omega = "
                << out.omega[i - 1] << " and " << out.omega[i];
            throw GridTooCoarse(msg.str());
        }
        residual[i] = residual[i - 1] + step;
    }
    out.transmitted_phase.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.transmitted_phase[i] = host.beta(out.omega[i]) * length + residual[i];

    out.effective_index.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.effective_index[i] = out.transmitted_phase[i] * speed_of_light / (out.omega[i] * length);
    }

    const double native_delay = length / host.group_velocity;
    out.group_velocity.assign(n, host.group_velocity);
    out.vg_ratio_transmitted.assign(n, 1.0);
    out.vg_ratio_reflected.assign(n, std::numeric_limits<double>::quiet_NaN());
    if (n < 2) return;
    const auto delay_t = gradient(out.transmitted_phase, out.omega);
    for (std::size_t i = 0; i < n; ++i) {
        out.group_velocity[i] = length / delay_t[i];
        out.vg_ratio_transmitted[i] = native_delay / delay_t[i];
    }

    // Reflection zeros flip the sign of a real envelope, so the reflected phase is unwrapped modulo pi.
    bool has_zero = false;
    for (const auto& r : out.r) has_zero = has_zero || std::abs(r) == 0.0;
    if (has_zero) return;
    std::vector<double> phase_r(n);
    for (std::size_t i = 0; i < n; ++i) {
        phase_r[i] = std::arg(out.r[i] * std::polar(1.0, -host.beta(out.omega[i]) * length));
    }
    for (std::size_t i = 1; i < n; ++i) phase_r[i] = phase_r[i - 1] + wrap(phase_r[i] - phase_r[i - 1], pi / 2.0);
    for (std::size_t i = 0; i < n; ++i) phase_r[i] += host.beta(out.omega[i]) * length;
    const auto delay_r = gradient(phase_r, out.omega);
    for (std::size_t i = 0; i < n; ++i) out.vg_ratio_reflected[i] = native_delay / delay_r[i];
}

}  // namespace

std::size_t minimum_segment_count(const IndexProfile& profile) {
    validate_profile(profile);
    return segments_at(profile, min_segments_per_period);
}

std::size_t segment_count_for(const IndexProfile& profile, double segments_per_period) {
    validate_profile(profile);
    return std::max(segments_at(profile, segments_per_period), minimum_segment_count(profile));
}

Matrix2 thin_layer_matrix(const IndexProfile& profile, double omega, std::size_t segment_count) {
    const LayerStack stack(profile, segment_count);
    return stack.matrix(omega);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return g;
}

GratingResponse profile_spectrum(const IndexProfile& profile, const std::vector<double>& omega_grid,
                                 const SpectrumOptions& options) {
    check_grid(omega_grid);
    if (options.segments_per_period < min_segments_per_period) {
        std::ostringstream msg;
        msg << "segments_per_period " << options.segments_per_period << " is below the resolution floor of "
            << min_segments_per_period;
        throw InvalidArgument(msg.str());
    }
    const LayerStack stack(profile, segment_count_for(profile, options.segments_per_period));
    GratingResponse out;
    out.omega = omega_grid;
    out.r.resize(omega_grid.size());
    out.t.resize(omega_grid.size());
    parallel_for(omega_grid.size(), options.threads, [&](std::size_t i) {
        const auto [v1, v2] = stack.apply(omega_grid[i], 1.0, 0.0);
        out.t[i] = 1.0 / v1;
        out.r[i] = v2 / v1;
    });
    finish_response(out, profile.host, profile.length);
    return out;
}

GratingResponse grating_spectrum(const GratingSpec& spec, const std::vector<double>& omega_grid,
                                 const SpectrumOptions& options) {
    spec.validate();
    if (options.method == SpectrumMethod::thin_layer) {
        return profile_spectrum(profile_from_spec(spec), omega_grid, options);
    }
    if (spec.components.size() != 1) {
        throw InvalidArgument("multi-period gratings require the thin-layer method");
    }
    check_grid(omega_grid);
    GratingResponse out;
    out.omega = omega_grid;
    out.r.resize(omega_grid.size());
    out.t.resize(omega_grid.size());
    // Conjugate into the exp(+i beta z) convention shared with the thin-layer method.
    parallel_for(omega_grid.size(), options.threads, [&](std::size_t i) {
        const Matrix2 f = fundamental_matrix(spec, omega_grid[i]);
        out.r[i] = std::conj(f.reflection());
        out.t[i] = std::conj(f.transmission());
    });
    finish_response(out, spec.host, spec.length);
    return out;
}

std::pair<double, double> grating_phase_dispersion(const GratingSpec& spec, double omega,
                                                   const SpectrumOptions& options) {
    spec.validate();
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        if (std::abs(spec.detuning(omega, i)) < spec.coupling(i)) {
            std::ostringstream msg;
            msg << "omega = " << omega << " rad/s lies inside band gap " << i
                << "; the arm phase is defined only for propagating light";
            throw InvalidArgument(msg.str());
        }
    }
    const double h = 1e-7 * omega;
    const auto response = grating_spectrum(spec, {omega - h, omega, omega + h}, options);
    const double bulk = spec.host.beta(omega) * spec.length;
    const double phi = response.transmitted_phase[1] - bulk;
    const double slope = (response.transmitted_phase[2] - response.transmitted_phase[0]) / (2.0 * h) -
                         spec.length / spec.host.group_velocity;
    return {phi, slope};
}

double excess_dispersion(double length, double native_group_velocity, double grating_group_velocity) {
    if (!(grating_group_velocity > 0.0) || !(native_group_velocity > 0.0)) {
        throw InvalidArgument("group velocities must be positive");
    }
    return length / native_group_velocity * (native_group_velocity / grating_group_velocity - 1.0);
}

}  // namespace wva::grating
