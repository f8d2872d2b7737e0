#include "wva/waveguide.hpp"


#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wva/constants.hpp"
#include "wva/error.hpp"
#include "quadrature.hpp"

namespace wva::waveguide {

void WaveguideGeometry::validate() const {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw InvalidArgument("waveguide half_width must be positive and finite");
    }
    if (!(cladding_index > 0.0)) {
        throw InvalidArgument("cladding_index must be positive");
    }
    if (!(core_index > cladding_index)) {
        throw NotGuiding("not guiding: core_index must exceed cladding_index");
    }
}

double WaveguideGeometry::numerical_aperture() const {
    return std::sqrt(core_index * core_index - cladding_index * cladding_index);
}

double WaveguideGeometry::v_number(double vacuum_wavenumber) const {
    return vacuum_wavenumber * half_width * numerical_aperture();
}

void ThermoOpticModel::validate() const {
    if (!std::isfinite(dn1_dT) || !std::isfinite(dn2_dT) || !std::isfinite(reference_temperature)) {
        throw InvalidArgument("thermo-optic coefficients must be finite");
    }
}

WaveguideGeometry ThermoOpticModel::at(const WaveguideGeometry& geometry, double temperature) const {
    WaveguideGeometry g = geometry;
    g.core_index += dn1_dT * (temperature - reference_temperature);
    g.cladding_index += dn2_dT * (temperature - reference_temperature);
    return g;
}

namespace {

void check_wavelength(double wavelength) {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw InvalidArgument("wavelength must be positive and finite");
    }
}

bool is_even(int m) { return m % 2 == 0; }

// Eq. K d tan(K d - m pi/2) = gamma d multiplied through by cos(.), which is positive on the bracket.
double smooth_residual(double u, double v, int m) {
    const double shift = u - m * pi / 2.0;
    return std::sqrt(std::max(v * v - u * u, 0.0)) * std::cos(shift) - u * std::sin(shift);
}

double solve_branch(double v, int m) {
    double lo = m * pi / 2.0;
    double hi = std::min((m + 1) * pi / 2.0, v);
    double f_lo = smooth_residual(lo, v, m);
    double f_hi = smooth_residual(hi, v, m);
    if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
        std::ostringstream msg;
        msg << "mode " << m << ": root not bracketed (f_lo=" << f_lo << ", f_hi=" << f_hi << ")";
        throw NumericalError(msg.str());
    }
    for (int i = 0; i < 30; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = smooth_residual(mid, v, m);
        if (f_mid > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    // Secant from the bracket ends; fall back to bisection when a step leaves the bracket.
    double a = lo, fa = f_lo, b = hi, fb = f_hi;
    for (int i = 0; i < 200; ++i) {
        double next = b - fb * (b - a) / (fb - fa);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double f_next = smooth_residual(next, v, m);
        if (f_next > 0.0) {
            lo = next;
        } else {
            hi = next;
        }
        a = b;
        fa = fb;
        b = next;
        fb = f_next;
        if (f_next == 0.0 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi ||
            std::abs(b - a) <= 2.0 * std::numeric_limits<double>::epsilon() * b) {
            return next;
        }
    }
    std::ostringstream msg;
    msg << "mode " << m << ": secant refinement did not converge, residual " << fb;
    throw NumericalError(msg.str());
}

double core_square_integral(const TEModeSolution& mode, double a, double b) {
    // Antiderivative of cos^2(Kx) or sin^2(Kx).
    const double k = mode.transverse_wavenumber;
    const double sign = is_even(mode.mode_index) ? 1.0 : -1.0;
    auto prim = [&](double x) { return 0.5 * x + sign * std::sin(2.0 * k * x) / (4.0 * k); };
    return mode.core_amplitude * mode.core_amplitude * (prim(b) - prim(a));
}

double tail_square_integral(double edge, double gamma, double near, double far) {
    // Integral of edge^2 exp(-2 gamma s) for s in [near, far], s >= 0 measured from the interface.
    const double e_far = std::isinf(far) ? 0.0 : std::exp(-2.0 * gamma * far);
    return edge * edge / (2.0 * gamma) * (std::exp(-2.0 * gamma * near) - e_far);
}

}  // namespace

int supported_mode_count(const WaveguideGeometry& geometry, double wavelength) {
    geometry.validate();
    check_wavelength(wavelength);
    const double v = geometry.v_number(2.0 * pi / wavelength);
    int count = static_cast<int>(std::ceil(v / (pi / 2.0)));
    // Exactly at V = m pi/2 the mode has gamma = 0 and is not guided.
    if (count < 1) count = 1;
    return count;
}

TEModeSolution solve_te_mode(const WaveguideGeometry& geometry, double wavelength, int mode_index) {
    const int count = supported_mode_count(geometry, wavelength);
    if (mode_index < 0 || mode_index >= count) {
        std::ostringstream msg;
        msg << "not guiding: mode " << mode_index << " is beyond cutoff (" << count
            << " guided modes)";
        throw NotGuiding(msg.str());
    }
    const double k0 = 2.0 * pi / wavelength;
    const double d = geometry.half_width;
    const double n1 = geometry.core_index;
    const double n2 = geometry.cladding_index;
    const double v = geometry.v_number(k0);
    const double u = solve_branch(v, mode_index);

    TEModeSolution s;
    s.mode_index = mode_index;
    s.vacuum_wavenumber = k0;
    s.transverse_wavenumber = u / d;
    s.decay_constant = std::sqrt(v * v - u * u) / d;
    s.propagation_constant = std::sqrt(n1 * n1 * k0 * k0 - s.transverse_wavenumber * s.transverse_wavenumber);
    if (!(s.propagation_constant > n2 * k0) || !(s.decay_constant > 0.0)) {
        std::ostringstream msg;
        msg << "not guiding: mode " << mode_index << " sits at cutoff";
        throw NotGuiding(msg.str());
    }
    s.effective_index = s.propagation_constant / k0;
    s.residual = std::abs(s.decay_constant * d - u * std::tan(u - mode_index * pi / 2.0));

    const double k = s.transverse_wavenumber;
    const double g = s.decay_constant;
    const bool even = is_even(mode_index);
    const double edge = even ? std::cos(k * d) : std::sin(k * d);
    const double core = even ? d + std::sin(2.0 * k * d) / (2.0 * k) : d - std::sin(2.0 * k * d) / (2.0 * k);
    const double tail = edge * edge / g;
    s.core_amplitude = 1.0 / std::sqrt(core + tail);
    s.edge_amplitude_plus = s.core_amplitude * edge;
    s.edge_amplitude_minus = even ? s.edge_amplitude_plus : -s.edge_amplitude_plus;
    return s;
}

std::vector<TEModeSolution> solve_te_modes(const WaveguideGeometry& geometry, double wavelength) {
    const int count = supported_mode_count(geometry, wavelength);
    std::vector<TEModeSolution> modes;
    modes.reserve(count);
    for (int m = 0; m < count; ++m) modes.push_back(solve_te_mode(geometry, wavelength, m));
    return modes;
}

ModePair solve_mode_pair(const WaveguideGeometry& geometry, double wavelength) {
    return ModePair{geometry, solve_te_mode(geometry, wavelength, 0), solve_te_mode(geometry, wavelength, 1)};
}

double evaluate_mode(const TEModeSolution& mode, const WaveguideGeometry& geometry, double x) {
    const double d = geometry.half_width;
    if (x > d) return mode.edge_amplitude_plus * std::exp(-mode.decay_constant * (x - d));
    if (x < -d) return mode.edge_amplitude_minus * std::exp(mode.decay_constant * (x + d));
    const double kx = mode.transverse_wavenumber * x;
    return mode.core_amplitude * (is_even(mode.mode_index) ? std::cos(kx) : std::sin(kx));
}

double mode_power(const TEModeSolution& mode, const WaveguideGeometry& geometry, double a, double b) {
    if (b < a) return -mode_power(mode, geometry, b, a);
    const double d = geometry.half_width;
    const double g = mode.decay_constant;
    double total = 0.0;
    if (a < -d) {
        const double far = -a - d;
        const double near = std::max(-b - d, 0.0);
        total += tail_square_integral(mode.edge_amplitude_minus, g, near, far);
    }
    const double ca = std::max(a, -d), cb = std::min(b, d);
    if (cb > ca) total += core_square_integral(mode, ca, cb);
    if (b > d) {
        const double near = std::max(a - d, 0.0);
        const double far = b - d;
        total += tail_square_integral(mode.edge_amplitude_plus, g, near, far);
    }
    return total;
}

double mode_overlap(const TEModeSolution& mode_a, const TEModeSolution& mode_b,
                    const WaveguideGeometry& geometry, double a, double b) {
    if (b < a) return -mode_overlap(mode_a, mode_b, geometry, b, a);
    const double d = geometry.half_width;
    auto f = [&](double x) { return evaluate_mode(mode_a, geometry, x) * evaluate_mode(mode_b, geometry, x); };
    // Cladding tails are products of exponentials and integrate exactly.
    const double g = mode_a.decay_constant + mode_b.decay_constant;
    auto tail = [g](double amplitude, double near, double far) {
        return amplitude * (std::exp(-g * near) - (std::isinf(far) ? 0.0 : std::exp(-g * far))) / g;
    };
    double total = 0.0;
    if (b > d) total += tail(mode_a.edge_amplitude_plus * mode_b.edge_amplitude_plus, std::max(a, d) - d, b - d);
    if (a < -d) total += tail(mode_a.edge_amplitude_minus * mode_b.edge_amplitude_minus, -d - std::min(b, -d), -d - a);
    const double lo = std::max(a, -d);
    const double hi = std::min(b, d);
    if (hi > lo) total += detail::integrate(f, lo, hi);
    return total;
}

double mode_overlap_alpha(const TEModeSolution& mode0, const TEModeSolution& mode1,
                          const WaveguideGeometry& geometry) {
    const double d = geometry.half_width;
    return mode_overlap(mode0, mode1, geometry, -d, 0.0) - mode_overlap(mode0, mode1, geometry, 0.0, d);
}

double propagation_constant(const WaveguideGeometry& geometry, double omega, int mode_index) {
    if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
    return solve_te_mode(geometry, omega_to_wavelength(omega), mode_index).propagation_constant;
}

double native_group_velocity(const WaveguideGeometry& geometry, double omega, int mode_index,
                             double relative_step) {
    if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
    const double h = relative_step * omega;
    double beta_plus = 0.0, beta_minus = 0.0;
    try {
        beta_plus = propagation_constant(geometry, omega + h, mode_index);
        beta_minus = propagation_constant(geometry, omega - h, mode_index);
    } catch (const NotGuiding& e) {
        throw NotGuiding(std::string("group velocity stencil crosses mode cutoff: ") + e.what());
    }
    return 2.0 * h / (beta_plus - beta_minus);
}

SlopeFit thermo_optic_fit(const WaveguideGeometry& geometry, const ThermoOpticModel& model,
                          double wavelength, int mode_index, std::pair<double, double> t_range,
                          int points) {
    model.validate();
    if (points < 2 || !(t_range.second > t_range.first)) {
        throw InvalidArgument("temperature sweep needs at least 2 points over an increasing range");
    }
    SlopeFit fit;
    for (int i = 0; i < points; ++i) {
        const double t = t_range.first + (t_range.second - t_range.first) * i / (points - 1);
        const WaveguideGeometry g = model.at(geometry, t);
        try {
            fit.effective_indices.push_back(solve_te_mode(g, wavelength, mode_index).effective_index);
        } catch (const NotGuiding& e) {
            std::ostringstream msg;
            msg << "mode cutoff crossed at T = " << t << " C: " << e.what();
            throw NotGuiding(msg.str());
        }
        fit.temperatures.push_back(t);
    }
    double mt = 0.0, mn = 0.0;
    for (int i = 0; i < points; ++i) {
        mt += fit.temperatures[i];
        mn += fit.effective_indices[i];
    }
    mt /= points;
    mn /= points;
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < points; ++i) {
        sxy += (fit.temperatures[i] - mt) * (fit.effective_indices[i] - mn);
        sxx += (fit.temperatures[i] - mt) * (fit.temperatures[i] - mt);
    }
    fit.slope = sxy / sxx;
    fit.intercept = mn - fit.slope * mt;
    return fit;
}

double thermo_optic_slope(const WaveguideGeometry& geometry, const ThermoOpticModel& model,
                          double wavelength, int mode_index, std::pair<double, double> t_range) {
    return thermo_optic_fit(geometry, model, wavelength, mode_index, t_range).slope;
}

}  // namespace wva::waveguide
