#pragma once

#include <numbers>

namespace wva {

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;   // m/s
inline constexpr double planck = 6.62607015e-34;        // J s

inline constexpr double wavelength_to_omega(double wavelength) {
    return 2.0 * pi * speed_of_light / wavelength;
}

inline constexpr double omega_to_wavelength(double omega) {
    return 2.0 * pi * speed_of_light / omega;
}

}  // namespace wva
