#pragma once

#include <numbers>

namespace tinsim::constants {

// CODATA 2018, fixed to 12 significant figures.
inline constexpr double hbar = 1.05457181765e-34;     // J s
inline constexpr double k_B = 1.380649e-23;           // J/K
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Ordinary frequency (Hz) to angular frequency (rad/s).
constexpr double to_angular(double f_hz) { return two_pi * f_hz; }
/// Angular frequency (rad/s) to ordinary frequency (Hz).
constexpr double to_hz(double omega) { return omega / two_pi; }

}  // namespace tinsim::constants
