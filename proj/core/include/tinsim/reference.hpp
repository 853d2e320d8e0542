#pragma once

#include "tinsim/phys.hpp"

namespace tinsim::reference {

// Room-temperature Si3N4 trampoline in a short Fabry-Perot cavity.
inline constexpr double kMass = 12e-12;              // kg
inline constexpr double kFrequencyHz = 41e3;
inline constexpr double kQuality = 7.8e6;
inline constexpr double kTemperature = 298.0;        // K
inline constexpr double kG0Hz = 1.5e3;               // g0 / 2 pi
inline constexpr double kKappaHz = 0.65e9;           // kappa / 2 pi
inline constexpr double kWavelength = 786e-9;        // m
inline constexpr double kEta = 0.40;
inline constexpr double kTinRin = 1e-11;             // 1/Hz, measured TIN near resonance
inline constexpr double kPhotonsPerMilliwatt = 1.7e6;

/// Fundamental mode with g0 = 2 pi x 1.5 kHz.
MechanicalMode trampoline_fundamental();
/// Resonantly probed cavity at the given intracavity photon number.
CavityParams trampoline_cavity(double n_cav = 0.0);

}  // namespace tinsim::reference
