#include "tinsim/phys.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tinsim/constants.hpp"
#include "tinsim/reference.hpp"

namespace tinsim {

using constants::hbar;
using constants::k_B;

void MechanicalMode::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("mode: mass must be > 0");
  if (!(omega_m > 0.0)) throw std::invalid_argument("mode: omega_m must be > 0");
  if (!(gamma_m > 0.0)) throw std::invalid_argument("mode: gamma_m must be > 0");
  if (!(gamma_m < omega_m)) throw std::invalid_argument("mode: must be underdamped (gamma_m < omega_m)");
  if (!(temperature >= 0.0)) throw std::invalid_argument("mode: temperature must be >= 0");
  if (!std::isfinite(coupling_G)) throw std::invalid_argument("mode: coupling_G must be finite");
}

double MechanicalMode::zero_point_motion() const {
  return std::sqrt(hbar / (2.0 * mass * omega_m));
}

void CavityParams::validate() const {
  if (!(kappa > 0.0)) throw std::invalid_argument("cavity: kappa must be > 0");
  if (!std::isfinite(detuning_nu)) throw std::invalid_argument("cavity: detuning must be finite");
  if (!(n_cav >= 0.0)) throw std::invalid_argument("cavity: n_cav must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("cavity: eta must lie in [0, 1]");
  if (!(omega_laser >= 0.0)) throw std::invalid_argument("cavity: omega_laser must be >= 0");
}

double CavityParams::kappa_from_finesse(double length_m, double finesse) {
  if (!(length_m > 0.0) || !(finesse > 0.0)) {
    throw std::invalid_argument("kappa_from_finesse: length and finesse must be > 0");
  }
  return constants::two_pi * (constants::c / (2.0 * length_m)) / finesse;
}

void SystemParams::validate() const {
  if (modes.empty()) throw std::invalid_argument("system: at least one mode is required");
  if (probe_index >= modes.size()) throw std::invalid_argument("system: probe_index out of range");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    try {
      modes[i].validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("mode " + std::to_string(i) + ": " + e.what());
    }
    if (modes[i].temperature != modes.front().temperature) {
      throw std::invalid_argument("system: all modes must share one bath temperature");
    }
  }
  cavity.validate();
}

double coupling_for_g0(double g0, double mass, double omega_m) {
  return g0 / std::sqrt(hbar / (2.0 * mass * omega_m));
}

double vacuum_coupling_rate(const MechanicalMode& mode) {
  return mode.coupling_G * mode.zero_point_motion();
}

double vacuum_cooperativity(const MechanicalMode& mode, const CavityParams& cavity) {
  const double g0 = vacuum_coupling_rate(mode);
  return 4.0 * g0 * g0 / (cavity.kappa * mode.gamma_m);
}

double vacuum_cooperativity_from_coupling(const MechanicalMode& mode,
                                          const CavityParams& cavity) {
  const double G = mode.coupling_G;
  return 2.0 * G * G * hbar / (mode.mass * mode.omega_m * mode.gamma_m * cavity.kappa);
}

double thermal_occupation(const MechanicalMode& mode) {
  return k_B * mode.temperature / (hbar * mode.omega_m);
}

double rms_thermal_displacement(const MechanicalMode& mode) {
  return std::sqrt(k_B * mode.temperature / (mode.mass * mode.omega_m * mode.omega_m));
}

double nonlinearity_parameter(const MechanicalMode& mode, const CavityParams& cavity) {
  return mode.coupling_G * rms_thermal_displacement(mode) / cavity.kappa;
}

double photon_number_from_power(double p_in, const CavityParams& cavity) {
  if (!(p_in >= 0.0)) throw std::invalid_argument("photon_number_from_power: P_in must be >= 0");
  if (!(cavity.omega_laser > 0.0)) {
    throw std::invalid_argument("photon_number_from_power: omega_laser must be > 0");
  }
  const double resonant = 4.0 * cavity.eta * p_in / (hbar * cavity.omega_laser * cavity.kappa);
  return resonant / (1.0 + cavity.detuning_nu * cavity.detuning_nu);
}

double power_for_photon_number(double n_cav, const CavityParams& cavity) {
  if (!(cavity.eta > 0.0)) throw std::invalid_argument("power_for_photon_number: eta must be > 0");
  const double resonant = n_cav * (1.0 + cavity.detuning_nu * cavity.detuning_nu);
  return resonant * hbar * cavity.omega_laser * cavity.kappa / (4.0 * cavity.eta);
}

double zero_point_displacement_psd(const MechanicalMode& mode) {
  const double x_zp = mode.zero_point_motion();
  return 4.0 * x_zp * x_zp / mode.gamma_m;
}

double zero_point_detuning_psd(const MechanicalMode& mode, const CavityParams& cavity) {
  const double g0 = vacuum_coupling_rate(mode);
  return (4.0 * g0 * g0 / mode.gamma_m) / (cavity.kappa * cavity.kappa);
}

namespace reference {

MechanicalMode trampoline_fundamental() {
  MechanicalMode m;
  m.mass = kMass;
  m.omega_m = constants::to_angular(kFrequencyHz);
  m.gamma_m = m.omega_m / kQuality;
  m.temperature = kTemperature;
  m.coupling_G = coupling_for_g0(constants::to_angular(kG0Hz), m.mass, m.omega_m);
  return m;
}

CavityParams trampoline_cavity(double n_cav) {
  CavityParams c;
  c.kappa = constants::to_angular(kKappaHz);
  c.detuning_nu = 0.0;
  c.n_cav = n_cav;
  c.omega_laser = constants::two_pi * constants::c / kWavelength;
  c.eta = kEta;
  return c;
}

}  // namespace reference

}  // namespace tinsim
