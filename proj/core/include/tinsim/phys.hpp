#pragma once

#include <cstddef>
#include <vector>

namespace tinsim {

enum class DampingModel { viscous, structural };

/// One flexural mode of the mechanical resonator. Frequencies are angular.
struct MechanicalMode {
  double mass = 0.0;        // kg (effective)
  double omega_m = 0.0;     // rad/s
  double gamma_m = 0.0;     // rad/s, energy damping rate
  double coupling_G = 0.0;  // rad/s per m, d(omega_c)/dx
  double temperature = 0.0; // K
  DampingModel damping = DampingModel::viscous;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  double quality_factor() const { return omega_m / gamma_m; }
  /// sqrt(hbar / (2 m omega_m))
  double zero_point_motion() const;

  bool operator==(const MechanicalMode&) const = default;
};

/// Optical cavity state. `n_cav` is the mean intracavity photon number at
/// the operating detuning; the resonant value is n_cav * (1 + nu^2).
struct CavityParams {
  double kappa = 0.0;        // rad/s, energy decay rate
  double detuning_nu = 0.0;  // 2 Delta / kappa
  double n_cav = 0.0;
  double omega_laser = 0.0;  // rad/s
  double eta = 1.0;          // input coupling / mode matching, [0, 1]

  void validate() const;

  double detuning() const { return 0.5 * detuning_nu * kappa; }
  double resonant_photon_number() const {
    return n_cav * (1.0 + detuning_nu * detuning_nu);
  }

  /// kappa = 2 pi (c / 2L) / F
  static double kappa_from_finesse(double length_m, double finesse);

  bool operator==(const CavityParams&) const = default;
};

struct SystemParams {
  std::vector<MechanicalMode> modes;
  CavityParams cavity;
  std::size_t probe_index = 0;

  void validate() const;
  const MechanicalMode& probe() const { return modes.at(probe_index); }

  bool operator==(const SystemParams&) const = default;
};

/// Coupling G that yields vacuum coupling rate g0 for the given mass and frequency.
double coupling_for_g0(double g0, double mass, double omega_m);

/// g0 = G x_ZP
double vacuum_coupling_rate(const MechanicalMode& mode);

/// C0 = 4 g0^2 / (kappa Gamma_m)
double vacuum_cooperativity(const MechanicalMode& mode, const CavityParams& cavity);
/// C0 = 2 G^2 hbar / (m omega_m Gamma_m kappa); algebraically identical to the above.
double vacuum_cooperativity_from_coupling(const MechanicalMode& mode,
                                          const CavityParams& cavity);

/// n_th = k_B T / (hbar omega_m)
double thermal_occupation(const MechanicalMode& mode);

/// x_th = sqrt(k_B T / (m omega_m^2))
double rms_thermal_displacement(const MechanicalMode& mode);

/// Dimensionless transduction nonlinearity G x_th / kappa.
double nonlinearity_parameter(const MechanicalMode& mode, const CavityParams& cavity);

/// Intracavity photon number at the cavity's detuning for input power p_in (W):
/// 4 eta P / (hbar omega_laser kappa) / (1 + nu^2).
double photon_number_from_power(double p_in, const CavityParams& cavity);
/// Inverse of photon_number_from_power.
double power_for_photon_number(double n_cav, const CavityParams& cavity);

/// One-sided zero-point displacement density 4 x_ZP^2 / Gamma_m (m^2/Hz).
double zero_point_displacement_psd(const MechanicalMode& mode);

/// (4 g0^2 / Gamma_m) / kappa^2, the zero-point detuning density (1/Hz).
double zero_point_detuning_psd(const MechanicalMode& mode, const CavityParams& cavity);

}  // namespace tinsim
