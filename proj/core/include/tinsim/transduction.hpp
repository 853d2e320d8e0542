#pragma once

#include <span>
#include <vector>

#include "tinsim/grid.hpp"
#include "tinsim/phys.hpp"

namespace tinsim {

/// Second-order expansion of the normalised Lorentzian response
/// n_c(nu + dnu) / n_c(nu) = c0 + c1 dnu + c2 dnu^2 + O(dnu^3).
struct DetuningExpansion {
  double nu = 0.0;
  double c0 = 1.0;
  double c1 = 0.0;  // -2 nu / (1 + nu^2)
  double c2 = 0.0;  // (3 nu^2 - 1) / (1 + nu^2)^2

  double evaluate(double dnu) const { return c0 + dnu * (c1 + dnu * c2); }
};

DetuningExpansion expansion_at(double nu);

/// Exact normalised response (1 + nu^2) / (1 + (nu + dnu)^2).
double lorentzian_ratio(double nu, double dnu);

/// Relative detuning at which the quadratic coefficient vanishes, 1/sqrt(3).
double magic_detuning();

/// Scale factor c2^2 = (3 nu^2 - 1)^2 / (1 + nu^2)^4 mapping S_nu^2 onto RIN.
double tin_prefactor(double nu);

/// Shot-noise RIN, 8/(n_c kappa) / (1 + 4((omega + Delta)/kappa)^2), one-sided 1/Hz.
/// The (omega + Delta) argument follows the printed single-sideband form;
/// symmetrised treatments differ only for omega comparable to kappa.
/// Throws std::invalid_argument when n_cav is zero.
Psd shot_rin(const CavityParams& cavity, const FrequencyGrid& grid);

/// Low-frequency (omega << kappa) shot RIN level 8 / (n_c kappa (1 + nu^2)).
double shot_rin_level(const CavityParams& cavity);

/// Shot-noise displacement imprecision of the phase readout,
/// S_x^ZP / (8 C0 n_c eta), one-sided m^2/Hz.
double shot_imprecision_psd(const MechanicalMode& mode, const CavityParams& cavity);

/// TIN in the intensity: tin_prefactor(nu) * S_nu^2.
Psd tin_rin(const Psd& s_nu2, double nu);

/// Transmitted power during a linear detuning sweep with the probe mode
/// oscillating at amplitude `thermal_amplitude`:
/// P(nu) = 1 / (1 + (nu + A cos(omega_m nu / sweep_rate + phase))^2), A = 2 G x / kappa.
std::vector<double> swept_transmission(const SystemParams& system, double sweep_rate,
                                       double thermal_amplitude, std::span<const double> nu,
                                       double phase = 0.0);

struct SweepFit {
  double depth = 0.0;       // A
  double scale = 1.0;       // peak transmitted power
  double phase = 0.0;
  double coupling_ratio = 0.0;  // G x / kappa = A / 2
  double rms_residual = 0.0;
};

/// Fits the sweep model to a trace. `depth_guess` seeds the modulation depth;
/// the phase is seeded from a coarse scan.
SweepFit fit_swept_transmission(std::span<const double> nu, std::span<const double> trace,
                                double omega_m, double sweep_rate, double depth_guess);

}  // namespace tinsim
