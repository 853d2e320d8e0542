#pragma once

#include <optional>

#include "tinsim/budget.hpp"
#include "tinsim/grid.hpp"
#include "tinsim/phys.hpp"

namespace tinsim {

/// Viscous thermal force density 4 k_B T m Gamma_m (N^2/Hz, one-sided).
double thermal_force_psd(const MechanicalMode& mode);

/// Quantum backaction force (hbar G n_c)^2 S_RIN^shot.
Psd qba_force_psd(const MechanicalMode& mode, const CavityParams& cavity,
                  const FrequencyGrid& grid);

/// Closed-form QBA/thermal force ratio at omega << kappa: C0 n_c / n_th / (1 + nu^2).
double qba_to_thermal_ratio(const MechanicalMode& mode, const CavityParams& cavity);

/// TIN backaction force (hbar G n_c)^2 tin_prefactor(nu) S_nu^2.
Psd tinba_force_psd(const MechanicalMode& mode, const CavityParams& cavity, const Psd& s_nu2);

struct DynamicalBackaction {
  double spring_shift = 0.0;  // rad/s
  double opt_damping = 0.0;   // rad/s
  bool stable = true;         // omega_m + shift > 0 and total damping > 0
};

/// Optical spring and damping from the two-sideband response with
/// g^2 = g0^2 n_c and Delta = nu kappa / 2.
DynamicalBackaction dynamical_backaction(const MechanicalMode& mode, const CavityParams& cavity);

/// Bad-cavity spring shift 4 nu g0^2 n_c(nu=0) / (kappa (1 + nu^2)^2).
double bad_cavity_spring_shift(const MechanicalMode& mode, const CavityParams& cavity);

struct ForceBudget {
  FrequencyGrid grid;
  std::vector<double> s_f_thermal;
  std::vector<double> s_f_qba;
  std::vector<double> s_f_tin;
};

/// Assembles thermal, QBA (zero when n_cav = 0) and TINBA (when s_nu2 is given,
/// interpolated onto `grid`) force densities.
ForceBudget make_force_budget(const MechanicalMode& mode, const CavityParams& cavity,
                              const FrequencyGrid& grid, const std::optional<Psd>& s_nu2 = {});

/// Filters each force component through |chi|^2. Components are named
/// `thermal`, `qba`, `tinba`.
NoiseBudget displacement_psd(const Susceptibility& chi, const ForceBudget& budget);

struct ObservabilityConditions {
  bool photon_number = false;  // n_c >~ (1 + nu^2) n_th / C0
  bool quality_factor = false; // Q_m >~ 2 nu / (1 + nu^2) n_th
  bool tin_level = false;      // S_RIN^TIN <~ 2 S_nu^ZP / n_th / (1 + nu^2)^2
};

struct CooperativityReport {
  double c0 = 0.0;
  double n_th = 0.0;
  double cq_ideal = 0.0;         // C0 n_c / n_th
  double cq_with_tin = 0.0;
  double cq_upper_bound = 0.0;   // max over n_c at this nu and TIN level
  double optimal_n_cav = 0.0;    // argmax over n_c (infinite without TIN)
  ObservabilityConditions conditions;
};

/// Quantum cooperativity including TIN backaction:
/// C_q = 1/(1+nu^2) * (S_RIN^TIN n_c / (8/kappa) + n_th / (C0 n_c))^-1.
double cq_with_tin(const MechanicalMode& mode, const CavityParams& cavity, double s_rin_tin);

/// sqrt((8/kappa) n_th / (C0 S)), the photon number maximising cq_with_tin.
double optimal_photon_number(const MechanicalMode& mode, const CavityParams& cavity,
                             double s_rin_tin);

/// sqrt(2 S_nu^ZP / n_th / S) / (1 + nu^2); at nu = 0 the resonant bound.
double cq_upper_bound(const MechanicalMode& mode, const CavityParams& cavity, double s_rin_tin);

/// `s_rin_tin` is a band-representative TIN level near the mechanical resonance.
CooperativityReport quantum_cooperativity(const MechanicalMode& mode, const CavityParams& cavity,
                                          double s_rin_tin);

}  // namespace tinsim
