#include "tinsim/backaction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tinsim/constants.hpp"
#include "tinsim/transduction.hpp"

namespace tinsim {

using constants::hbar;
using constants::k_B;

double thermal_force_psd(const MechanicalMode& mode) {
  return 4.0 * k_B * mode.temperature * mode.mass * mode.gamma_m;
}

Psd qba_force_psd(const MechanicalMode& mode, const CavityParams& cavity,
                  const FrequencyGrid& grid) {
  if (cavity.n_cav == 0.0) return Psd(grid, PsdUnits::force);
  const double a = hbar * mode.coupling_G * cavity.n_cav;
  Psd out = shot_rin(cavity, grid).scaled(a * a);
  out.units = PsdUnits::force;
  return out;
}

double qba_to_thermal_ratio(const MechanicalMode& mode, const CavityParams& cavity) {
  const double nu = cavity.detuning_nu;
  return vacuum_cooperativity(mode, cavity) * cavity.n_cav / thermal_occupation(mode) /
         (1.0 + nu * nu);
}

Psd tinba_force_psd(const MechanicalMode& mode, const CavityParams& cavity, const Psd& s_nu2) {
  s_nu2.validate();
  const double a = hbar * mode.coupling_G * cavity.n_cav;
  Psd out = s_nu2.scaled(a * a * tin_prefactor(cavity.detuning_nu));
  out.units = PsdUnits::force;
  return out;
}

DynamicalBackaction dynamical_backaction(const MechanicalMode& mode, const CavityParams& cavity) {
  const double g0 = vacuum_coupling_rate(mode);
  const double g2 = g0 * g0 * cavity.n_cav;
  const double delta = cavity.detuning();
  const double w = mode.omega_m;
  const double hk2 = 0.25 * cavity.kappa * cavity.kappa;
  const double lower = hk2 + (delta - w) * (delta - w);
  const double upper = hk2 + (delta + w) * (delta + w);

  DynamicalBackaction out;
  out.spring_shift = g2 * ((delta - w) / lower + (delta + w) / upper);
  out.opt_damping = g2 * (cavity.kappa / upper - cavity.kappa / lower);
  out.stable = (w + out.spring_shift > 0.0) && (mode.gamma_m + out.opt_damping > 0.0);
  return out;
}

double bad_cavity_spring_shift(const MechanicalMode& mode, const CavityParams& cavity) {
  const double g0 = vacuum_coupling_rate(mode);
  const double nu = cavity.detuning_nu;
  const double q = 1.0 + nu * nu;
  return 4.0 * nu * g0 * g0 * cavity.resonant_photon_number() / (cavity.kappa * q * q);
}

ForceBudget make_force_budget(const MechanicalMode& mode, const CavityParams& cavity,
                              const FrequencyGrid& grid, const std::optional<Psd>& s_nu2) {
  grid.validate();
  ForceBudget b{grid, std::vector<double>(grid.n_points, thermal_force_psd(mode)),
                qba_force_psd(mode, cavity, grid).values,
                std::vector<double>(grid.n_points, 0.0)};
  if (s_nu2) {
    const Psd f = tinba_force_psd(mode, cavity, *s_nu2);
    for (std::size_t i = 0; i < grid.n_points; ++i) b.s_f_tin[i] = f.value_at(grid.frequency(i));
  }
  return b;
}

NoiseBudget displacement_psd(const Susceptibility& chi, const ForceBudget& budget) {
  if (!(chi.grid == budget.grid)) throw std::invalid_argument("displacement_psd: grids differ");
  const std::size_t n = budget.grid.n_points;
  auto filtered = [&](const std::vector<double>& f) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(chi.values[i]) * f[i];
    return out;
  };
  NoiseBudget out(budget.grid, PsdUnits::displacement);
  out.add("thermal", filtered(budget.s_f_thermal));
  out.add("qba", filtered(budget.s_f_qba));
  out.add("tinba", filtered(budget.s_f_tin));
  return out;
}

double cq_with_tin(const MechanicalMode& mode, const CavityParams& cavity, double s_rin_tin) {
  if (!(s_rin_tin >= 0.0)) throw std::invalid_argument("cq_with_tin: S_RIN^TIN must be >= 0");
  if (cavity.n_cav <= 0.0) return 0.0;
  const double nu = cavity.detuning_nu;
  const double c0 = vacuum_cooperativity(mode, cavity);
  const double nth = thermal_occupation(mode);
  const double tin_term = s_rin_tin / (8.0 / cavity.kappa) * cavity.n_cav;
  const double thermal_term = nth / (c0 * cavity.n_cav);
  return 1.0 / ((1.0 + nu * nu) * (tin_term + thermal_term));
}

double optimal_photon_number(const MechanicalMode& mode, const CavityParams& cavity,
                             double s_rin_tin) {
  if (s_rin_tin <= 0.0) return std::numeric_limits<double>::infinity();
  const double c0 = vacuum_cooperativity(mode, cavity);
  const double nth = thermal_occupation(mode);
  return std::sqrt((8.0 / cavity.kappa) * nth / (c0 * s_rin_tin));
}

double cq_upper_bound(const MechanicalMode& mode, const CavityParams& cavity, double s_rin_tin) {
  if (s_rin_tin <= 0.0) return std::numeric_limits<double>::infinity();
  const double nu = cavity.detuning_nu;
  const double szp = zero_point_detuning_psd(mode, cavity);
  return std::sqrt(2.0 * szp / thermal_occupation(mode) / s_rin_tin) / (1.0 + nu * nu);
}

CooperativityReport quantum_cooperativity(const MechanicalMode& mode, const CavityParams& cavity,
                                          double s_rin_tin) {
  if (!(s_rin_tin >= 0.0)) throw std::invalid_argument("quantum_cooperativity: S_RIN^TIN < 0");
  const double nu = cavity.detuning_nu;
  const double q = 1.0 + nu * nu;
  CooperativityReport r;
  r.c0 = vacuum_cooperativity(mode, cavity);
  r.n_th = thermal_occupation(mode);
  r.cq_ideal = r.c0 * cavity.n_cav / r.n_th;
  r.cq_with_tin = cq_with_tin(mode, cavity, s_rin_tin);
  r.cq_upper_bound = cq_upper_bound(mode, cavity, s_rin_tin);
  r.optimal_n_cav = optimal_photon_number(mode, cavity, s_rin_tin);
  r.conditions.photon_number = cavity.n_cav >= q * r.n_th / r.c0;
  r.conditions.quality_factor = mode.quality_factor() >= 2.0 * std::abs(nu) / q * r.n_th;
  r.conditions.tin_level =
      s_rin_tin <= 2.0 * zero_point_detuning_psd(mode, cavity) / r.n_th / (q * q);
  return r;
}

}  // namespace tinsim
