#include "tinsim/transduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tinsim/constants.hpp"
#include "tinsim/fit.hpp"

namespace tinsim {

DetuningExpansion expansion_at(double nu) {
  if (!std::isfinite(nu)) throw std::invalid_argument("expansion_at: nu must be finite");
  const double q = 1.0 + nu * nu;
  DetuningExpansion e;
  e.nu = nu;
  e.c1 = -2.0 * nu / q;
  // Factored so that the magic detuning 1/sqrt(3) gives an exact zero.
  const double r3 = std::sqrt(3.0) * nu;
  e.c2 = (r3 - 1.0) * (r3 + 1.0) / (q * q);
  return e;
}

double lorentzian_ratio(double nu, double dnu) {
  const double d = nu + dnu;
  return (1.0 + nu * nu) / (1.0 + d * d);
}

double magic_detuning() { return 1.0 / std::sqrt(3.0); }

double tin_prefactor(double nu) {
  const double c2 = expansion_at(nu).c2;
  return c2 * c2;
}

double shot_rin_level(const CavityParams& cavity) {
  if (!(cavity.n_cav > 0.0)) throw std::invalid_argument("shot_rin: n_cav must be > 0");
  const double nu = cavity.detuning_nu;
  return 8.0 / (cavity.n_cav * cavity.kappa) / (1.0 + nu * nu);
}

double shot_imprecision_psd(const MechanicalMode& mode, const CavityParams& cavity) {
  if (!(cavity.n_cav > 0.0) || !(cavity.eta > 0.0)) {
    throw std::invalid_argument("shot_imprecision_psd: n_cav and eta must be > 0");
  }
  return zero_point_displacement_psd(mode) /
         (8.0 * vacuum_cooperativity(mode, cavity) * cavity.n_cav * cavity.eta);
}

Psd shot_rin(const CavityParams& cavity, const FrequencyGrid& grid) {
  if (!(cavity.n_cav > 0.0)) throw std::invalid_argument("shot_rin: n_cav must be > 0");
  grid.validate();
  const double level = 8.0 / (cavity.n_cav * cavity.kappa);
  const double delta = cavity.detuning();
  Psd out(grid, PsdUnits::relative);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double u = (constants::two_pi * grid.frequency(i) + delta) / cavity.kappa;
    out.values[i] = level / (1.0 + 4.0 * u * u);
  }
  return out;
}

Psd tin_rin(const Psd& s_nu2, double nu) {
  Psd out = s_nu2.scaled(tin_prefactor(nu));
  out.units = PsdUnits::relative;
  return out;
}

std::vector<double> swept_transmission(const SystemParams& system, double sweep_rate,
                                       double thermal_amplitude, std::span<const double> nu,
                                       double phase) {
  if (sweep_rate == 0.0) throw std::invalid_argument("swept_transmission: sweep_rate must be != 0");
  const auto& mode = system.probe();
  const double depth = 2.0 * mode.coupling_G * thermal_amplitude / system.cavity.kappa;
  std::vector<double> out(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const double d = nu[i] + depth * std::cos(mode.omega_m * nu[i] / sweep_rate + phase);
    out[i] = 1.0 / (1.0 + d * d);
  }
  return out;
}

SweepFit fit_swept_transmission(std::span<const double> nu, std::span<const double> trace,
                                double omega_m, double sweep_rate, double depth_guess) {
  if (nu.size() != trace.size() || nu.size() < 8) {
    throw std::invalid_argument("fit_swept_transmission: need matching traces of >= 8 points");
  }
  auto residuals = [&](std::span<const double> p, std::span<double> r) {
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const double d = nu[i] + p[0] * std::cos(omega_m * nu[i] / sweep_rate + p[2]);
      r[i] = p[1] / (1.0 + d * d) - trace[i];
    }
  };

  double peak = 0.0;
  for (double v : trace) peak = std::max(peak, v);

  SweepFit best;
  double best_cost = INFINITY;
  constexpr int kPhaseSeeds = 16;
  for (int k = 0; k < kPhaseSeeds; ++k) {
    const double phase0 = constants::two_pi * k / kPhaseSeeds;
    for (double depth0 : {depth_guess, 0.25 * depth_guess}) {
      LmResult r = levenberg_marquardt(residuals, {depth0, peak, phase0}, nu.size());
      if (r.cost < best_cost) {
        best_cost = r.cost;
        best.depth = r.params[0];
        best.scale = r.params[1];
        best.phase = r.params[2];
      }
    }
  }
  if (best.depth < 0.0) {
    best.depth = -best.depth;
    best.phase += constants::pi;
  }
  best.phase = std::remainder(best.phase, constants::two_pi);
  best.coupling_ratio = 0.5 * best.depth;
  best.rms_residual = std::sqrt(2.0 * best_cost / static_cast<double>(nu.size()));
  return best;
}

}  // namespace tinsim
