#include "tinsim/spectra.hpp"

#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "tinsim/constants.hpp"

namespace tinsim {

using constants::k_B;
using constants::two_pi;

Susceptibility effective_susceptibility(const MechanicalMode& mode, double spring_shift,
                                        double opt_damping, const FrequencyGrid& grid) {
  grid.validate();
  const double omega_eff = mode.omega_m + spring_shift;
  const double gamma_eff = mode.gamma_m + opt_damping;
  if (!(omega_eff > 0.0)) throw std::domain_error("susceptibility: omega_m + spring_shift <= 0");
  if (!(gamma_eff > 0.0)) throw std::domain_error("susceptibility: total damping <= 0");

  Susceptibility chi{grid, std::vector<std::complex<double>>(grid.n_points)};
  const double inv_m = 1.0 / mode.mass;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double w = two_pi * grid.frequency(i);
    const std::complex<double> denom(omega_eff * omega_eff - w * w, w * gamma_eff);
    chi.values[i] = inv_m / denom;
  }
  return chi;
}

Psd thermal_displacement_psd(const MechanicalMode& mode, const Susceptibility& chi) {
  const FrequencyGrid& grid = chi.grid;
  const bool structural = mode.damping == DampingModel::structural;
  if (structural && !(grid.f_start > 0.0)) {
    throw std::invalid_argument("thermal_displacement_psd: structural damping needs f > 0");
  }
  const double force = 4.0 * k_B * mode.temperature * mode.mass * mode.gamma_m;
  Psd out(grid, PsdUnits::displacement);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    double s_f = force;
    if (structural) s_f *= mode.omega_m / (two_pi * grid.frequency(i));
    out.values[i] = std::norm(chi.values[i]) * s_f;
  }
  return out;
}

Psd thermal_displacement_psd(const MechanicalMode& mode, const FrequencyGrid& grid) {
  return thermal_displacement_psd(mode, effective_susceptibility(mode, 0.0, 0.0, grid));
}

Psd thermal_displacement_psd(const MechanicalMode& mode, const FrequencyGrid& grid,
                             Sampling sampling) {
  Psd out = thermal_displacement_psd(mode, grid);
  if (sampling == Sampling::point) return out;
  // Lorentzian approximation around the resonance, in Hz.
  const double f0 = mode.omega_m / constants::two_pi;
  const double hw = 0.5 * mode.gamma_m / constants::two_pi;
  const double h = 0.5 * grid.df;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double u = grid.frequency(i) - f0;
    const double point = hw / (u * u + hw * hw);
    const double mean = (std::atan((u + h) / hw) - std::atan((u - h) / hw)) / grid.df;
    if (point > 0.0) out.values[i] *= mean / point;
  }
  return out;
}

Psd multimode_frequency_noise(const SystemParams& system, const FrequencyGrid& grid,
                              Sampling sampling) {
  grid.validate();
  const double kappa = system.cavity.kappa;
  Psd out(grid, PsdUnits::relative);
  for (const auto& mode : system.modes) {
    if (mode.coupling_G == 0.0) continue;
    const double w = 2.0 * mode.coupling_G / kappa;
    const Psd sx = thermal_displacement_psd(mode, grid, sampling);
    for (std::size_t i = 0; i < grid.n_points; ++i) out.values[i] += w * w * sx.values[i];
  }
  return out;
}

Psd self_convolve(const Psd& s, const SelfConvolveOptions& opts) {
  s.validate();
  const double df = s.grid.df;
  if (s.grid.f_start < 0.0) throw std::invalid_argument("self_convolve: grid must start at f >= 0");

  // Extend the grid down towards zero; the remaining offset must be 0 or df/2
  // so that the mirrored two-sided grid stays uniform.
  const double q = s.grid.f_start / df;
  const bool zero_origin = std::abs(q - std::round(q)) < 1e-6;
  const bool half_origin = std::abs(q - std::floor(q) - 0.5) < 1e-6;
  if (!zero_origin && !half_origin) {
    throw std::invalid_argument("self_convolve: grid must be aligned to 0 or df/2");
  }
  const auto pad = static_cast<std::size_t>(zero_origin ? std::round(q) : std::floor(q));
  std::vector<double> one_sided(pad, 0.0);
  one_sided.insert(one_sided.end(), s.values.begin(), s.values.end());
  const std::size_t n = one_sided.size();

  double total = 0.0;
  double edge = 0.0;
  const std::size_t edge_start = n - std::max<std::size_t>(1, n / 10);
  for (std::size_t i = 0; i < n; ++i) {
    total += one_sided[i];
    if (i >= edge_start) edge += one_sided[i];
  }
  if (total > 0.0 && edge > opts.edge_power_limit * total) {
    throw std::domain_error("self_convolve: input has significant power near the grid edge");
  }

  // Two-sided density S2(f) = S1(|f|)/2 on the mirrored grid.
  std::vector<double> two_sided;
  two_sided.reserve(2 * n);
  for (std::size_t k = n; k-- > (zero_origin ? 1 : 0);) two_sided.push_back(0.5 * one_sided[k]);
  for (std::size_t k = 0; k < n; ++k) two_sided.push_back(0.5 * one_sided[k]);

  const std::vector<double> conv = detail::linear_convolve(two_sided, two_sided);
  // First sample of conv sits at twice the lowest mirrored frequency.
  const std::size_t m0 = zero_origin ? 2 * (n - 1) : 2 * n - 1;
  const double scale = kSelfConvolutionPrefactor * opts.correction * df;

  FrequencyGrid out_grid{0.0, df, conv.size() - m0};
  Psd out(out_grid, s.units, Sidedness::one_sided);
  for (std::size_t i = 0; i < out_grid.n_points; ++i) {
    out.values[i] = std::max(0.0, conv[m0 + i] * scale);
  }
  return out;
}

}  // namespace tinsim
