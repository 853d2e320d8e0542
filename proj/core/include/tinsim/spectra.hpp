#pragma once

#include "tinsim/grid.hpp"
#include "tinsim/phys.hpp"

namespace tinsim {

/// chi_eff = (1/m) / ((omega_m + spring_shift)^2 - omega^2 + i omega (gamma_m + opt_damping))
/// Throws std::domain_error for an unstable effective oscillator.
Susceptibility effective_susceptibility(const MechanicalMode& mode, double spring_shift,
                                        double opt_damping, const FrequencyGrid& grid);

/// Thermally driven displacement, |chi|^2 times the force density of the
/// mode's damping model (viscous: 4 k_B T m gamma; structural: additionally
/// omega_m / omega). Structural damping rejects grids that contain f <= 0.
Psd thermal_displacement_psd(const MechanicalMode& mode, const Susceptibility& chi);

/// Convenience: thermal displacement with no optical spring or damping.
Psd thermal_displacement_psd(const MechanicalMode& mode, const FrequencyGrid& grid);

enum class Sampling {
  point,
  /// Each bin carries its bin-averaged density. Near a resonance the point
  /// value is rescaled by the exact bin integral of the matching Lorentzian,
  /// so peaks narrower than df keep their variance.
  bin_average,
};

/// Thermal displacement sampled per `sampling`.
Psd thermal_displacement_psd(const MechanicalMode& mode, const FrequencyGrid& grid,
                             Sampling sampling);

/// Cavity frequency noise in relative-detuning units,
/// S_nu = sum_n (2 G_n / kappa)^2 S_x^n, one-sided.
Psd multimode_frequency_noise(const SystemParams& system, const FrequencyGrid& grid,
                              Sampling sampling = Sampling::point);

/// Prefactor of the Gaussian self-convolution as printed for double-sided
/// input spectra; with a double-sided input it yields the one-sided density
/// of the squared process.
inline constexpr double kSelfConvolutionPrefactor = 4.0;

struct SelfConvolveOptions {
  /// Multiplies the printed prefactor; pinned against the time-domain oracle.
  double correction = 1.0;
  /// Fraction of input power allowed in the top 10% of the grid.
  double edge_power_limit = 1e-3;
};

/// Spectrum of the fluctuating part of nu^2 for a Gaussian process nu with the
/// given one-sided spectrum. Output is one-sided on a grid starting at 0 with
/// the same df and extending to twice the input bandwidth.
/// Throws std::domain_error when the input has significant power at the grid edge.
Psd self_convolve(const Psd& s, const SelfConvolveOptions& opts = {});

}  // namespace tinsim
