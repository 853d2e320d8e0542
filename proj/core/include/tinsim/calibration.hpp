#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tinsim/budget.hpp"
#include "tinsim/grid.hpp"
#include "tinsim/phys.hpp"

namespace tinsim {

/// Phase-modulation tone used to calibrate the frequency-noise axis.
struct CalibrationTone {
  double beta = 0.0;       // rad
  double omega_mod = 0.0;  // rad/s

  void validate() const;
};

/// Default effective temperature of a weakly probed mode.
inline constexpr double kDefaultEffectiveTemperature = 300.0;

struct ToneFitOptions {
  /// Half-width of the tone integration window, bins.
  std::size_t tone_half_width = 3;
  /// Thermal peak fit window, in linewidths of the supplied mode.
  double peak_window_linewidths = 30.0;
};

/// g0 = omega_mod beta sqrt(hbar omega_m A_th / (4 k_B T_eff A_tone)).
/// `spectrum` is cavity frequency noise in any consistent units; the thermal
/// area comes from a Lorentzian fit around mode.omega_m and the tone area from
/// a floor-subtracted window sum. Throws std::domain_error when the tone and
/// peak overlap or an area is not positive.
double g0_from_tone(const Psd& spectrum, const CalibrationTone& tone, double t_eff,
                    const MechanicalMode& mode, const ToneFitOptions& opts = {});

struct SpringPoint {
  double nu = 0.0;
  double delta_omega = 0.0;  // rad/s
};

struct SpringFit {
  double n_c0 = 0.0;  // resonant photon number
  std::vector<double> residuals;  // rad/s, per point
  double rms_residual = 0.0;
};

/// Single-parameter least squares of delta_omega = 4 nu g0^2 / (kappa (1+nu^2)^2) n_c0.
/// Needs >= 3 points.
SpringFit nc_from_spring_fit(std::span<const SpringPoint> points, const MechanicalMode& mode,
                             const CavityParams& cavity);

/// eta = slope hbar omega_laser kappa / 4, slope in resonant photons per watt.
double eta_from_slope(double photons_per_watt, const CavityParams& cavity);

struct PeakGuess {
  double center = 0.0;     // rad/s
  double linewidth = 0.0;  // rad/s
  double area = 0.0;       // spectrum units * Hz
  DampingModel model = DampingModel::viscous;
};

struct PeakFit {
  double center = 0.0;
  double linewidth = 0.0;
  double area = 0.0;
  double mass_eff = 0.0;  // kg, from equipartition
  DampingModel model = DampingModel::viscous;
  std::size_t masked_bins = 0;
};

struct PeakFitOptions {
  double temperature = kDefaultEffectiveTemperature;
  /// Bins excluded on each side of each centre.
  std::size_t mask_half_width = 2;
  /// Fit window half-width in guessed linewidths.
  double window_linewidths = 30.0;
  /// Spectrum units per m^2 (1 for displacement spectra).
  double units_per_m2 = 1.0;
  /// Fit an additional white floor.
  bool fit_floor = false;
};

/// Normalised thermal peak shape; integrates to 1 over f in Hz (the structural
/// shape only up to its O(linewidth / centre) low-frequency tail).
double peak_shape(double omega, double center, double linewidth, DampingModel model);

/// Joint masked fit of thermal peaks in log space. Throws std::invalid_argument
/// when guesses are closer than three linewidths.
std::vector<PeakFit> fit_thermal_peaks(const Psd& spectrum, std::span<const PeakGuess> guesses,
                                       const PeakFitOptions& opts = {});

/// Canonical component names.
namespace component {
inline constexpr const char* imp_shot = "imp_shot";
inline constexpr const char* imp_tin = "imp_tin";
inline constexpr const char* imp_freq = "imp_freq";
inline constexpr const char* thermal = "thermal";
inline constexpr const char* qba = "qba";
inline constexpr const char* tinba = "tinba";
inline constexpr const char* cba = "cba";
inline constexpr const char* shot = "shot";
inline constexpr const char* tin = "tin";
inline constexpr const char* classical = "classical";
}  // namespace component

struct BudgetComponents {
  FrequencyGrid grid;
  std::vector<std::pair<std::string, std::vector<double>>> s_y;    // m^2/Hz
  std::vector<std::pair<std::string, std::vector<double>>> s_rin;  // 1/Hz
};

struct BudgetPair {
  NoiseBudget s_y;
  NoiseBudget s_rin;
};

/// Stacks the components. With `approximate`, S_y keeps the imprecision,
/// thermal and TINBA terms and S_RIN keeps shot and TIN.
BudgetPair assemble_budgets(const BudgetComponents& c, bool approximate = false);

struct BandDominance {
  double f_lo = 0.0;
  double f_hi = 0.0;
  std::string dominant;
};

/// Largest band-integrated component per band.
std::vector<BandDominance> dominance_report(const NoiseBudget& budget,
                                            std::span<const std::pair<double, double>> bands);

/// TIN-to-thermal RIN ratio in dB over a band and whether it exceeds 30 dB.
struct TinThermalCheck {
  double ratio_db = 0.0;
  bool exceeds_30db = false;
};
TinThermalCheck tin_over_thermal(const NoiseBudget& s_rin, double f_lo, double f_hi);

/// Apparent displacement from laser frequency noise, (2 pi)^2 S_f / G^2,
/// with S_f in Hz^2/Hz.
double frequency_noise_imprecision(double s_f_hz2, double coupling_G);

struct ShotTinSplit {
  double a = 0.0;  // shot coefficient, RIN power * W
  double b = 0.0;  // power-independent TIN
};

/// Least-squares fit of band RIN = A / P + B.
ShotTinSplit fit_shot_tin_split(std::span<const double> powers, std::span<const double> band_rin);

// Synthetic data with known truth.

/// Cavity frequency noise G^2 S_x at T_eff plus a phase-modulation tone of area
/// (beta omega_mod)^2 / 2 in the nearest bin, times `gain`, plus `floor`.
Psd synthetic_tone_spectrum(const MechanicalMode& mode, const CalibrationTone& tone, double t_eff,
                            const FrequencyGrid& grid, double gain = 1.0, double floor = 0.0);

/// Spring shifts from the full dynamical-backaction model at the given detunings
/// for a resonant photon number n_c0.
std::vector<SpringPoint> synthetic_spring_shifts(const MechanicalMode& mode,
                                                 const CavityParams& cavity, double n_c0,
                                                 std::span<const double> nus);

/// Sum of thermal displacement spectra plus a white floor.
Psd synthetic_thermal_spectrum(std::span<const MechanicalMode> modes, const FrequencyGrid& grid,
                               double floor = 0.0);

/// key: value report lines.
class CalibrationReport {
 public:
  void add(std::string key, double value);
  void add(std::string key, std::string value);
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace tinsim
