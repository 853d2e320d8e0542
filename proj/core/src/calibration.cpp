#include "tinsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tinsim/backaction.hpp"
#include "tinsim/constants.hpp"
#include "tinsim/fit.hpp"
#include "tinsim/spectra.hpp"

namespace tinsim {

using constants::hbar;
using constants::k_B;
using constants::two_pi;

void CalibrationTone::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("CalibrationTone: beta must be > 0");
  if (!(omega_mod > 0.0)) throw std::invalid_argument("CalibrationTone: omega_mod must be > 0");
}

double peak_shape(double omega, double center, double linewidth, DampingModel model) {
  const double w02 = center * center;
  const double d = w02 - omega * omega;
  if (model == DampingModel::viscous) {
    return 4.0 * linewidth * w02 / (d * d + omega * omega * linewidth * linewidth);
  }
  if (!(omega > 0.0)) return 0.0;
  return 4.0 * w02 * center * linewidth / (omega * (d * d + w02 * linewidth * linewidth));
}

std::vector<PeakFit> fit_thermal_peaks(const Psd& spectrum, std::span<const PeakGuess> guesses,
                                       const PeakFitOptions& opts) {
  spectrum.validate();
  if (guesses.empty()) throw std::invalid_argument("fit_thermal_peaks: no guesses");
  std::vector<PeakGuess> g(guesses.begin(), guesses.end());
  for (const auto& p : g) {
    if (!(p.center > 0.0) || !(p.linewidth > 0.0)) {
      throw std::invalid_argument("fit_thermal_peaks: guesses need centre and linewidth > 0");
    }
  }
  std::sort(g.begin(), g.end(), [](const auto& a, const auto& b) { return a.center < b.center; });
  for (std::size_t k = 1; k < g.size(); ++k) {
    const double sep = g[k].center - g[k - 1].center;
    if (sep < 3.0 * std::max(g[k].linewidth, g[k - 1].linewidth)) {
      throw std::invalid_argument("fit_thermal_peaks: peaks closer than three linewidths");
    }
  }
  if (!(opts.temperature > 0.0) || !(opts.units_per_m2 > 0.0)) {
    throw std::invalid_argument("fit_thermal_peaks: temperature and units_per_m2 must be > 0");
  }

  const FrequencyGrid& grid = spectrum.grid;
  const auto n = static_cast<long>(grid.n_points);
  std::vector<std::size_t> bins;
  std::size_t masked = 0;
  std::vector<long> centre_bin(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    centre_bin[k] = static_cast<long>(grid.nearest_index(g[k].center / two_pi));
  }
  for (long i = 0; i < n; ++i) {
    const double w = two_pi * grid.frequency(static_cast<std::size_t>(i));
    bool in_window = false;
    bool in_mask = false;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (std::abs(w - g[k].center) <= opts.window_linewidths * g[k].linewidth) in_window = true;
      if (std::abs(i - centre_bin[k]) <= static_cast<long>(opts.mask_half_width) &&
          opts.mask_half_width > 0) {
        in_mask = true;
      }
    }
    if (!in_window) continue;
    if (in_mask) {
      ++masked;
      continue;
    }
    if (spectrum.values[static_cast<std::size_t>(i)] > 0.0) bins.push_back(static_cast<std::size_t>(i));
  }
  const std::size_t n_params = 3 * g.size() + (opts.fit_floor ? 1 : 0);
  if (bins.size() <= n_params) {
    throw std::domain_error("fit_thermal_peaks: too few unmasked bins in the fit windows");
  }

  // Area seeds from the peak height, floor seed from the smallest selected value.
  std::vector<double> area0(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k].area > 0.0) {
      area0[k] = g[k].area;
      continue;
    }
    double peak = 0.0;
    const long reach = static_cast<long>(opts.mask_half_width) + 2;
    for (long i = std::max(0L, centre_bin[k] - reach); i <= std::min(n - 1, centre_bin[k] + reach); ++i) {
      peak = std::max(peak, spectrum.values[static_cast<std::size_t>(i)]);
    }
    area0[k] = std::max(peak, 1e-300) * g[k].linewidth / 4.0;
  }
  double floor0 = spectrum.values[bins.front()];
  for (auto i : bins) floor0 = std::min(floor0, spectrum.values[i]);
  floor0 *= 0.5;

  std::vector<double> log_data(bins.size()), omegas(bins.size());
  for (std::size_t j = 0; j < bins.size(); ++j) {
    log_data[j] = std::log(spectrum.values[bins[j]]);
    omegas[j] = two_pi * grid.frequency(bins[j]);
  }

  auto unpack = [&](std::span<const double> p, std::size_t k, double& c, double& w, double& a) {
    c = g[k].center + g[k].linewidth * p[3 * k];
    w = g[k].linewidth * std::exp(p[3 * k + 1]);
    a = area0[k] * std::exp(p[3 * k + 2]);
  };
  auto residual = [&](std::span<const double> p, std::span<double> r) {
    const double floor = opts.fit_floor ? floor0 * std::exp(p[3 * g.size()]) : 0.0;
    for (std::size_t j = 0; j < bins.size(); ++j) {
      double model = floor;
      for (std::size_t k = 0; k < g.size(); ++k) {
        double c, w, a;
        unpack(p, k, c, w, a);
        model += a * peak_shape(omegas[j], c, w, g[k].model);
      }
      r[j] = std::log(std::max(model, 1e-300)) - log_data[j];
    }
  };
  LmOptions lm;
  lm.max_iterations = 500;
  const LmResult res = levenberg_marquardt(residual, std::vector<double>(n_params, 0.0), bins.size(), lm);

  std::vector<PeakFit> out;
  for (std::size_t k = 0; k < g.size(); ++k) {
    PeakFit f;
    unpack(res.params, k, f.center, f.linewidth, f.area);
    f.model = g[k].model;
    f.masked_bins = masked;
    f.mass_eff = k_B * opts.temperature * opts.units_per_m2 / (f.center * f.center * f.area);
    out.push_back(f);
  }
  return out;
}

double g0_from_tone(const Psd& spectrum, const CalibrationTone& tone, double t_eff,
                    const MechanicalMode& mode, const ToneFitOptions& opts) {
  tone.validate();
  spectrum.validate();
  if (!(t_eff > 0.0)) throw std::invalid_argument("g0_from_tone: T_eff must be > 0");
  const FrequencyGrid& grid = spectrum.grid;
  const double bin_w = two_pi * grid.df;
  const auto h = static_cast<long>(opts.tone_half_width);
  const double guard = opts.peak_window_linewidths * mode.gamma_m + static_cast<double>(4 * h + 2) * bin_w;
  if (std::abs(tone.omega_mod - mode.omega_m) < guard) {
    throw std::domain_error("g0_from_tone: tone and thermal peak are not resolved");
  }

  const auto n = static_cast<long>(grid.n_points);
  const auto i0 = static_cast<long>(grid.nearest_index(tone.omega_mod / two_pi));
  if (i0 - 4 * h - 1 < 0 || i0 + 4 * h + 1 >= n) {
    throw std::domain_error("g0_from_tone: tone too close to the grid edge");
  }
  std::vector<double> side;
  for (long d = h + 1; d <= 4 * h + 1; ++d) {
    side.push_back(spectrum.values[static_cast<std::size_t>(i0 - d)]);
    side.push_back(spectrum.values[static_cast<std::size_t>(i0 + d)]);
  }
  std::nth_element(side.begin(), side.begin() + static_cast<long>(side.size() / 2), side.end());
  const double floor = side[side.size() / 2];
  double sum = 0.0;
  for (long i = i0 - h; i <= i0 + h; ++i) sum += spectrum.values[static_cast<std::size_t>(i)] - floor;
  const double a_tone = sum * grid.df;

  PeakFitOptions po;
  po.temperature = t_eff;
  po.mask_half_width = 0;
  po.window_linewidths = opts.peak_window_linewidths;
  po.fit_floor = true;
  const PeakGuess guess{mode.omega_m, mode.gamma_m, 0.0, mode.damping};
  const double a_th = fit_thermal_peaks(spectrum, std::span(&guess, 1), po).front().area;
  if (!(a_tone > 0.0) || !(a_th > 0.0)) {
    throw std::domain_error("g0_from_tone: non-positive peak area");
  }
  return tone.omega_mod * tone.beta *
         std::sqrt(hbar * mode.omega_m * a_th / (4.0 * k_B * t_eff * a_tone));
}

SpringFit nc_from_spring_fit(std::span<const SpringPoint> points, const MechanicalMode& mode,
                             const CavityParams& cavity) {
  if (points.size() < 3) throw std::invalid_argument("nc_from_spring_fit: needs >= 3 points");
  const double g0 = vacuum_coupling_rate(mode);
  auto shape = [&](double nu) {
    const double q = 1.0 + nu * nu;
    return 4.0 * nu * g0 * g0 / (cavity.kappa * q * q);
  };
  double shh = 0.0, shy = 0.0;
  for (const auto& p : points) {
    const double s = shape(p.nu);
    shh += s * s;
    shy += s * p.delta_omega;
  }
  if (!(shh > 0.0)) throw std::invalid_argument("nc_from_spring_fit: all detunings are zero");
  SpringFit out;
  out.n_c0 = shy / shh;
  double ss = 0.0;
  for (const auto& p : points) {
    const double r = p.delta_omega - out.n_c0 * shape(p.nu);
    out.residuals.push_back(r);
    ss += r * r;
  }
  out.rms_residual = std::sqrt(ss / static_cast<double>(points.size()));
  return out;
}

double eta_from_slope(double photons_per_watt, const CavityParams& cavity) {
  if (!(photons_per_watt > 0.0)) throw std::invalid_argument("eta_from_slope: slope must be > 0");
  return photons_per_watt * hbar * cavity.omega_laser * cavity.kappa / 4.0;
}

BudgetPair assemble_budgets(const BudgetComponents& c, bool approximate) {
  c.grid.validate();
  auto keep_y = [&](const std::string& name) {
    return !approximate || name.rfind("imp", 0) == 0 || name == component::thermal ||
           name == component::tinba;
  };
  auto keep_rin = [&](const std::string& name) {
    return !approximate || name == component::shot || name == component::tin;
  };
  BudgetPair out{NoiseBudget(c.grid, PsdUnits::displacement), NoiseBudget(c.grid, PsdUnits::relative)};
  for (const auto& [name, v] : c.s_y) {
    if (keep_y(name)) out.s_y.add(name, v);
  }
  for (const auto& [name, v] : c.s_rin) {
    if (keep_rin(name)) out.s_rin.add(name, v);
  }
  return out;
}

std::vector<BandDominance> dominance_report(const NoiseBudget& budget,
                                            std::span<const std::pair<double, double>> bands) {
  if (budget.components().empty()) throw std::invalid_argument("dominance_report: empty budget");
  std::vector<BandDominance> out;
  for (const auto& [lo, hi] : bands) {
    BandDominance d{lo, hi, {}};
    double best = -1.0;
    for (const auto& comp : budget.components()) {
      const double p = budget.component(comp.name).band_integral(lo, hi);
      if (p > best) {
        best = p;
        d.dominant = comp.name;
      }
    }
    out.push_back(d);
  }
  return out;
}

TinThermalCheck tin_over_thermal(const NoiseBudget& s_rin, double f_lo, double f_hi) {
  if (!s_rin.contains(component::tin) || !s_rin.contains(component::thermal)) {
    throw std::invalid_argument("tin_over_thermal: budget needs 'tin' and 'thermal' components");
  }
  const double ratio = s_rin.band_ratio(component::tin, component::thermal, f_lo, f_hi);
  TinThermalCheck out;
  out.ratio_db = 10.0 * std::log10(ratio);
  out.exceeds_30db = out.ratio_db > 30.0;
  return out;
}

double frequency_noise_imprecision(double s_f_hz2, double coupling_G) {
  if (coupling_G == 0.0) throw std::invalid_argument("frequency_noise_imprecision: G must be nonzero");
  return two_pi * two_pi * s_f_hz2 / (coupling_G * coupling_G);
}

ShotTinSplit fit_shot_tin_split(std::span<const double> powers, std::span<const double> band_rin) {
  if (powers.size() != band_rin.size() || powers.size() < 2) {
    throw std::invalid_argument("fit_shot_tin_split: needs >= 2 matching points");
  }
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, y1 = 0.0, y2 = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (!(powers[i] > 0.0)) throw std::invalid_argument("fit_shot_tin_split: powers must be > 0");
    const double u = 1.0 / powers[i];
    s11 += u * u;
    s12 += u;
    s22 += 1.0;
    y1 += u * band_rin[i];
    y2 += band_rin[i];
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 1e-12 * s11 * s22)) {
    throw std::invalid_argument("fit_shot_tin_split: powers must differ");
  }
  return {(y1 * s22 - y2 * s12) / det, (s11 * y2 - s12 * y1) / det};
}

Psd synthetic_tone_spectrum(const MechanicalMode& mode, const CalibrationTone& tone, double t_eff,
                            const FrequencyGrid& grid, double gain, double floor) {
  tone.validate();
  MechanicalMode m = mode;
  m.temperature = t_eff;
  Psd out = thermal_displacement_psd(m, grid).scaled(mode.coupling_G * mode.coupling_G * gain);
  out.units = PsdUnits::frequency_noise;
  for (auto& v : out.values) v += floor;
  const double tone_area = 0.5 * std::pow(tone.beta * tone.omega_mod, 2);
  const double f_mod = tone.omega_mod / two_pi;
  if (f_mod < grid.f_start || f_mod > grid.f_end()) {
    throw std::invalid_argument("synthetic_tone_spectrum: tone outside the grid");
  }
  out.values[grid.nearest_index(f_mod)] += gain * tone_area / grid.df;
  return out;
}

std::vector<SpringPoint> synthetic_spring_shifts(const MechanicalMode& mode,
                                                 const CavityParams& cavity, double n_c0,
                                                 std::span<const double> nus) {
  std::vector<SpringPoint> out;
  for (double nu : nus) {
    CavityParams c = cavity;
    c.detuning_nu = nu;
    c.n_cav = n_c0 / (1.0 + nu * nu);
    out.push_back({nu, dynamical_backaction(mode, c).spring_shift});
  }
  return out;
}

Psd synthetic_thermal_spectrum(std::span<const MechanicalMode> modes, const FrequencyGrid& grid,
                               double floor) {
  Psd out(grid, PsdUnits::displacement);
  for (const auto& m : modes) out += thermal_displacement_psd(m, grid);
  for (auto& v : out.values) v += floor;
  return out;
}

void CalibrationReport::add(std::string key, double value) {
  std::ostringstream s;
  s.precision(10);
  s << value;
  entries_.emplace_back(std::move(key), s.str());
}

void CalibrationReport::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void CalibrationReport::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << ": " << v << '\n';
}

}  // namespace tinsim
