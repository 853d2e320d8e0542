#include "tinsim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "tinsim/constants.hpp"
#include "tinsim/fit.hpp"

namespace tinsim {

namespace {

std::vector<double> normalised_intensity(const TimeSeriesRecord& record, double& mean) {
  if (record.intensity.empty()) throw std::invalid_argument("measurement needs the intensity channel");
  mean = std::accumulate(record.intensity.begin(), record.intensity.end(), 0.0) /
         static_cast<double>(record.intensity.size());
  if (!(mean > 0.0)) throw std::domain_error("intensity channel has non-positive mean");
  std::vector<double> out(record.intensity.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = record.intensity[i] / mean;
  return out;
}

Psd subtract_floor(Psd p, double floor) {
  for (auto& v : p.values) v = std::max(v - floor, 0.0);
  return p;
}

}  // namespace

Psd measure_tin(const TimeSeriesRecord& record, const WelchOptions& opts) {
  double mean = 0.0;
  const auto rin = normalised_intensity(record, mean);
  const double floor = record.shot_rin / (mean * mean);
  return subtract_floor(welch_psd(rin, record.fs, opts, PsdUnits::relative), floor);
}

Psd measure_apparent_displacement(const TimeSeriesRecord& record, const WelchOptions& opts) {
  if (record.phase.empty()) throw std::invalid_argument("measurement needs the phase channel");
  return welch_psd(record.phase, record.fs, opts, PsdUnits::displacement);
}

ScalingReport measure_tinba(std::span<const TimeSeriesRecord> records, const TinbaOptions& opts) {
  if (records.size() < 4) throw std::invalid_argument("measure_tinba: needs >= 4 records");
  if (!(opts.f_hi > opts.f_lo) || !(opts.f_lo >= 0.0)) {
    throw std::invalid_argument("measure_tinba: invalid band");
  }
  ScalingReport report;
  std::vector<double> lx, ly;
  double n_min = INFINITY, n_max = 0.0;
  for (const auto& rec : records) {
    const Psd sy = measure_apparent_displacement(rec, opts.welch);
    double power = sy.band_integral(opts.f_lo, opts.f_hi);
    Psd floor(sy.grid, PsdUnits::displacement);
    for (std::size_t i = 0; i < sy.grid.n_points; ++i) {
      double f = opts.subtract_imprecision ? rec.phase_imprecision : 0.0;
      if (opts.extra_floor) f += opts.extra_floor(rec, sy.grid.frequency(i));
      floor.values[i] = f;
    }
    power -= floor.band_integral(opts.f_lo, opts.f_hi);
    const double n_c = rec.system.cavity.n_cav;
    if (!(power > 0.0)) {
      throw std::domain_error("measure_tinba: band power at n_c = " + std::to_string(n_c) +
                              " is not above the subtracted floor");
    }
    report.points.push_back({n_c, power});
    lx.push_back(std::log10(n_c));
    ly.push_back(std::log10(power));
    n_min = std::min(n_min, n_c);
    n_max = std::max(n_max, n_c);
  }
  if (!(n_min > 0.0) || std::log10(n_max / n_min) < 1.5 - 1e-9) {
    throw std::invalid_argument("measure_tinba: photon numbers must span >= 1.5 decades");
  }
  const LineFit fit = fit_line(lx, ly);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.rms_residual = fit.rms_residual;
  return report;
}

CoherenceReport measure_coherence(const TimeSeriesRecord& record, const WelchOptions& opts) {
  if (record.phase.empty()) throw std::invalid_argument("measure_coherence: needs the phase channel");
  double mean = 0.0;
  const auto rin = normalised_intensity(record, mean);
  if (welch_segment_count(rin.size(), opts) < 50) {
    throw std::invalid_argument("measure_coherence: needs >= 50 Welch segments");
  }
  CoherenceReport out;
  out.measured = coherence(record.phase, rin, record.fs, opts);
  out.n_segments = out.measured.n_segments;
  const Psd& s_y = out.measured.psd_a;
  const Psd& s_rin = out.measured.psd_b;
  out.tin_rin = subtract_floor(s_rin, record.shot_rin / (mean * mean));

  // Apparent displacement per unit fluctuation of the mean-normalised intensity;
  // the oracle force follows the un-normalised ratio, hence the factor `mean`.
  const auto& sys = record.system;
  const double g_probe = sys.probe().coupling_G;
  const FrequencyGrid& grid = s_y.grid;
  std::vector<std::complex<double>> transfer(grid.n_points, 0.0);
  if (record.radiation_pressure) {
    for (std::size_t n = 0; n < sys.modes.size(); ++n) {
      const auto& m = sys.modes[n];
      const double scale = record.force_coupling_scale.empty() ? 1.0 : record.force_coupling_scale[n];
      const double weight = g_probe != 0.0 ? m.coupling_G / g_probe : (n == sys.probe_index ? 1.0 : 0.0);
      const double force = scale * constants::hbar * m.coupling_G * sys.cavity.n_cav * mean;
      if (force == 0.0 || weight == 0.0) continue;
      // The adiabatic oracle carries the static spring but no optical damping.
      const double k_opt = 4.0 * constants::hbar * m.coupling_G * m.coupling_G * sys.cavity.n_cav *
                           sys.cavity.detuning_nu * scale /
                           (sys.cavity.kappa * (1.0 + sys.cavity.detuning_nu * sys.cavity.detuning_nu));
      const double w2 = m.omega_m * m.omega_m + k_opt / m.mass;
      for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double w = constants::two_pi * grid.frequency(i);
        const std::complex<double> chi =
            (1.0 / m.mass) / std::complex<double>(w2 - w * w, w * m.gamma_m);
        transfer[i] += weight * force * chi;
      }
    }
  }
  out.predicted = Psd(grid, PsdUnits::dimensionless);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double tin = out.tin_rin.values[i];
    const double sx_tin = std::norm(transfer[i]) * tin;
    const double denom = s_y.values[i] * s_rin.values[i];
    out.predicted.values[i] = denom > 0.0 ? std::clamp(sx_tin * tin / denom, 0.0, 1.0) : 0.0;
  }
  return out;
}

}  // namespace tinsim
