#include "verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <limits>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "tinsim/backaction.hpp"
#include "tinsim/calibration.hpp"
#include "tinsim/constants.hpp"
#include "tinsim/fit.hpp"
#include "tinsim/landscape.hpp"
#include "tinsim/measure.hpp"
#include "tinsim/oracle.hpp"
#include "tinsim/reference.hpp"
#include "tinsim/spectra.hpp"
#include "tinsim/transduction.hpp"

namespace tinsim::app {

using constants::hbar;
using constants::two_pi;

bool CriterionResult::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.informational || c.pass; });
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

Check rel(std::string id, std::string what, double measured, double target, double tol) {
  return {std::move(id), std::move(what), measured,
          fmt(target) + " +/- " + fmt(100.0 * tol) + "%",
          std::abs(measured / target - 1.0) <= tol};
}

Check absdiff(std::string id, std::string what, double measured, double target, double tol) {
  return {std::move(id), std::move(what), measured, fmt(target) + " +/- " + fmt(tol),
          std::abs(measured - target) <= tol};
}

Check at_least(std::string id, std::string what, double measured, double bound) {
  return {std::move(id), std::move(what), measured, ">= " + fmt(bound), measured >= bound};
}

Check at_most(std::string id, std::string what, double measured, double bound) {
  return {std::move(id), std::move(what), measured, "<= " + fmt(bound), measured <= bound};
}

Check info(std::string id, std::string what, double measured) {
  return {std::move(id), std::move(what), measured, "-", true, true};
}

// Runs f(0..n-1) on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
  std::vector<std::exception_ptr> errors(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            f(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

MechanicalMode desk_mode(double f_hz, double q, double depth, double kappa) {
  MechanicalMode m{1e-9, two_pi * f_hz, two_pi * f_hz / q, 0.0, 298.0};
  m.coupling_G = depth * kappa / rms_thermal_displacement(m);
  return m;
}

// ---------------------------------------------------------------------------

void criterion1(CriterionResult& r) {
  r.title = "derived scalars at the reference parameters";
  const auto mode = reference::trampoline_fundamental();
  const auto cav = reference::trampoline_cavity();
  r.checks.push_back(rel("c0", "vacuum cooperativity", vacuum_cooperativity(mode, cav), 2.6, 0.05));
  r.checks.push_back(rel("n_th", "thermal occupation", thermal_occupation(mode), 1.5e8, 0.02));
  r.checks.push_back(
      rel("x_th", "rms thermal displacement [m]", rms_thermal_displacement(mode), 0.072e-9, 0.02));
  r.checks.push_back(rel("sqrt_sf", "thermal force noise [N/rtHz]",
                         std::sqrt(thermal_force_psd(mode)), 8e-17, 0.05));
  r.checks.push_back(rel("s_nu_zp", "zero-point detuning noise [1/Hz]",
                         zero_point_detuning_psd(mode, cav), 7e-10, 0.10));
  r.checks.push_back(info("g_xth_over_kappa", "nonlinearity parameter",
                          nonlinearity_parameter(mode, cav)));
}

void criterion2(CriterionResult& r) {
  r.title = "cooperativity arithmetic with a 1e-11 /Hz TIN level";
  const auto mode = reference::trampoline_fundamental();
  const auto cav = reference::trampoline_cavity(2e6);
  const double s = reference::kTinRin;
  r.checks.push_back(rel("cq_bound", "resonant Cq bound", cq_upper_bound(mode, cav, s), 1.0e-3, 0.15));
  const double cq = cq_with_tin(mode, cav, s);
  Check c{"cq_2e6", "Cq with TIN at n_c = 2e6", cq, "4e-4 within x1.5",
          cq >= 4e-4 / 1.5 && cq <= 4e-4 * 1.5};
  r.checks.push_back(c);
  const double cq0 = vacuum_cooperativity(mode, cav) * cav.n_cav / thermal_occupation(mode);
  r.checks.push_back(info("cq_ratio100", "Cq ideal / (1 + 100), TINBA at 100x thermal", cq0 / 101.0));
}

// Three desk-scale modes whose mixing products are well separated.
struct MixingSetup {
  SystemParams system;
  std::vector<double> mixing;  // Hz
};

MixingSetup mixing_setup(double nu) {
  const double kappa = 1e9;
  const double f[3] = {41.0, 183.0, 260.0};
  const double depth[3] = {0.04, 0.01, 0.01};
  MixingSetup s;
  for (int i = 0; i < 3; ++i) s.system.modes.push_back(desk_mode(f[i], 1e3, depth[i], kappa));
  s.system.cavity = {kappa, nu, 1e13, 2.4e15, 1.0};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      s.mixing.push_back(f[i] + f[j]);
      if (i != j) s.mixing.push_back(f[j] - f[i]);
    }
  }
  return s;
}

SimConfig mixing_config(const SystemParams& system, double duration) {
  SimConfig c;
  c.system = system;
  c.fs = 6000.0;
  c.duration = duration;
  c.seed = 7;
  c.radiation_pressure = false;
  c.record.displacement = false;
  c.record.detuning = false;
  c.record.phase = false;
  return c;
}

Psd analytic_tin(const SystemParams& system) {
  const FrequencyGrid g{0.0, 0.01, 120000};
  return tin_rin(self_convolve(multimode_frequency_noise(system, g)), system.cavity.detuning_nu);
}

WelchOptions mixing_welch() {
  WelchOptions w;
  w.segment_length = std::size_t{1} << 16;
  return w;
}

void criterion3(CriterionResult& r, unsigned) {
  r.title = "oracle vs analytic TIN, three modes, Q = 1e3, nu = 0, G x_th / kappa = 0.04";
  const auto s = mixing_setup(0.0);
  const auto rec = simulate(mixing_config(s.system, 2200.0));
  const auto measured = measure_tin(rec, mixing_welch());
  const auto analytic = analytic_tin(s.system);

  const double half = 1.0;
  double worst = 0.0, contrast = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (double f : s.mixing) {
    // Skip products that fall within five linewidths of a direct resonance.
    bool near = false;
    for (const auto& m : s.system.modes) {
      const double fm = constants::to_hz(m.omega_m);
      near |= std::abs(f - fm) < half + 5.0 * constants::to_hz(m.gamma_m);
    }
    if (near) continue;
    ++used;
    const double o = measured.band_integral(f - half, f + half);
    const double a = analytic.band_integral(f - half, f + half);
    const double db = 10.0 * std::log10(o / a);
    r.checks.push_back(info("window_" + fmt(f) + "hz", "oracle/analytic [dB]", db));
    if (std::abs(db) > std::abs(worst)) worst = db;
    // Floor from side bands 2-4 Hz away that do not touch another product.
    double side = 0.0;
    int n_side = 0;
    for (double c : {f - 3.0, f + 3.0}) {
      bool clear = true;
      for (double g : s.mixing) clear &= g == f || std::abs(g - c) > 2.0;
      if (!clear) continue;
      side += measured.band_mean(c - 1.0, c + 1.0);
      ++n_side;
    }
    if (n_side > 0) {
      contrast = std::min(contrast, 10.0 * std::log10(measured.band_mean(f - 0.5, f + 0.5) * n_side / side));
    }
  }
  r.checks.push_back(info("windows", "mixing windows compared (f_i +/- f_j, +/-1 Hz)", double(used)));
  r.checks.push_back(absdiff("worst_db", "worst oracle/analytic band ratio [dB]", worst, 0.0, 1.5));
  r.checks.push_back(at_least("peak_contrast_db", "weakest mixing peak over nearby floor [dB]", contrast, 10.0));
}

void criterion4(CriterionResult& r, unsigned threads) {
  r.title = "magic detuning suppresses TIN";
  const double magic = magic_detuning();
  const auto at_magic = mixing_setup(magic);
  const auto tin_magic = analytic_tin(at_magic.system);
  const double peak = *std::max_element(tin_magic.values.begin(), tin_magic.values.end());
  r.checks.push_back({"analytic_zero", "max analytic TIN RIN at nu = 1/sqrt(3)", peak, "== 0",
                      peak == 0.0 && tin_prefactor(magic) == 0.0});

  const double nus[2] = {0.0, magic};
  double band[2] = {0.0, 0.0};
  parallel_for(2, threads, [&](std::size_t k) {
    const auto s = mixing_setup(nus[k]);
    const auto p = measure_tin(simulate(mixing_config(s.system, 1100.0)), mixing_welch());
    for (double f : s.mixing) band[k] += p.band_integral(f - 1.0, f + 1.0);
  });
  r.checks.push_back(at_least("suppression_db", "oracle band TIN, nu = 0 over nu = 1/sqrt(3) [dB]",
                              10.0 * std::log10(band[0] / band[1]), 20.0));
}

// Probe at 41 Hz plus two high-Q spectators whose difference product lands
// 3 Hz above the probe. Only the probe feels radiation pressure.
struct TinbaSetup {
  SystemParams system;
  double n_low = 0.0;
  double imprecision_low = 3e-18;  // m^2/Hz at n_low
};

TinbaSetup tinba_setup() {
  const double kappa = 1e9;
  TinbaSetup s;
  s.system.modes = {desk_mode(41.0, 200.0, 1e-3, kappa), desk_mode(150.0, 1e3, 0.1, kappa),
                    desk_mode(194.0, 1e3, 0.1, kappa)};
  s.system.cavity = {kappa, 0.0, 1.0, 2.4e15, 1.0};
  // Lowest photon number puts TINBA at 100x the thermal force at 44 Hz.
  const auto tin = analytic_tin(s.system);
  const auto& p = s.system.probe();
  s.n_low = std::sqrt(100.0 * thermal_force_psd(p) / tin.value_at(44.0)) / (hbar * p.coupling_G);
  return s;
}

SimConfig tinba_config(const TinbaSetup& s, double n, double duration, std::uint64_t seed) {
  SimConfig c;
  c.system = s.system;
  c.system.cavity.n_cav = n;
  c.fs = 4096.0;
  c.duration = duration;
  c.seed = seed;
  c.force_coupling_scale = {1.0, 0.0, 0.0};
  c.phase_imprecision = s.imprecision_low * s.n_low / n;
  c.record.displacement = false;
  c.record.detuning = false;
  return c;
}

double apparent_thermal_floor(const TimeSeriesRecord& rec, double f) {
  const auto& p = rec.system.probe();
  const FrequencyGrid g{f, 1e-3, 2};
  double s = 0.0;
  for (const auto& m : rec.system.modes) {
    const double w = m.coupling_G / p.coupling_G;
    s += w * w * thermal_displacement_psd(m, g).values[0];
  }
  return s;
}

void criterion5(CriterionResult& r, unsigned threads) {
  r.title = "TINBA and imprecision scaling with photon number";
  const auto s = tinba_setup();
  WelchOptions w;
  w.segment_length = std::size_t{1} << 16;
  w.overlap = 0.0;
  const double duration = 100.0 * static_cast<double>(w.segment_length) / 4096.0;
  std::vector<TimeSeriesRecord> recs(4);
  parallel_for(recs.size(), threads, [&](std::size_t k) {
    recs[k] = simulate(tinba_config(s, s.n_low * std::pow(10.0, 0.5 * double(k)), duration, 11 + k));
  });
  r.checks.push_back(info("n_low", "lowest photon number", s.n_low));
  r.checks.push_back(info("decades", "photon-number span [decades]", 1.5));

  TinbaOptions t;
  t.f_lo = 43.6;
  t.f_hi = 44.4;
  t.welch = w;
  t.extra_floor = apparent_thermal_floor;
  r.checks.push_back(absdiff("tinba_slope", "off-resonant S_y slope, TINBA band 43.6-44.4 Hz",
                             measure_tinba(recs, t).slope, 2.0, 0.1));
  TinbaOptions im;
  im.f_lo = 1200.0;
  im.f_hi = 1800.0;
  im.welch = w;
  im.subtract_imprecision = false;
  r.checks.push_back(absdiff("imprecision_slope", "S_y slope, imprecision band 1200-1800 Hz",
                             measure_tinba(recs, im).slope, -1.0, 0.1));
}

double circular_mean(const std::vector<double>& phase, const FrequencyGrid& g, double lo, double hi) {
  std::complex<double> z;
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double f = g.frequency(i);
    if (f >= lo && f <= hi) z += std::polar(1.0, phase[i]);
  }
  return std::arg(z);
}

void criterion6(CriterionResult& r, unsigned) {
  r.title = "phase-intensity coherence under strong TINBA";
  const auto s = tinba_setup();
  WelchOptions w;
  w.segment_length = std::size_t{1} << 17;
  w.overlap = 0.0;
  const double duration = 100.0 * static_cast<double>(w.segment_length) / 4096.0;
  const auto rec = simulate(tinba_config(s, 70.0 * s.n_low, duration, 5));
  const auto coh = measure_coherence(rec, w);
  const auto& c = coh.measured.coherence;
  const double fp = constants::to_hz(s.system.probe().omega_m);

  double min_coh = 1.0;
  for (std::size_t i = 0; i < c.grid.n_points; ++i) {
    const double f = c.grid.frequency(i);
    if (f >= fp - 1.5 && f <= fp + 1.5) min_coh = std::min(min_coh, c.values[i]);
  }
  r.checks.push_back(at_least("band_coherence", "min coherence over f_m +/- 1.5 Hz", min_coh, 0.9));

  // Far enough out (about ten linewidths) that the susceptibility phase has settled.
  double step = circular_mean(coh.measured.phase, c.grid, fp - 2.5, fp - 1.5) -
                circular_mean(coh.measured.phase, c.grid, fp + 1.5, fp + 2.5);
  step = std::abs(std::remainder(step, two_pi));
  r.checks.push_back(absdiff("phase_step", "phase step across resonance [rad]", step, constants::pi, 0.3));

  const double n = static_cast<double>(coh.n_segments);
  r.checks.push_back(info("segments", "averaged segments N", n));
  r.checks.push_back(rel("floor", "off-resonant coherence, 1200-1800 Hz", c.band_mean(1200.0, 1800.0),
                         1.0 / n, 0.5));

  // Linear-response prediction against the estimate where the correlation is significant.
  double worst = 0.0;
  for (double lo = fp - 6.0; lo < fp + 6.0; lo += 0.5) {
    const double m = c.band_mean(lo, lo + 0.5);
    if (m < 0.3) continue;
    worst = std::max(worst, std::abs(coh.predicted.band_mean(lo, lo + 0.5) - m));
  }
  r.checks.push_back(at_most("model_gap", "max |predicted - measured| where coherence > 0.3", worst, 0.1));
}

void criterion7(CriterionResult& r, unsigned) {
  r.title = "calibration round trips over 50 draws";
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto log_uniform = [&](double a, double b) { return a * std::pow(b / a, u(rng)); };
  // Periodogram scatter after K averages: each bin times Gamma(K, 1/K).
  auto noisy = [&](Psd p, double k) {
    std::gamma_distribution<double> g(k, 1.0 / k);
    for (auto& v : p.values) v *= g(rng);
    return p;
  };
  const int draws = 50;
  double worst_g0 = 0.0, worst_nc = 0.0, worst_gamma = 0.0, worst_mass = 0.0;

  for (int d = 0; d < draws; ++d) {
    // Tone method. The thermal peak is fitted, the tone window is summed.
    MechanicalMode m{12e-12, two_pi * 41e3 * (0.8 + 0.4 * u(rng)), 0.0, 0.0, 298.0};
    m.gamma_m = m.omega_m / log_uniform(5e3, 2e4);
    const double g0 = two_pi * log_uniform(0.5e3, 3e3);
    m.coupling_G = coupling_for_g0(g0, m.mass, m.omega_m);
    const double f_m = constants::to_hz(m.omega_m);
    // The tone sits several kHz out so that it clears the peak's tail.
    const CalibrationTone tone{0.2 + 0.3 * u(rng), two_pi * (f_m + 4e3 + 2e3 * u(rng))};
    const FrequencyGrid tg{f_m - 1500.0, 0.25, 32001};
    const auto spectrum = noisy(synthetic_tone_spectrum(m, tone, 300.0, tg), 1e4);
    worst_g0 = std::max(worst_g0, std::abs(g0_from_tone(spectrum, tone, 300.0, m) / g0 - 1.0));

    // Optical spring versus detuning.
    const auto mode = reference::trampoline_fundamental();
    const auto cav = reference::trampoline_cavity();
    const double n0 = log_uniform(1e5, 1e7);
    std::vector<double> nus;
    for (int i = 0; i < 9; ++i) nus.push_back(-1.6 + 0.4 * i);
    auto pts = synthetic_spring_shifts(mode, cav, n0, nus);
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, std::abs(p.delta_omega));
    std::normal_distribution<double> jitter(0.0, 0.005 * scale);
    for (auto& p : pts) p.delta_omega += jitter(rng);
    worst_nc = std::max(worst_nc, std::abs(nc_from_spring_fit(pts, mode, cav).n_c0 / n0 - 1.0));

    // Three thermal peaks in a displacement spectrum.
    std::vector<MechanicalMode> modes;
    std::vector<PeakGuess> guesses;
    const double base[3] = {40e3, 65e3, 95e3};
    for (double b : base) {
      MechanicalMode p{log_uniform(5e-12, 5e-11), two_pi * b * (0.95 + 0.1 * u(rng)), 0.0, 0.0, 298.0};
      p.gamma_m = p.omega_m / log_uniform(1e3, 1e4);
      modes.push_back(p);
      // Guesses are deliberately off by up to 30% in width and a factor 2 in area.
      const double x2 = rms_thermal_displacement(p) * rms_thermal_displacement(p);
      guesses.push_back({p.omega_m + 0.2 * p.gamma_m * (u(rng) - 0.5), p.gamma_m * (0.7 + 0.6 * u(rng)),
                         x2 * (0.5 + 1.5 * u(rng)), DampingModel::viscous});
    }
    const FrequencyGrid pg{30e3, 0.5, 160001};
    const auto peaks = noisy(synthetic_thermal_spectrum(modes, pg), 1e3);
    PeakFitOptions po;
    po.temperature = 298.0;
    const auto fits = fit_thermal_peaks(peaks, guesses, po);
    for (std::size_t i = 0; i < fits.size(); ++i) {
      worst_gamma = std::max(worst_gamma, std::abs(fits[i].linewidth / modes[i].gamma_m - 1.0));
      worst_mass = std::max(worst_mass, std::abs(fits[i].mass_eff / modes[i].mass - 1.0));
    }
  }
  r.checks.push_back(at_most("g0", "worst relative g0 error", worst_g0, 0.02));
  r.checks.push_back(at_most("n_c", "worst relative n_c error", worst_nc, 0.01));
  r.checks.push_back(at_most("gamma", "worst relative linewidth error", worst_gamma, 0.10));
  r.checks.push_back(at_most("mass", "worst relative mass error", worst_mass, 0.05));

  // Input-coupling efficiency from a photon-number versus power line.
  std::vector<double> p_mw, n_c;
  for (int i = 0; i < 12; ++i) {
    p_mw.push_back(0.01 + 0.1 * i);
    n_c.push_back(reference::kPhotonsPerMilliwatt * p_mw.back());
  }
  const auto line = fit_line(p_mw, n_c);
  r.checks.push_back(rel("eta", "eta from 1.7e6 photons/mW", eta_from_slope(line.slope * 1e3, reference::trampoline_cavity()),
                         reference::kEta, 0.10));
}

// Golden-section maximum of cq_with_tin over log photon number.
std::pair<double, double> numeric_optimum(const MechanicalMode& mode, CavityParams cav, double s) {
  auto f = [&](double ln) {
    cav.n_cav = std::exp(ln);
    return cq_with_tin(mode, cav, s);
  };
  double a = std::log(1.0), b = std::log(1e16);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int i = 0; i < 200 && b - a > 1e-12; ++i) {
    if (f(c) > f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  const double ln = 0.5 * (a + b);
  return {std::exp(ln), f(ln)};
}

void criterion8(CriterionResult& r, unsigned threads) {
  r.title = "cooperativity landscape";
  const auto mode = reference::trampoline_fundamental();
  const auto cav = reference::trampoline_cavity();
  TinReference ref{reference::kTinRin, cav.kappa, mode.coupling_G, mode.temperature, 0.0};

  double worst_n = 0.0, worst_cq = 0.0;
  for (double kf : {1e7, 1e8, 0.65e9, 3e9, 1e10}) {
    CavityParams c = cav;
    c.kappa = two_pi * kf;
    const double s = ref.scaled(c.kappa, mode.coupling_G, mode.temperature, 0.0);
    const auto [n_num, cq_num] = numeric_optimum(mode, c, s);
    worst_n = std::max(worst_n, std::abs(n_num / optimal_photon_number(mode, c, s) - 1.0));
    worst_cq = std::max(worst_cq, std::abs(cq_num / cq_upper_bound(mode, c, s) - 1.0));
  }
  r.checks.push_back(at_most("optimum_location", "numeric vs closed-form optimal n_c", worst_n, 1e-3));
  r.checks.push_back(at_most("optimum_value", "numeric maximum vs resonant bound", worst_cq, 1e-3));

  CavityParams wide = cav;
  wide.kappa = 100.0 * cav.kappa;
  const double s_wide = ref.scaled(wide.kappa, mode.coupling_G, mode.temperature, 0.0);
  r.checks.push_back(at_least("cq_100x_kappa", "attainable Cq at 100x kappa", cq_upper_bound(mode, wide, s_wide), 1.0));
  const double s_ref = ref.scaled(cav.kappa, mode.coupling_G, mode.temperature, 0.0);
  const double p_ref = power_for_photon_number(optimal_photon_number(mode, cav, s_ref), cav);
  const double p_wide = power_for_photon_number(optimal_photon_number(mode, wide, s_wide), wide);
  r.checks.push_back(info("power_100x_kappa", "optimal power ratio at 100x kappa", p_wide / p_ref));

  auto optimal_power = [&](double t) {
    MechanicalMode m = mode;
    m.temperature = t;
    const double s = ref.scaled(cav.kappa, m.coupling_G, t, 0.0);
    return power_for_photon_number(optimal_photon_number(m, cav, s), cav);
  };
  r.checks.push_back(rel("power_t_ratio", "optimal power ratio, 4 K over 300 K", optimal_power(4.0) / optimal_power(300.0),
                         4.0 / 300.0, 0.1));
  auto threshold = [&](double t) {
    MechanicalMode m = mode;
    m.temperature = t;
    return thermal_occupation(m) / vacuum_cooperativity(m, cav);
  };
  r.checks.push_back(info("threshold_t_ratio", "QBA photon-number threshold ratio, 4 K over 300 K",
                          threshold(4.0) / threshold(300.0)));

  LandscapeSpec spec;
  for (int i = 0; i < 100; ++i) spec.kappas.push_back(two_pi * 1e7 * std::pow(1e4, i / 99.0));
  for (int i = 0; i < 100; ++i) spec.powers.push_back(1e-7 * std::pow(1e8, i / 99.0));
  spec.temperatures = {298.0};
  spec.reference = ref;
  const auto t0 = std::chrono::steady_clock::now();
  const auto points = cq_landscape(SystemParams{{mode}, cav, 0}, spec, threads);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.checks.push_back(info("grid_points", "landscape points evaluated", double(points.size())));
  r.checks.push_back(at_most("grid_seconds", "100 x 100 landscape wall time [s]", dt, 60.0));
}

struct Entry {
  double limit_seconds;
  std::function<void(CriterionResult&, unsigned)> run;
};

const Entry& entry(int n) {
  static const std::vector<Entry> table = {
      {1.0, [](CriterionResult& r, unsigned) { criterion1(r); }},
      {1.0, [](CriterionResult& r, unsigned) { criterion2(r); }},
      {300.0, criterion3},
      {300.0, criterion4},
      {900.0, criterion5},
      {600.0, criterion6},
      {120.0, criterion7},
      {60.0, criterion8},
  };
  if (n < 1 || n > kCriterionCount) throw std::out_of_range("no acceptance criterion " + std::to_string(n));
  return table[static_cast<std::size_t>(n - 1)];
}

}  // namespace

CriterionResult run_criterion(int number, unsigned threads) {
  const auto& e = entry(number);
  CriterionResult r;
  r.number = number;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    e.run(r, threads);
  } catch (const std::exception& ex) {
    r.checks.push_back({"error", ex.what(), 0.0, "no exception", false});
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.checks.push_back(at_most("runtime_s", "wall time [s]", r.seconds, e.limit_seconds));
  return r;
}

void print_criterion(std::ostream& out, const CriterionResult& r) {
  out << "criterion " << r.number << ": " << r.title << "\n";
  for (const auto& c : r.checks) {
    out << "  " << std::left << std::setw(5) << (c.informational ? "info" : c.pass ? "PASS" : "FAIL")
        << " " << std::setw(20) << c.id << " " << std::setw(12) << fmt(c.measured) << " "
        << std::setw(22) << c.tolerance << " " << c.description << "\n";
  }
  out << (r.pass() ? "PASS" : "FAIL") << " criterion " << r.number << " (" << fmt(r.seconds)
      << " s)\n\n";
  out.flush();
}

bool run_verification(std::ostream& out, const std::vector<int>& criteria, unsigned threads) {
  std::vector<int> list = criteria;
  if (list.empty()) {
    list.resize(kCriterionCount);
    std::iota(list.begin(), list.end(), 1);
  }
  std::vector<int> failed;
  for (int n : list) {
    const auto r = run_criterion(n, threads);
    print_criterion(out, r);
    if (!r.pass()) failed.push_back(n);
  }
  out << "summary: " << list.size() - failed.size() << "/" << list.size() << " criteria passed";
  if (!failed.empty()) {
    out << "; failed:";
    for (int n : failed) out << " " << n;
  }
  out << "\n";
  return failed.empty();
}

}  // namespace tinsim::app
