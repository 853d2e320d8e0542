#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "tinsim/backaction.hpp"
#include "tinsim/calibration.hpp"
#include "tinsim/constants.hpp"
#include "tinsim/landscape.hpp"
#include "tinsim/measure.hpp"
#include "tinsim/oracle.hpp"
#include "tinsim/psd_csv.hpp"
#include "tinsim/record_io.hpp"
#include "tinsim/spectra.hpp"
#include "tinsim/transduction.hpp"
#include "tinsim/welch.hpp"

#ifndef TINSIM_VERSION
#define TINSIM_VERSION "unknown"
#endif

namespace tinsim::app {

using constants::hbar;
using constants::two_pi;

OutputDir::OutputDir(const RunOptions& opts, const std::string& command,
                     const ScenarioInput& scenario)
    : dir_(opts.out_root / (command + "-" + scenario.name)),
      command_(command),
      scenario_name_(scenario.name) {
  std::filesystem::create_directories(dir_);
  std::ofstream(file("scenario.yaml")) << serialize_scenario(scenario);
}

std::filesystem::path OutputDir::file(const std::string& name) {
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
  return dir_ / name;
}

void OutputDir::finish(std::uint64_t seed) const {
  nlohmann::ordered_json m;
  m["tool"] = "tinsim";
  m["version"] = TINSIM_VERSION;
  m["command"] = command_;
  m["scenario"] = scenario_name_;
  m["seed"] = seed;
  m["files"] = files_;
  std::ofstream(dir_ / "manifest.json") << m.dump(2) << "\n";
}

namespace {

ScenarioInput with_seed(ScenarioInput in, const RunOptions& opts) {
  if (opts.seed) in.seed = *opts.seed;
  return in;
}

std::ofstream open_csv(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << std::setprecision(12);
  return f;
}

// Modes with the optical spring and damping folded in. Viscous thermal motion
// through chi_eff is a Lorentzian at the shifted frequency and total damping
// whose area is reduced by gamma / gamma_eff, i.e. a colder bath.
SystemParams effective_system(const SystemParams& system) {
  SystemParams out = system;
  if (!(system.cavity.n_cav > 0.0)) return out;
  for (std::size_t i = 0; i < out.modes.size(); ++i) {
    auto& m = out.modes[i];
    if (m.coupling_G == 0.0) continue;
    const auto db = dynamical_backaction(m, system.cavity);
    if (!db.stable) {
      throw std::domain_error("mode " + std::to_string(i) +
                              " is unstable under dynamical backaction at this detuning");
    }
    const double gamma_eff = m.gamma_m + db.opt_damping;
    m.temperature *= m.gamma_m / gamma_eff;
    m.omega_m += db.spring_shift;
    m.gamma_m = gamma_eff;
  }
  return out;
}

std::vector<double> resample(const Psd& p, const FrequencyGrid& g) {
  std::vector<double> v(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) v[i] = p.value_at(g.frequency(i));
  return v;
}

// Apparent probe displacement per unit radiation-pressure RIN:
// |sum_n (G_n / G_p) chi_n hbar G_n n_c|^2.
std::vector<double> rin_to_displacement(const SystemParams& eff, const FrequencyGrid& g) {
  const auto& p = eff.probe();
  std::vector<std::complex<double>> t(g.n_points);
  for (const auto& m : eff.modes) {
    if (m.coupling_G == 0.0) continue;
    const auto chi = effective_susceptibility(m, 0.0, 0.0, g);
    const double w = m.coupling_G / p.coupling_G * hbar * m.coupling_G * eff.cavity.n_cav;
    for (std::size_t i = 0; i < g.n_points; ++i) t[i] += w * chi.values[i];
  }
  std::vector<double> out(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) out[i] = std::norm(t[i]);
  return out;
}

std::pair<double, double> tin_band(const ScenarioInput& in, const Psd& s_nu2) {
  double lo = in.tin.band_lo_hz, hi = in.tin.band_hi_hz;
  if (!(hi > lo)) {
    lo = s_nu2.grid.df;
    hi = s_nu2.grid.f_end();
  }
  return {lo, hi};
}

void write_report(const std::filesystem::path& p, const CalibrationReport& r) {
  std::ofstream f(p);
  r.write(f);
}

WelchOptions welch_from(const OracleInput& o) {
  WelchOptions w;
  w.segment_length = o.welch_segment;
  w.overlap = o.welch_overlap;
  return w;
}

}  // namespace

TinSpectra compute_tin_spectra(const SystemParams& system, const FrequencyGrid& grid) {
  grid.validate();
  const double df = grid.df;
  const auto n = static_cast<std::size_t>(std::ceil(grid.f_end() / df));
  const FrequencyGrid in_grid{0.5 * df, df, std::max<std::size_t>(n, 2)};
  TinSpectra t;
  t.s_nu = multimode_frequency_noise(system, in_grid, Sampling::bin_average);
  t.s_nu2 = self_convolve(t.s_nu);
  return t;
}

int cmd_budget(const ScenarioInput& raw, const RunOptions& opts, std::ostream& log) {
  const auto in = with_seed(raw, opts);
  const auto system = build_system(in);
  const auto grid = build_grid(in);
  const auto& cav = system.cavity;
  if (!(cav.n_cav > 0.0)) throw ScenarioError("budget needs cavity.photon_number or cavity.power_w");

  const auto eff = effective_system(system);
  const auto& probe = eff.probe();
  const auto tin = compute_tin_spectra(eff, grid);
  const double nu = cav.detuning_nu;

  BudgetComponents c;
  c.grid = grid;

  // Phase readout, in probe displacement units.
  std::vector<double> thermal(grid.n_points, 0.0);
  for (std::size_t k = 0; k < eff.modes.size(); ++k) {
    const auto& m = eff.modes[k];
    double w = 1.0;
    if (k != eff.probe_index) {
      if (probe.coupling_G == 0.0 || m.coupling_G == 0.0) continue;
      w = (m.coupling_G / probe.coupling_G) * (m.coupling_G / probe.coupling_G);
    }
    const auto s = thermal_displacement_psd(m, grid, Sampling::bin_average);
    for (std::size_t i = 0; i < grid.n_points; ++i) thermal[i] += w * s.values[i];
  }
  if (probe.coupling_G != 0.0) {
    c.s_y.emplace_back(component::imp_shot,
                       std::vector<double>(grid.n_points, shot_imprecision_psd(probe, cav)));
  }
  c.s_y.emplace_back(component::thermal, thermal);

  const auto shot = shot_rin(cav, grid);
  const auto tin_on_grid = resample(tin_rin(tin.s_nu2, nu), grid);
  if (probe.coupling_G != 0.0) {
    const auto h = rin_to_displacement(eff, grid);
    std::vector<double> qba(grid.n_points), tinba(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
      qba[i] = h[i] * shot.values[i];
      tinba[i] = h[i] * tin_on_grid[i];
    }
    c.s_y.emplace_back(component::qba, qba);
    c.s_y.emplace_back(component::tinba, tinba);
  }

  // Intensity readout.
  c.s_rin.emplace_back(component::shot, shot.values);
  c.s_rin.emplace_back(component::tin, tin_on_grid);
  const double c1 = expansion_at(nu).c1;
  if (c1 != 0.0) {
    auto lin = resample(tin.s_nu, grid);
    for (auto& v : lin) v *= c1 * c1;
    c.s_rin.emplace_back(component::thermal, lin);
  }
  const auto budgets = assemble_budgets(c);

  OutputDir out(opts, "budget", in);
  {
    std::ofstream f(out.file("budget_sy.csv"));
    budgets.s_y.write_csv(f);
  }
  {
    std::ofstream f(out.file("budget_rin.csv"));
    budgets.s_rin.write_csv(f);
  }

  const auto& bare = system.probe();
  const auto [lo, hi] = tin_band(in, tin.s_nu2);
  const double tin_level = tin_rin(tin.s_nu2, nu).band_mean(lo, hi);
  CalibrationReport r;
  r.add("c0", vacuum_cooperativity(bare, cav));
  r.add("n_th", thermal_occupation(bare));
  r.add("x_th_m", rms_thermal_displacement(bare));
  r.add("nonlinearity_g_xth_over_kappa", nonlinearity_parameter(bare, cav));
  r.add("sqrt_s_f_thermal_n_per_rthz", std::sqrt(thermal_force_psd(bare)));
  r.add("s_nu_zp_per_hz", zero_point_detuning_psd(bare, cav));
  r.add("n_cav", cav.n_cav);
  r.add("shot_rin_per_hz", shot_rin_level(cav));
  r.add("tin_band_lo_hz", lo);
  r.add("tin_band_hi_hz", hi);
  r.add("tin_rin_band_mean_per_hz", tin_level);
  if (bare.coupling_G != 0.0 && tin_level > 0.0) {
    const auto q = quantum_cooperativity(bare, cav, tin_level);
    r.add("cq_ideal", q.cq_ideal);
    r.add("cq_with_tin", q.cq_with_tin);
    r.add("cq_upper_bound", q.cq_upper_bound);
    r.add("optimal_n_cav", q.optimal_n_cav);
    r.add("condition_photon_number", q.conditions.photon_number ? "met" : "not met");
    r.add("condition_quality_factor", q.conditions.quality_factor ? "met" : "not met");
    r.add("condition_tin_level", q.conditions.tin_level ? "met" : "not met");
  }
  write_report(out.file("summary.txt"), r);
  out.finish(in.seed);
  r.write(log);
  log << "wrote " << out.path().string() << "\n";
  return kExitOk;
}

int cmd_tin(const ScenarioInput& raw, const RunOptions& opts, std::ostream& log) {
  const auto in = with_seed(raw, opts);
  const auto system = build_system(in);
  const auto grid = build_grid(in);
  const auto eff = effective_system(system);
  const auto tin = compute_tin_spectra(eff, grid);
  const double nu = system.cavity.detuning_nu;

  OutputDir out(opts, "tin", in);
  write_psd_csv(out.file("s_nu.csv").string(), tin.s_nu);
  write_psd_csv(out.file("s_nu2.csv").string(), tin.s_nu2);
  const auto rin = tin_rin(tin.s_nu2, nu);
  write_psd_csv(out.file("tin_rin.csv").string(), rin);

  // TIN is linear in the prefactor, so the sweep reuses one convolution.
  const auto [lo, hi] = tin_band(in, tin.s_nu2);
  const double band = tin.s_nu2.band_integral(lo, hi);
  const double at_zero = tin_prefactor(0.0) * band;
  auto f = open_csv(out.file("nu_sweep.csv"));
  f << "# band_lo_hz=" << lo << " band_hi_hz=" << hi << "\n";
  f << "nu,tin_band_power,relative_db\n";
  double min_db = 0.0;
  for (double v : in.tin.nu_sweep.values()) {
    const double p = tin_prefactor(v) * band;
    const double db = p > 0.0 ? 10.0 * std::log10(p / at_zero) : -std::numeric_limits<double>::infinity();
    min_db = std::min(min_db, db);
    f << v << "," << p << "," << db << "\n";
  }
  f.close();

  CalibrationReport r;
  r.add("nu", nu);
  r.add("tin_band_power", tin_prefactor(nu) * band);
  r.add("tin_band_power_nu0", at_zero);
  r.add("magic_detuning", magic_detuning());
  r.add("tin_band_power_magic", tin_prefactor(magic_detuning()) * band);
  r.add("sweep_min_relative_db", min_db);
  write_report(out.file("summary.txt"), r);
  out.finish(in.seed);
  r.write(log);
  log << "wrote " << out.path().string() << "\n";
  return kExitOk;
}

int cmd_landscape(const ScenarioInput& raw, const RunOptions& opts, std::ostream& log) {
  const auto in = with_seed(raw, opts);
  const auto system = build_system(in);
  const auto spec = build_landscape(in, system);
  const auto points = cq_landscape(system, spec, opts.threads);
  const auto curve = cq_optimum_curve(system, spec);

  OutputDir out(opts, "landscape", in);
  {
    std::ofstream f(out.file("landscape.csv"));
    write_landscape_csv(f, spec, points);
  }
  auto f = open_csv(out.file("optimum.csv"));
  f << "kappa_hz,temperature_k,n_c,p_in_w,cq\n";
  for (const auto& o : curve) {
    f << o.kappa / two_pi << "," << o.temperature << "," << o.n_c << "," << o.p_in << "," << o.cq
      << "\n";
  }
  f.close();

  const auto best = std::max_element(points.begin(), points.end(),
                                     [](const auto& a, const auto& b) { return a.cq < b.cq; });
  CalibrationReport r;
  r.add("points", static_cast<double>(points.size()));
  if (best != points.end()) {
    r.add("max_cq", best->cq);
    r.add("max_cq_kappa_hz", best->kappa / two_pi);
    r.add("max_cq_p_in_w", best->p_in);
    r.add("max_cq_temperature_k", best->temperature);
  }
  write_report(out.file("summary.txt"), r);
  out.finish(in.seed);
  r.write(log);
  log << "wrote " << out.path().string() << "\n";
  return kExitOk;
}

namespace {

// Thermal motion of every mode as seen in the probe's phase channel.
double apparent_thermal(const TimeSeriesRecord& rec, double f) {
  const auto& p = rec.system.probe();
  const FrequencyGrid g{f, 1e-3, 2};
  double s = 0.0;
  for (std::size_t k = 0; k < rec.system.modes.size(); ++k) {
    const auto& m = rec.system.modes[k];
    const double w = k == rec.system.probe_index ? 1.0 : m.coupling_G / p.coupling_G;
    if (w == 0.0) continue;
    s += w * w * thermal_displacement_psd(m, g).values[0];
  }
  return s;
}

}  // namespace

int cmd_simulate(const ScenarioInput& raw, const RunOptions& opts, std::ostream& log) {
  const auto in = with_seed(raw, opts);
  const auto system = build_system(in);
  const auto config = build_sim_config(in, system);
  const auto& o = *in.oracle;
  const auto welch = welch_from(o);

  OutputDir out(opts, "simulate", in);
  const auto rec = simulate(config);
  if (o.record_binary) write_record_binary(out.file("record.bin"), rec);
  if (o.record_csv) write_record_csv(out.file("record.csv"), rec);

  CalibrationReport r;
  r.add("samples", static_cast<double>(rec.n_samples));
  r.add("fs_hz", rec.fs);
  for (std::size_t k = 0; k < rec.displacement.size(); ++k) {
    const auto s = welch_psd(rec.displacement[k], rec.fs, welch, PsdUnits::displacement);
    write_psd_csv(out.file("s_x" + std::to_string(k) + ".csv").string(), s);
    double var = 0.0;
    for (double x : rec.displacement[k]) var += x * x;
    var /= static_cast<double>(rec.n_samples);
    r.add("x" + std::to_string(k) + "_rms_over_x_th",
          std::sqrt(var) / rms_thermal_displacement(system.modes[k]));
  }
  if (!rec.phase.empty()) {
    write_psd_csv(out.file("s_y.csv").string(), measure_apparent_displacement(rec, welch));
  }
  if (!rec.intensity.empty()) {
    write_psd_csv(out.file("tin_measured.csv").string(), measure_tin(rec, welch));
  }
  if (!rec.intensity.empty() && !rec.phase.empty() &&
      welch_segment_count(rec.n_samples, welch) >= 50 && system.probe().coupling_G != 0.0) {
    const auto coh = measure_coherence(rec, welch);
    auto f = open_csv(out.file("coherence.csv"));
    f << "# segments=" << coh.n_segments << "\n";
    f << "frequency_hz,coherence,phase_rad,predicted\n";
    const auto& g = coh.measured.coherence.grid;
    for (std::size_t i = 0; i < g.n_points; ++i) {
      f << g.frequency(i) << "," << coh.measured.coherence.values[i] << ","
        << coh.measured.phase[i] << "," << coh.predicted.values[i] << "\n";
    }
    r.add("coherence_segments", static_cast<double>(coh.n_segments));
  }

  if (!o.photon_numbers.empty()) {
    // Shot imprecision scales as 1/n_c from the level given at the base photon number.
    const double n_base = system.cavity.n_cav;
    std::vector<TimeSeriesRecord> recs(o.photon_numbers.size());
    std::vector<std::exception_ptr> errors(recs.size());
    {
      const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, recs.size()));
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t k = w; k < recs.size(); k += workers) {
            try {
              SimConfig c = config;
              c.system.cavity.n_cav = o.photon_numbers[k];
              c.seed = in.seed + 1 + k;
              if (n_base > 0.0) c.phase_imprecision *= n_base / o.photon_numbers[k];
              c.record.displacement = false;
              c.record.detuning = false;
              recs[k] = simulate(c);
            } catch (...) {
              errors[k] = std::current_exception();
            }
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    auto f = open_csv(out.file("tinba_sweep.csv"));
    f << "band,n_c,band_power_m2\n";
    auto report_band = [&](const char* name, double lo, double hi, bool tinba) {
      if (!(hi > lo)) return;
      TinbaOptions t;
      t.f_lo = lo;
      t.f_hi = hi;
      t.welch = welch;
      t.subtract_imprecision = tinba;
      if (tinba) t.extra_floor = apparent_thermal;
      const auto rep = measure_tinba(recs, t);
      for (const auto& p : rep.points) f << name << "," << p.n_c << "," << p.band_power << "\n";
      r.add(std::string(name) + "_slope", rep.slope);
      r.add(std::string(name) + "_rms_residual", rep.rms_residual);
    };
    report_band("tinba", o.tinba_lo_hz, o.tinba_hi_hz, true);
    report_band("imprecision", o.imprecision_lo_hz, o.imprecision_hi_hz, false);
  }

  write_report(out.file("summary.txt"), r);
  out.finish(in.seed);
  r.write(log);
  log << "wrote " << out.path().string() << "\n";
  return kExitOk;
}

int cmd_calibrate(const ScenarioInput& raw, const RunOptions& opts, std::ostream& log) {
  const auto in = with_seed(raw, opts);
  if (!in.calibration) throw ScenarioError("scenario has no 'calibration' section");
  const auto& cal = *in.calibration;
  const auto system = build_system(in);
  const auto& probe = system.probe();
  OutputDir out(opts, "calibrate", in);
  CalibrationReport r;

  if (cal.tone) {
    const CalibrationTone tone{cal.tone->beta_rad, two_pi * cal.tone->frequency_hz};
    Psd spectrum;
    if (cal.spectrum_csv) {
      spectrum = read_psd_csv(*cal.spectrum_csv);
      r.add("tone_source", *cal.spectrum_csv);
    } else {
      spectrum = synthetic_tone_spectrum(probe, tone, cal.t_eff_k, build_grid(in));
      write_psd_csv(out.file("tone_spectrum.csv").string(), spectrum);
      r.add("tone_source", "synthetic");
      r.add("g0_true_hz", vacuum_coupling_rate(probe) / two_pi);
    }
    r.add("g0_hz", g0_from_tone(spectrum, tone, cal.t_eff_k, probe) / two_pi);
  }

  if (!cal.spring_nus.empty()) {
    std::vector<SpringPoint> pts;
    if (!cal.spring_shifts_hz.empty()) {
      for (std::size_t i = 0; i < cal.spring_nus.size(); ++i) {
        pts.push_back({cal.spring_nus[i], two_pi * cal.spring_shifts_hz[i]});
      }
      r.add("spring_source", "measured");
    } else {
      if (!cal.spring_n_c0) throw ScenarioError("calibration needs spring_shifts_hz or spring_n_c0");
      pts = synthetic_spring_shifts(probe, system.cavity, *cal.spring_n_c0, cal.spring_nus);
      r.add("spring_source", "synthetic");
      r.add("n_c0_true", *cal.spring_n_c0);
    }
    const auto fit = nc_from_spring_fit(pts, probe, system.cavity);
    r.add("n_c0", fit.n_c0);
    r.add("spring_rms_residual_hz", fit.rms_residual / two_pi);
  }

  if (cal.photons_per_mw) {
    r.add("eta", eta_from_slope(*cal.photons_per_mw * 1e3, system.cavity));
  }

  {
    Psd spectrum;
    if (cal.peaks_csv) {
      spectrum = read_psd_csv(*cal.peaks_csv);
    } else {
      spectrum = synthetic_thermal_spectrum(system.modes, build_grid(in));
    }
    std::vector<PeakGuess> guesses;
    for (const auto& m : system.modes) {
      if (spectrum.grid.f_start < constants::to_hz(m.omega_m) &&
          constants::to_hz(m.omega_m) < spectrum.grid.f_end()) {
        guesses.push_back({m.omega_m, m.gamma_m, rms_thermal_displacement(m) * rms_thermal_displacement(m),
                           m.damping});
      }
    }
    if (!guesses.empty()) {
      PeakFitOptions po;
      po.temperature = probe.temperature;
      const auto fits = fit_thermal_peaks(spectrum, guesses, po);
      for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto k = std::to_string(i);
        r.add("peak" + k + "_frequency_hz", fits[i].center / two_pi);
        r.add("peak" + k + "_linewidth_hz", fits[i].linewidth / two_pi);
        r.add("peak" + k + "_mass_kg", fits[i].mass_eff);
      }
    }
  }

  write_report(out.file("calibration.txt"), r);
  out.finish(in.seed);
  r.write(log);
  log << "wrote " << out.path().string() << "\n";
  return kExitOk;
}

}  // namespace tinsim::app
