#include "tinsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <complex>
#include <limits>
#include <string>

#include "tinsim/constants.hpp"
#include "tinsim/philox.hpp"
#include "tinsim/transduction.hpp"

namespace tinsim {

using constants::hbar;
using constants::k_B;
using constants::two_pi;

void FeedbackConfig::validate(std::size_t n_modes) const {
  if (!(gain >= 0.0)) throw std::invalid_argument("feedback: gain must be >= 0");
  if (!(band_width > 0.0)) throw std::invalid_argument("feedback: band_width must be > 0");
  if (!(band_center > 0.0)) throw std::invalid_argument("feedback: band_center must be > 0");
  if (target_mode_indices.empty()) throw std::invalid_argument("feedback: no target modes");
  for (auto i : target_mode_indices) {
    if (i >= n_modes) throw std::invalid_argument("feedback: target mode index out of range");
  }
}

std::size_t SimConfig::n_samples() const {
  return static_cast<std::size_t>(std::llround(duration * fs));
}

void SimConfig::validate() const {
  system.validate();
  if (!(fs > 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("SimConfig: fs and duration must be > 0");
  }
  double f_max = 0.0;
  for (const auto& m : system.modes) {
    if (m.damping != DampingModel::viscous) {
      throw std::invalid_argument("SimConfig: the time-domain oracle supports viscous damping only");
    }
    f_max = std::max(f_max, m.omega_m / two_pi);
  }
  if (fs < 20.0 * f_max) {
    throw std::invalid_argument("SimConfig: sample rate " + std::to_string(fs) +
                                " Hz is below 20x the highest mode frequency " +
                                std::to_string(f_max) + " Hz");
  }
  const double total = (duration + settle_time) * fs;
  if (!(settle_time >= 0.0)) throw std::invalid_argument("SimConfig: settle_time must be >= 0");
  if (n_samples() < 2) throw std::invalid_argument("SimConfig: fewer than 2 samples");
  if (total > static_cast<double>(max_samples)) {
    throw std::invalid_argument("SimConfig: duration * fs exceeds the sample cap of " +
                                std::to_string(max_samples));
  }
  if (!force_coupling_scale.empty() && force_coupling_scale.size() != system.modes.size()) {
    throw std::invalid_argument("SimConfig: force_coupling_scale must have one entry per mode");
  }
  if (!(phase_imprecision >= 0.0)) {
    throw std::invalid_argument("SimConfig: phase_imprecision must be >= 0");
  }
  if ((radiation_pressure || qba_force || shot_noise || record.intensity) &&
      !(system.cavity.n_cav > 0.0)) {
    throw std::invalid_argument("SimConfig: n_cav must be > 0 for optical channels");
  }
  for (const auto& fb : feedback) {
    fb.validate(system.modes.size());
    for (auto i : fb.target_mode_indices) {
      if (system.modes[i].coupling_G == 0.0) {
        throw std::invalid_argument("feedback: target mode has zero coupling");
      }
    }
  }
  if (drive) {
    if (drive->mode_index >= system.modes.size()) {
      throw std::invalid_argument("SimConfig: drive mode index out of range");
    }
    if (!(drive->omega >= 0.0)) throw std::invalid_argument("SimConfig: drive omega must be >= 0");
  }
}

void TimeSeriesRecord::validate() const {
  if (!(fs > 0.0)) throw std::invalid_argument("TimeSeriesRecord: fs must be > 0");
  auto check = [&](const std::vector<double>& v, const char* name) {
    if (!v.empty() && v.size() != n_samples) {
      throw std::invalid_argument(std::string("TimeSeriesRecord: channel length mismatch: ") + name);
    }
  };
  for (const auto& d : displacement) check(d, "displacement");
  check(detuning, "detuning");
  check(intensity, "intensity");
  check(phase, "phase");
  if (!displacement.empty() && displacement.size() != system.modes.size()) {
    throw std::invalid_argument("TimeSeriesRecord: displacement channel count != mode count");
  }
}

namespace {

// Exact one-step map of a viscously damped oscillator driven by thermal noise
// and a force held constant over the step.
struct ModePropagator {
  double m11, m12, m21, m22;
  double l11, l21, l22;
  double bx, bv;  // response to unit force / mass over one step
  double limit;   // instability threshold

  ModePropagator(const MechanicalMode& mode, double dt) {
    const double w2 = mode.omega_m * mode.omega_m;
    const double g = mode.gamma_m;
    const std::complex<double> wd = std::sqrt(std::complex<double>(w2 - 0.25 * g * g, 0.0));
    const double decay = std::exp(-0.5 * g * dt);
    const double c = std::cos(wd * dt).real();
    const double s = std::abs(wd) * dt < 1e-8 ? dt : (std::sin(wd * dt) / wd).real();
    m11 = decay * (c + 0.5 * g * s);
    m12 = decay * s;
    m21 = -decay * w2 * s;
    m22 = decay * (c - 0.5 * g * s);

    const double cx = k_B * mode.temperature / (mode.mass * w2);
    const double cv = k_B * mode.temperature / mode.mass;
    const double s11 = cx - (m11 * m11 * cx + m12 * m12 * cv);
    const double s12 = -(m11 * m21 * cx + m12 * m22 * cv);
    const double s22 = cv - (m21 * m21 * cx + m22 * m22 * cv);
    l11 = std::sqrt(std::max(s11, 0.0));
    l21 = l11 > 0.0 ? s12 / l11 : 0.0;
    l22 = std::sqrt(std::max(s22 - l21 * l21, 0.0));

    bx = -(g * m12 + (m22 - 1.0)) / w2;
    bv = m12;
    limit = cx > 0.0 ? 1e6 * std::sqrt(cx) : std::numeric_limits<double>::infinity();
  }
};

// Band-pass biquad with unit gain and zero phase at the centre.
struct BandPass {
  double b0, b2, a1, a2;
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;

  BandPass(double center, double width, double fs) {
    const double w0 = center / fs;
    const double q = center / width;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0 = alpha / a0;
    b2 = -alpha / a0;
    a1 = -2.0 * std::cos(w0) / a0;
    a2 = (1.0 - alpha) / a0;
  }

  double step(double x) {
    const double y = b0 * x + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
};

constexpr std::uint32_t kInitialStream = 0x10000;
constexpr std::uint32_t kShotStream = 0x20000;
constexpr std::uint32_t kImprecisionStream = 0x20001;
constexpr std::uint32_t kQbaStream = 0x20002;

}  // namespace

TimeSeriesRecord simulate(const SimConfig& config) {
  config.validate();
  const SystemParams& sys = config.system;
  const CavityParams& cav = sys.cavity;
  const std::size_t n_modes = sys.modes.size();
  const std::size_t n_out = config.n_samples();
  const auto n_settle = static_cast<std::size_t>(std::llround(config.settle_time * config.fs));
  const double dt = 1.0 / config.fs;
  const double nu = cav.detuning_nu;
  const bool optical = cav.n_cav > 0.0;

  std::vector<ModePropagator> prop;
  std::vector<double> x(n_modes), v(n_modes), nu_per_x(n_modes), rp_scale(n_modes), y_weight(n_modes);
  const double g_probe = sys.probe().coupling_G;
  for (std::size_t i = 0; i < n_modes; ++i) {
    const auto& m = sys.modes[i];
    prop.emplace_back(m, dt);
    nu_per_x[i] = 2.0 * m.coupling_G / cav.kappa;
    const double scale = config.force_coupling_scale.empty() ? 1.0 : config.force_coupling_scale[i];
    rp_scale[i] = config.radiation_pressure ? scale * hbar * m.coupling_G * cav.n_cav : 0.0;
    y_weight[i] = g_probe != 0.0 ? m.coupling_G / g_probe : (i == sys.probe_index ? 1.0 : 0.0);

    const auto init = NormalStream(config.seed, kInitialStream + static_cast<std::uint32_t>(i)).block(0);
    const double w2 = m.omega_m * m.omega_m;
    x[i] = init[0] * std::sqrt(k_B * m.temperature / (m.mass * w2));
    v[i] = init[1] * std::sqrt(k_B * m.temperature / m.mass);
  }

  std::vector<NormalStream> thermal;
  for (std::size_t i = 0; i < n_modes; ++i) {
    thermal.emplace_back(config.seed, static_cast<std::uint32_t>(i));
  }
  const NormalStream shot_rng(config.seed, kShotStream);
  const NormalStream imp_rng(config.seed, kImprecisionStream);
  const NormalStream qba_rng(config.seed, kQbaStream);

  const double s_shot = optical ? shot_rin_level(cav) : 0.0;
  const double shot_sigma = config.shot_noise ? std::sqrt(s_shot * config.fs / 2.0) : 0.0;
  const double imp_sigma = std::sqrt(config.phase_imprecision * config.fs / 2.0);
  const double qba_sigma = config.qba_force ? std::sqrt(s_shot * config.fs / 2.0) : 0.0;

  std::vector<BandPass> filters;
  std::vector<double> fb_prev(config.feedback.size(), 0.0);
  for (const auto& fb : config.feedback) filters.emplace_back(fb.band_center, fb.band_width, config.fs);

  TimeSeriesRecord rec;
  rec.fs = config.fs;
  rec.n_samples = n_out;
  rec.system = sys;
  rec.seed = config.seed;
  rec.shot_rin = config.shot_noise && config.record.intensity ? s_shot : 0.0;
  rec.phase_imprecision = config.phase_imprecision;
  rec.radiation_pressure = config.radiation_pressure;
  rec.force_coupling_scale = config.force_coupling_scale;
  if (config.record.displacement) rec.displacement.assign(n_modes, std::vector<double>(n_out));
  if (config.record.detuning) rec.detuning.resize(n_out);
  if (config.record.intensity) rec.intensity.resize(n_out);
  if (config.record.phase) rec.phase.resize(n_out);

  auto detuning_shift = [&](const std::vector<double>& pos) {
    double d = 0.0;
    for (std::size_t i = 0; i < n_modes; ++i) d += nu_per_x[i] * pos[i];
    return d;
  };

  // Cavity field for the non-adiabatic option, normalised so that the
  // steady state is 1 / (1 - i (nu + dnu)).
  using cplx = std::complex<double>;
  auto field_steady = [&](double dnu) { return 1.0 / cplx(1.0, -(nu + dnu)); };
  cplx field = field_steady(detuning_shift(x));
  auto field_ratio = [&](const cplx& a) { return std::norm(a) * (1.0 + nu * nu); };

  std::vector<double> force(n_modes), x_pred(n_modes), rp0(n_modes);
  std::vector<std::array<double, 4>> draws(n_modes);
  const std::size_t n_steps = n_settle + n_out;
  for (std::size_t step = 0; step < n_steps; ++step) {
    const double dnu = detuning_shift(x);
    const double ratio = config.adiabatic_cavity ? lorentzian_ratio(nu, dnu) : field_ratio(field);

    double y = imp_sigma > 0.0 ? imp_sigma * imp_rng.block(step)[0] : 0.0;
    for (std::size_t i = 0; i < n_modes; ++i) y += y_weight[i] * x[i];

    if (step >= n_settle) {
      const std::size_t k = step - n_settle;
      if (config.record.displacement) {
        for (std::size_t i = 0; i < n_modes; ++i) rec.displacement[i][k] = x[i];
      }
      if (config.record.detuning) rec.detuning[k] = nu + dnu;
      if (config.record.intensity) {
        rec.intensity[k] = ratio + (shot_sigma > 0.0 ? shot_sigma * shot_rng.block(step)[0] : 0.0);
      }
      if (config.record.phase) rec.phase[k] = y;
    }

    // Forces that do not depend on the end-of-step state.
    std::fill(force.begin(), force.end(), 0.0);
    for (std::size_t f = 0; f < config.feedback.size(); ++f) {
      const auto& fb = config.feedback[f];
      const double band = filters[f].step(y);
      const double velocity = (band - fb_prev[f]) * config.fs;
      fb_prev[f] = band;
      for (auto i : fb.target_mode_indices) {
        force[i] -= fb.gain * velocity * (g_probe / sys.modes[i].coupling_G);
      }
    }
    if (qba_sigma > 0.0) {
      const double dn = qba_sigma * qba_rng.block(step)[0];
      for (std::size_t i = 0; i < n_modes; ++i) force[i] += rp_scale[i] * dn;
    }
    if (config.drive) {
      const double t_mid = (static_cast<double>(step) + 0.5) * dt - config.settle_time;
      force[config.drive->mode_index] +=
          config.drive->amplitude * std::cos(config.drive->omega * t_mid + config.drive->phase);
    }

    for (std::size_t i = 0; i < n_modes; ++i) rp0[i] = rp_scale[i] * (ratio - 1.0);

    // End-of-step radiation pressure: predicted state (adiabatic) or the
    // field advanced with the detuning held over the step.
    double ratio_end = ratio;
    for (std::size_t i = 0; i < n_modes; ++i) draws[i] = thermal[i].block(step);

    auto advance = [&](std::size_t i, double f_total, double& xo, double& vo) {
      const auto& p = prop[i];
      const double a = f_total / sys.modes[i].mass;
      const double n0 = draws[i][0];
      const double n1 = draws[i][1];
      xo = p.m11 * x[i] + p.m12 * v[i] + p.l11 * n0 + p.bx * a;
      vo = p.m21 * x[i] + p.m22 * v[i] + p.l21 * n0 + p.l22 * n1 + p.bv * a;
    };

    if (config.radiation_pressure) {
      if (config.adiabatic_cavity) {
        double v_unused;
        for (std::size_t i = 0; i < n_modes; ++i) advance(i, force[i] + rp0[i], x_pred[i], v_unused);
        ratio_end = lorentzian_ratio(nu, detuning_shift(x_pred));
      } else {
        const cplx lambda(-0.5 * cav.kappa, 0.5 * cav.kappa * (nu + dnu));
        const cplx ss = field_steady(dnu);
        field = ss + (field - ss) * std::exp(lambda * dt);
        ratio_end = field_ratio(field);
      }
    } else if (!config.adiabatic_cavity) {
      const cplx lambda(-0.5 * cav.kappa, 0.5 * cav.kappa * (nu + dnu));
      const cplx ss = field_steady(dnu);
      field = ss + (field - ss) * std::exp(lambda * dt);
    }

    for (std::size_t i = 0; i < n_modes; ++i) {
      const double rp = 0.5 * (rp0[i] + rp_scale[i] * (ratio_end - 1.0));
      double xn, vn;
      advance(i, force[i] + rp, xn, vn);
      x[i] = xn;
      v[i] = vn;
      if (!(std::abs(xn) <= prop[i].limit)) {
        throw SimulationUnstable("simulate: mode " + std::to_string(i) +
                                 " exceeded 1e6 x its thermal amplitude at t = " +
                                 std::to_string(static_cast<double>(step + 1) * dt) + " s");
      }
    }
  }
  return rec;
}

}  // namespace tinsim
