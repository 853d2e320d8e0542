#include "scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tinsim/constants.hpp"

namespace tinsim::app {

using constants::two_pi;

namespace {

std::string at_line(const YAML::Mark& m) {
  return m.line >= 0 ? "line " + std::to_string(m.line + 1) : "unknown line";
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& msg) {
  throw ScenarioError(at_line(node.Mark()) + ": " + msg);
}

// Reads a mapping and remembers which keys were looked up so that anything
// else can be reported as unknown.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string where) : node_(node), where_(std::move(where)) {
    if (!node_.IsMap()) fail(node_, where_ + " must be a mapping");
  }

  template <class T>
  std::optional<T> opt(const std::string& key) {
    known_.insert(key);
    const YAML::Node v = node_[key];
    if (!v) return std::nullopt;
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      fail(v, "invalid value for '" + where_ + "." + key + "'");
    }
  }

  template <class T>
  T req(const std::string& key) {
    auto v = opt<T>(key);
    if (!v) fail(node_, "missing required key '" + where_ + "." + key + "'");
    return *v;
  }

  template <class T>
  void get(const std::string& key, T& target) {
    if (auto v = opt<T>(key)) target = *v;
  }

  YAML::Node child(const std::string& key) {
    known_.insert(key);
    return node_[key];
  }

  void finish() const {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!known_.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where_);
    }
  }

 private:
  YAML::Node node_;
  std::string where_;
  std::set<std::string> known_;
};

DampingModel parse_damping(const YAML::Node& where, const std::string& s) {
  if (s == "viscous") return DampingModel::viscous;
  if (s == "structural") return DampingModel::structural;
  fail(where, "damping must be 'viscous' or 'structural', got '" + s + "'");
}

RangeInput parse_range(const YAML::Node& n, const std::string& where, RangeInput def) {
  if (!n) return def;
  MapReader r(n, where);
  r.get("start", def.start);
  r.get("stop", def.stop);
  r.get("points", def.points);
  r.get("log", def.log);
  r.finish();
  return def;
}

ModeInput parse_mode(const YAML::Node& n, std::size_t i) {
  const std::string where = "modes[" + std::to_string(i) + "]";
  MapReader r(n, where);
  ModeInput m;
  m.mass_kg = r.req<double>("mass_kg");
  m.frequency_hz = r.req<double>("frequency_hz");
  m.quality = r.opt<double>("quality");
  m.linewidth_hz = r.opt<double>("linewidth_hz");
  m.g0_hz = r.opt<double>("g0_hz");
  m.coupling_hz_per_m = r.opt<double>("coupling_hz_per_m");
  m.temperature_k = r.opt<double>("temperature_k");
  if (auto d = r.opt<std::string>("damping")) m.damping = parse_damping(n, *d);
  r.finish();
  if (m.quality.has_value() == m.linewidth_hz.has_value()) {
    fail(n, where + " needs exactly one of 'quality' or 'linewidth_hz'");
  }
  if (m.g0_hz && m.coupling_hz_per_m) {
    fail(n, where + " takes at most one of 'g0_hz' or 'coupling_hz_per_m'");
  }
  return m;
}

CavityInput parse_cavity(const YAML::Node& n) {
  MapReader r(n, "cavity");
  CavityInput c;
  c.kappa_hz = r.opt<double>("kappa_hz");
  c.length_m = r.opt<double>("length_m");
  c.finesse = r.opt<double>("finesse");
  r.get("wavelength_m", c.wavelength_m);
  r.get("eta", c.eta);
  r.get("detuning_nu", c.detuning_nu);
  c.photon_number = r.opt<double>("photon_number");
  c.power_w = r.opt<double>("power_w");
  r.finish();
  const bool by_finesse = c.length_m && c.finesse;
  if (c.kappa_hz.has_value() == by_finesse || (c.length_m.has_value() != c.finesse.has_value())) {
    fail(n, "cavity needs either 'kappa_hz' or both 'length_m' and 'finesse'");
  }
  if (c.photon_number && c.power_w) fail(n, "cavity takes at most one of 'photon_number' or 'power_w'");
  return c;
}

OracleInput parse_oracle(const YAML::Node& n) {
  MapReader r(n, "oracle");
  OracleInput o;
  o.fs_hz = r.req<double>("fs_hz");
  o.duration_s = r.req<double>("duration_s");
  r.get("settle_s", o.settle_s);
  r.get("adiabatic_cavity", o.adiabatic_cavity);
  r.get("radiation_pressure", o.radiation_pressure);
  r.get("qba_force", o.qba_force);
  r.get("shot_noise", o.shot_noise);
  r.get("phase_imprecision_m2_per_hz", o.phase_imprecision_m2_per_hz);
  r.get("force_coupling_scale", o.force_coupling_scale);
  r.get("welch_segment", o.welch_segment);
  r.get("welch_overlap", o.welch_overlap);
  r.get("record_binary", o.record_binary);
  r.get("record_csv", o.record_csv);
  r.get("photon_numbers", o.photon_numbers);
  r.get("tinba_lo_hz", o.tinba_lo_hz);
  r.get("tinba_hi_hz", o.tinba_hi_hz);
  r.get("imprecision_lo_hz", o.imprecision_lo_hz);
  r.get("imprecision_hi_hz", o.imprecision_hi_hz);
  r.finish();
  return o;
}

FeedbackInput parse_feedback(const YAML::Node& n, std::size_t i) {
  MapReader r(n, "feedback[" + std::to_string(i) + "]");
  FeedbackInput f;
  f.targets = r.req<std::vector<std::size_t>>("targets");
  f.gain_ns_per_m = r.req<double>("gain_ns_per_m");
  f.center_hz = r.req<double>("center_hz");
  f.width_hz = r.req<double>("width_hz");
  r.finish();
  return f;
}

LandscapeInput parse_landscape(const YAML::Node& n) {
  MapReader r(n, "landscape");
  LandscapeInput l;
  l.kappa_hz = parse_range(r.child("kappa_hz"), "landscape.kappa_hz", l.kappa_hz);
  l.power_w = parse_range(r.child("power_w"), "landscape.power_w", l.power_w);
  r.get("temperatures_k", l.temperatures_k);
  r.get("nu", l.nu);
  r.get("reference_s_rin_tin", l.reference_s_rin_tin);
  l.reference_kappa_hz = r.opt<double>("reference_kappa_hz");
  l.reference_temperature_k = r.opt<double>("reference_temperature_k");
  r.get("reference_nu", l.reference_nu);
  r.finish();
  return l;
}

CalibrationInput parse_calibration(const YAML::Node& n) {
  MapReader r(n, "calibration");
  CalibrationInput c;
  r.get("t_eff_k", c.t_eff_k);
  if (const YAML::Node t = r.child("tone")) {
    MapReader tr(t, "calibration.tone");
    c.tone = ToneInput{tr.req<double>("beta_rad"), tr.req<double>("frequency_hz")};
    tr.finish();
  }
  c.spectrum_csv = r.opt<std::string>("spectrum_csv");
  r.get("spring_nus", c.spring_nus);
  c.spring_n_c0 = r.opt<double>("spring_n_c0");
  r.get("spring_shifts_hz", c.spring_shifts_hz);
  c.photons_per_mw = r.opt<double>("photons_per_mw");
  c.peaks_csv = r.opt<std::string>("peaks_csv");
  r.finish();
  if (!c.spring_shifts_hz.empty() && c.spring_shifts_hz.size() != c.spring_nus.size()) {
    fail(n, "calibration.spring_shifts_hz must match spring_nus in length");
  }
  return c;
}

}  // namespace

std::vector<double> RangeInput::values() const {
  if (points == 0) throw ScenarioError("range needs at least one point");
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = start;
    return v;
  }
  if (log && !(start > 0.0 && stop > 0.0)) throw ScenarioError("log range needs positive bounds");
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    v[i] = log ? start * std::pow(stop / start, t) : start + t * (stop - start);
  }
  return v;
}

ScenarioInput parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ScenarioError(at_line(e.mark) + ": " + e.msg);
  }
  MapReader r(root, "scenario");
  ScenarioInput in;
  r.get("name", in.name);
  r.get("seed", in.seed);
  in.temperature_k = r.opt<double>("temperature_k");
  r.get("probe_index", in.probe_index);

  const YAML::Node modes = r.child("modes");
  if (!modes || !modes.IsSequence() || modes.size() == 0) {
    fail(modes ? modes : root, "'modes' must be a non-empty list");
  }
  for (std::size_t i = 0; i < modes.size(); ++i) in.modes.push_back(parse_mode(modes[i], i));

  const YAML::Node cav = r.child("cavity");
  if (!cav) fail(root, "missing required section 'cavity'");
  in.cavity = parse_cavity(cav);

  if (const YAML::Node g = r.child("grid")) {
    MapReader gr(g, "grid");
    gr.get("f_start_hz", in.grid.f_start_hz);
    gr.get("df_hz", in.grid.df_hz);
    gr.get("n_points", in.grid.n_points);
    gr.finish();
  }
  if (const YAML::Node t = r.child("tin")) {
    MapReader tr(t, "tin");
    in.tin.nu_sweep = parse_range(tr.child("nu_sweep"), "tin.nu_sweep", in.tin.nu_sweep);
    tr.get("band_lo_hz", in.tin.band_lo_hz);
    tr.get("band_hi_hz", in.tin.band_hi_hz);
    tr.finish();
  }
  if (const YAML::Node o = r.child("oracle")) in.oracle = parse_oracle(o);
  if (const YAML::Node f = r.child("feedback")) {
    if (!f.IsSequence()) fail(f, "'feedback' must be a list");
    for (std::size_t i = 0; i < f.size(); ++i) in.feedback.push_back(parse_feedback(f[i], i));
  }
  if (const YAML::Node l = r.child("landscape")) in.landscape = parse_landscape(l);
  if (const YAML::Node c = r.child("calibration")) in.calibration = parse_calibration(c);
  r.finish();
  return in;
}

ScenarioInput load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioError("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

template <class T>
void emit_opt(YAML::Emitter& e, const char* key, const std::optional<T>& v) {
  if (v) e << YAML::Key << key << YAML::Value << *v;
}

void emit_range(YAML::Emitter& e, const char* key, const RangeInput& r) {
  e << YAML::Key << key << YAML::Value << YAML::BeginMap << YAML::Key << "start" << YAML::Value
    << r.start << YAML::Key << "stop" << YAML::Value << r.stop << YAML::Key << "points"
    << YAML::Value << r.points << YAML::Key << "log" << YAML::Value << r.log << YAML::EndMap;
}

template <class T>
void emit_list(YAML::Emitter& e, const char* key, const std::vector<T>& v) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& x : v) e << x;
  e << YAML::EndSeq;
}

}  // namespace

std::string serialize_scenario(const ScenarioInput& in) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << in.name;
  e << YAML::Key << "seed" << YAML::Value << in.seed;
  emit_opt(e, "temperature_k", in.temperature_k);
  e << YAML::Key << "probe_index" << YAML::Value << in.probe_index;

  e << YAML::Key << "modes" << YAML::Value << YAML::BeginSeq;
  for (const auto& m : in.modes) {
    e << YAML::BeginMap;
    e << YAML::Key << "mass_kg" << YAML::Value << m.mass_kg;
    e << YAML::Key << "frequency_hz" << YAML::Value << m.frequency_hz;
    emit_opt(e, "quality", m.quality);
    emit_opt(e, "linewidth_hz", m.linewidth_hz);
    emit_opt(e, "g0_hz", m.g0_hz);
    emit_opt(e, "coupling_hz_per_m", m.coupling_hz_per_m);
    emit_opt(e, "temperature_k", m.temperature_k);
    e << YAML::Key << "damping" << YAML::Value
      << (m.damping == DampingModel::viscous ? "viscous" : "structural");
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;

  const auto& c = in.cavity;
  e << YAML::Key << "cavity" << YAML::Value << YAML::BeginMap;
  emit_opt(e, "kappa_hz", c.kappa_hz);
  emit_opt(e, "length_m", c.length_m);
  emit_opt(e, "finesse", c.finesse);
  e << YAML::Key << "wavelength_m" << YAML::Value << c.wavelength_m;
  e << YAML::Key << "eta" << YAML::Value << c.eta;
  e << YAML::Key << "detuning_nu" << YAML::Value << c.detuning_nu;
  emit_opt(e, "photon_number", c.photon_number);
  emit_opt(e, "power_w", c.power_w);
  e << YAML::EndMap;

  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap << YAML::Key << "f_start_hz"
    << YAML::Value << in.grid.f_start_hz << YAML::Key << "df_hz" << YAML::Value << in.grid.df_hz
    << YAML::Key << "n_points" << YAML::Value << in.grid.n_points << YAML::EndMap;

  e << YAML::Key << "tin" << YAML::Value << YAML::BeginMap;
  emit_range(e, "nu_sweep", in.tin.nu_sweep);
  e << YAML::Key << "band_lo_hz" << YAML::Value << in.tin.band_lo_hz;
  e << YAML::Key << "band_hi_hz" << YAML::Value << in.tin.band_hi_hz;
  e << YAML::EndMap;

  if (const auto& o = in.oracle) {
    e << YAML::Key << "oracle" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "fs_hz" << YAML::Value << o->fs_hz;
    e << YAML::Key << "duration_s" << YAML::Value << o->duration_s;
    e << YAML::Key << "settle_s" << YAML::Value << o->settle_s;
    e << YAML::Key << "adiabatic_cavity" << YAML::Value << o->adiabatic_cavity;
    e << YAML::Key << "radiation_pressure" << YAML::Value << o->radiation_pressure;
    e << YAML::Key << "qba_force" << YAML::Value << o->qba_force;
    e << YAML::Key << "shot_noise" << YAML::Value << o->shot_noise;
    e << YAML::Key << "phase_imprecision_m2_per_hz" << YAML::Value << o->phase_imprecision_m2_per_hz;
    emit_list(e, "force_coupling_scale", o->force_coupling_scale);
    e << YAML::Key << "welch_segment" << YAML::Value << o->welch_segment;
    e << YAML::Key << "welch_overlap" << YAML::Value << o->welch_overlap;
    e << YAML::Key << "record_binary" << YAML::Value << o->record_binary;
    e << YAML::Key << "record_csv" << YAML::Value << o->record_csv;
    emit_list(e, "photon_numbers", o->photon_numbers);
    e << YAML::Key << "tinba_lo_hz" << YAML::Value << o->tinba_lo_hz;
    e << YAML::Key << "tinba_hi_hz" << YAML::Value << o->tinba_hi_hz;
    e << YAML::Key << "imprecision_lo_hz" << YAML::Value << o->imprecision_lo_hz;
    e << YAML::Key << "imprecision_hi_hz" << YAML::Value << o->imprecision_hi_hz;
    e << YAML::EndMap;
  }
  if (!in.feedback.empty()) {
    e << YAML::Key << "feedback" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : in.feedback) {
      e << YAML::BeginMap;
      emit_list(e, "targets", f.targets);
      e << YAML::Key << "gain_ns_per_m" << YAML::Value << f.gain_ns_per_m;
      e << YAML::Key << "center_hz" << YAML::Value << f.center_hz;
      e << YAML::Key << "width_hz" << YAML::Value << f.width_hz;
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  if (const auto& l = in.landscape) {
    e << YAML::Key << "landscape" << YAML::Value << YAML::BeginMap;
    emit_range(e, "kappa_hz", l->kappa_hz);
    emit_range(e, "power_w", l->power_w);
    emit_list(e, "temperatures_k", l->temperatures_k);
    e << YAML::Key << "nu" << YAML::Value << l->nu;
    e << YAML::Key << "reference_s_rin_tin" << YAML::Value << l->reference_s_rin_tin;
    emit_opt(e, "reference_kappa_hz", l->reference_kappa_hz);
    emit_opt(e, "reference_temperature_k", l->reference_temperature_k);
    e << YAML::Key << "reference_nu" << YAML::Value << l->reference_nu;
    e << YAML::EndMap;
  }
  if (const auto& c2 = in.calibration) {
    e << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "t_eff_k" << YAML::Value << c2->t_eff_k;
    if (c2->tone) {
      e << YAML::Key << "tone" << YAML::Value << YAML::BeginMap << YAML::Key << "beta_rad"
        << YAML::Value << c2->tone->beta_rad << YAML::Key << "frequency_hz" << YAML::Value
        << c2->tone->frequency_hz << YAML::EndMap;
    }
    emit_opt(e, "spectrum_csv", c2->spectrum_csv);
    emit_list(e, "spring_nus", c2->spring_nus);
    emit_opt(e, "spring_n_c0", c2->spring_n_c0);
    emit_list(e, "spring_shifts_hz", c2->spring_shifts_hz);
    emit_opt(e, "photons_per_mw", c2->photons_per_mw);
    emit_opt(e, "peaks_csv", c2->peaks_csv);
    e << YAML::EndMap;
  }
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

SystemParams build_system(const ScenarioInput& in) {
  SystemParams s;
  for (std::size_t i = 0; i < in.modes.size(); ++i) {
    const auto& mi = in.modes[i];
    MechanicalMode m;
    m.mass = mi.mass_kg;
    m.omega_m = two_pi * mi.frequency_hz;
    m.gamma_m = mi.quality ? m.omega_m / *mi.quality : two_pi * *mi.linewidth_hz;
    const auto t = mi.temperature_k ? mi.temperature_k : in.temperature_k;
    if (!t) throw ScenarioError("modes[" + std::to_string(i) + "]: no temperature_k given");
    m.temperature = *t;
    m.damping = mi.damping;
    try {
      if (mi.g0_hz) m.coupling_G = coupling_for_g0(two_pi * *mi.g0_hz, m.mass, m.omega_m);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("modes[" + std::to_string(i) + "]: " + e.what());
    }
    if (mi.coupling_hz_per_m) m.coupling_G = two_pi * *mi.coupling_hz_per_m;
    s.modes.push_back(m);
  }
  const auto& ci = in.cavity;
  try {
    s.cavity.kappa = ci.kappa_hz ? two_pi * *ci.kappa_hz
                                 : CavityParams::kappa_from_finesse(*ci.length_m, *ci.finesse);
    if (!(ci.wavelength_m > 0.0)) throw std::invalid_argument("wavelength_m must be > 0");
    s.cavity.omega_laser = two_pi * constants::c / ci.wavelength_m;
    s.cavity.eta = ci.eta;
    s.cavity.detuning_nu = ci.detuning_nu;
    if (ci.photon_number) s.cavity.n_cav = *ci.photon_number;
    if (ci.power_w) s.cavity.n_cav = photon_number_from_power(*ci.power_w, s.cavity);
    s.probe_index = in.probe_index;
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("invalid system: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ScenarioError(std::string("invalid system: ") + e.what());
  }
  return s;
}

FrequencyGrid build_grid(const ScenarioInput& in) {
  FrequencyGrid g{in.grid.f_start_hz, in.grid.df_hz, in.grid.n_points};
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("invalid grid: ") + e.what());
  }
  return g;
}

SimConfig build_sim_config(const ScenarioInput& in, const SystemParams& system) {
  if (!in.oracle) throw ScenarioError("scenario has no 'oracle' section");
  const auto& o = *in.oracle;
  SimConfig c;
  c.system = system;
  c.fs = o.fs_hz;
  c.duration = o.duration_s;
  c.seed = in.seed;
  c.settle_time = o.settle_s;
  c.adiabatic_cavity = o.adiabatic_cavity;
  c.radiation_pressure = o.radiation_pressure;
  c.qba_force = o.qba_force;
  c.shot_noise = o.shot_noise;
  c.phase_imprecision = o.phase_imprecision_m2_per_hz;
  c.force_coupling_scale = o.force_coupling_scale;
  for (const auto& f : in.feedback) {
    c.feedback.push_back({f.targets, f.gain_ns_per_m, two_pi * f.center_hz, two_pi * f.width_hz});
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("invalid oracle settings: ") + e.what());
  }
  return c;
}

LandscapeSpec build_landscape(const ScenarioInput& in, const SystemParams& system) {
  if (!in.landscape) throw ScenarioError("scenario has no 'landscape' section");
  const auto& l = *in.landscape;
  LandscapeSpec s;
  for (double k : l.kappa_hz.values()) s.kappas.push_back(two_pi * k);
  s.powers = l.power_w.values();
  s.temperatures = l.temperatures_k;
  s.nu = l.nu;
  s.reference.s_rin_tin = l.reference_s_rin_tin;
  s.reference.kappa = l.reference_kappa_hz ? two_pi * *l.reference_kappa_hz : system.cavity.kappa;
  s.reference.coupling_G = system.probe().coupling_G;
  s.reference.temperature =
      l.reference_temperature_k ? *l.reference_temperature_k : system.probe().temperature;
  s.reference.nu = l.reference_nu;
  return s;
}

}  // namespace tinsim::app
