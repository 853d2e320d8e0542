#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tinsim/grid.hpp"
#include "tinsim/landscape.hpp"
#include "tinsim/oracle.hpp"
#include "tinsim/phys.hpp"

namespace tinsim::app {

/// Raised for malformed scenarios; the message carries the line number.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Values as written in the file (Hz, not rad/s), so that serialisation is lossless.

struct ModeInput {
  double mass_kg = 0.0;
  double frequency_hz = 0.0;
  std::optional<double> quality;
  std::optional<double> linewidth_hz;
  std::optional<double> g0_hz;
  std::optional<double> coupling_hz_per_m;  // G / 2 pi
  std::optional<double> temperature_k;
  DampingModel damping = DampingModel::viscous;
};

struct CavityInput {
  std::optional<double> kappa_hz;
  std::optional<double> length_m;
  std::optional<double> finesse;
  double wavelength_m = 786e-9;
  double eta = 1.0;
  double detuning_nu = 0.0;
  std::optional<double> photon_number;
  std::optional<double> power_w;
};

struct GridInput {
  double f_start_hz = 0.0;
  double df_hz = 1.0;
  std::size_t n_points = 1024;
};

struct RangeInput {
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 1;
  bool log = false;

  std::vector<double> values() const;
};

struct TinInput {
  RangeInput nu_sweep{-1.5, 1.5, 61, false};
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
};

struct OracleInput {
  double fs_hz = 0.0;
  double duration_s = 0.0;
  double settle_s = 0.0;
  bool adiabatic_cavity = true;
  bool radiation_pressure = true;
  bool qba_force = false;
  bool shot_noise = true;
  double phase_imprecision_m2_per_hz = 0.0;
  std::vector<double> force_coupling_scale;
  std::size_t welch_segment = 4096;
  double welch_overlap = 0.5;
  bool record_binary = true;
  bool record_csv = false;
  std::vector<double> photon_numbers;  // TINBA sweep
  double tinba_lo_hz = 0.0;
  double tinba_hi_hz = 0.0;
  double imprecision_lo_hz = 0.0;
  double imprecision_hi_hz = 0.0;
};

struct FeedbackInput {
  std::vector<std::size_t> targets;
  double gain_ns_per_m = 0.0;
  double center_hz = 0.0;
  double width_hz = 0.0;
};

struct LandscapeInput {
  RangeInput kappa_hz{1e8, 1e11, 100, true};
  RangeInput power_w{1e-6, 1.0, 100, true};
  std::vector<double> temperatures_k{298.0};
  double nu = 0.0;
  double reference_s_rin_tin = 1e-11;
  std::optional<double> reference_kappa_hz;
  std::optional<double> reference_temperature_k;
  double reference_nu = 0.0;
};

struct ToneInput {
  double beta_rad = 0.0;
  double frequency_hz = 0.0;
};

struct CalibrationInput {
  double t_eff_k = 300.0;
  std::optional<ToneInput> tone;
  std::optional<std::string> spectrum_csv;  // cavity frequency noise for the tone method
  std::vector<double> spring_nus;
  std::optional<double> spring_n_c0;  // synthetic truth when no shifts are given
  std::vector<double> spring_shifts_hz;
  std::optional<double> photons_per_mw;
  std::optional<std::string> peaks_csv;  // displacement spectrum for peak fits
};

struct ScenarioInput {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  std::optional<double> temperature_k;
  std::size_t probe_index = 0;
  std::vector<ModeInput> modes;
  CavityInput cavity;
  GridInput grid;
  TinInput tin;
  std::optional<OracleInput> oracle;
  std::vector<FeedbackInput> feedback;
  std::optional<LandscapeInput> landscape;
  std::optional<CalibrationInput> calibration;
};

/// Throws ScenarioError (unknown keys, wrong types, missing fields) with line numbers.
ScenarioInput parse_scenario(const std::string& text);
ScenarioInput load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const ScenarioInput& in);

/// Converts to validated physics parameters; throws ScenarioError.
SystemParams build_system(const ScenarioInput& in);
FrequencyGrid build_grid(const ScenarioInput& in);
SimConfig build_sim_config(const ScenarioInput& in, const SystemParams& system);
LandscapeSpec build_landscape(const ScenarioInput& in, const SystemParams& system);

}  // namespace tinsim::app
