#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tinsim/phys.hpp"

namespace tinsim {

/// Narrow-band derivative feedback: the phase channel is band-passed around
/// `band_center`, differentiated, and fed back as -gain * v on each target.
struct FeedbackConfig {
  std::vector<std::size_t> target_mode_indices;
  double gain = 0.0;         // N s / m
  double band_center = 0.0;  // rad/s
  double band_width = 0.0;   // rad/s

  void validate(std::size_t n_modes) const;
};

struct RecordFlags {
  bool displacement = true;
  bool detuning = true;
  bool intensity = true;
  bool phase = true;
};

/// Coherent force tone, F(t) = amplitude * cos(omega t + phase), on one mode.
struct DriveTone {
  std::size_t mode_index = 0;
  double amplitude = 0.0;  // N
  double omega = 0.0;      // rad/s
  double phase = 0.0;
};

struct SimConfig {
  SystemParams system;
  double fs = 0.0;        // Hz
  double duration = 0.0;  // s
  std::uint64_t seed = 0;
  bool adiabatic_cavity = true;
  std::vector<FeedbackConfig> feedback;
  RecordFlags record;

  /// Radiation-pressure force from the intensity fluctuation on each mode.
  bool radiation_pressure = true;
  /// Per-mode multiplier on the radiation-pressure force (empty = all 1).
  std::vector<double> force_coupling_scale;
  /// White quantum backaction force, correlated across modes.
  bool qba_force = false;
  bool shot_noise = true;
  /// Additive white imprecision on the phase channel, one-sided m^2/Hz.
  double phase_imprecision = 0.0;
  /// Simulated but unrecorded lead-in.
  double settle_time = 0.0;
  std::size_t max_samples = std::size_t{1} << 27;
  std::optional<DriveTone> drive;

  std::size_t n_samples() const;
  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// Sampled oracle output. Channels that were not requested are empty.
struct TimeSeriesRecord {
  double fs = 0.0;
  std::size_t n_samples = 0;
  SystemParams system;
  std::uint64_t seed = 0;
  double shot_rin = 0.0;           // one-sided level added to `intensity`, 1/Hz
  double phase_imprecision = 0.0;  // one-sided level added to `phase`, m^2/Hz
  bool radiation_pressure = true;
  std::vector<double> force_coupling_scale;  // empty = all 1

  std::vector<std::vector<double>> displacement;  // per mode, m
  std::vector<double> detuning;   // nu + dnu(t)
  std::vector<double> intensity;  // n_c(t) / <n_c> plus shot noise
  std::vector<double> phase;      // apparent probe displacement, m

  double time(std::size_t i) const { return static_cast<double>(i) / fs; }
  void validate() const;
  bool operator==(const TimeSeriesRecord&) const = default;
};

class SimulationUnstable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrates the coupled mode + cavity Langevin equations. Each mode is
/// propagated exactly over a step with the exact thermal increment; the
/// radiation-pressure, feedback and drive forces are held over the step
/// (trapezoidal predictor). Throws SimulationUnstable when a mode exceeds
/// 1e6 times its thermal amplitude.
TimeSeriesRecord simulate(const SimConfig& config);

}  // namespace tinsim
