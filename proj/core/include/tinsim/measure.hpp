#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tinsim/grid.hpp"
#include "tinsim/oracle.hpp"
#include "tinsim/welch.hpp"

namespace tinsim {

/// Welch PSD of the mean-normalised intensity channel minus the record's shot
/// floor, clamped at zero. Throws std::invalid_argument without an intensity channel.
Psd measure_tin(const TimeSeriesRecord& record, const WelchOptions& opts);

/// Welch PSD of the phase channel (apparent probe displacement).
Psd measure_apparent_displacement(const TimeSeriesRecord& record, const WelchOptions& opts);

struct TinbaOptions {
  double f_lo = 0.0;  // Hz, analysis band
  double f_hi = 0.0;
  WelchOptions welch;
  /// Remove the record's white phase imprecision from the band power.
  bool subtract_imprecision = true;
  /// Further floor to remove (e.g. analytic thermal motion), m^2/Hz at f in Hz.
  std::function<double(const TimeSeriesRecord&, double)> extra_floor;
};

struct ScalingPoint {
  double n_c = 0.0;
  double band_power = 0.0;  // after floor subtraction, m^2
};

struct ScalingReport {
  double slope = 0.0;
  double intercept = 0.0;  // log10 band power at n_c = 1
  double rms_residual = 0.0;
  std::vector<ScalingPoint> points;
};

/// Log-log fit of band power versus photon number. Needs >= 4 records whose
/// photon numbers span >= 1.5 decades; throws std::domain_error when a
/// floor-subtracted band power is not positive.
ScalingReport measure_tinba(std::span<const TimeSeriesRecord> records, const TinbaOptions& opts);

struct CoherenceReport {
  CoherenceResult measured;   // phase channel (a) vs intensity channel (b)
  Psd predicted;              // (S_x^TIN / S_y)(S_RIN^TIN / S_RIN)
  Psd tin_rin;                // measured intensity PSD minus shot floor
  std::size_t n_segments = 0;
};

/// Phase-intensity coherence with the linear-response prediction built from
/// the measured spectra and the record's mode susceptibilities.
/// Needs at least 50 Welch segments.
CoherenceReport measure_coherence(const TimeSeriesRecord& record, const WelchOptions& opts);

}  // namespace tinsim
