#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tinsim {

/// Uniform frequency grid in Hz.
struct FrequencyGrid {
  double f_start = 0.0;
  double df = 1.0;
  std::size_t n_points = 2;

  void validate() const;
  double frequency(std::size_t i) const { return f_start + df * static_cast<double>(i); }
  double f_end() const { return frequency(n_points - 1); }
  std::vector<double> frequencies() const;
  /// Index of the bin nearest to f, clamped to the grid.
  std::size_t nearest_index(double f) const;

  /// Grid with n points covering [f0, f1] inclusive.
  static FrequencyGrid span(double f0, double f1, std::size_t n);

  bool operator==(const FrequencyGrid&) const = default;
};

enum class PsdUnits {
  displacement,    // m^2/Hz
  relative,        // 1/Hz (RIN or relative detuning nu)
  force,           // N^2/Hz
  phase,           // rad^2/Hz
  frequency_noise, // (rad/s)^2/Hz, cavity frequency fluctuations
  dimensionless,
};

enum class Sidedness { one_sided, two_sided };

std::string_view to_string(PsdUnits u);
std::string_view to_string(Sidedness s);
PsdUnits parse_units(std::string_view text);
Sidedness parse_sidedness(std::string_view text);

/// Sampled power spectral density on a uniform grid.
struct Psd {
  FrequencyGrid grid;
  std::vector<double> values;
  PsdUnits units = PsdUnits::relative;
  Sidedness sidedness = Sidedness::one_sided;

  Psd() = default;
  Psd(FrequencyGrid g, PsdUnits u, Sidedness s = Sidedness::one_sided);
  Psd(FrequencyGrid g, std::vector<double> v, PsdUnits u, Sidedness s = Sidedness::one_sided);

  /// Throws if values are negative, non-finite or mis-sized.
  void validate() const;

  std::size_t size() const { return values.size(); }
  /// Trapezoidal integral over the whole grid.
  double integrate() const;
  /// Trapezoidal integral restricted to bins with f in [f0, f1].
  double band_integral(double f0, double f1) const;
  /// Mean value of bins with f in [f0, f1].
  double band_mean(double f0, double f1) const;
  /// Linear interpolation; zero outside the grid.
  double value_at(double f) const;

  Psd scaled(double factor) const;
  Psd& operator+=(const Psd& other);
};

Psd operator+(Psd a, const Psd& b);

/// Complex frequency response sampled on a grid (m/N for susceptibilities).
struct Susceptibility {
  FrequencyGrid grid;
  std::vector<std::complex<double>> values;
};

}  // namespace tinsim
