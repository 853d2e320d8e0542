#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "tinsim/grid.hpp"

namespace tinsim {

enum class Window { hann, rectangular };

/// Welch estimator settings. Defaults: Hann window, 50% overlap, mean removed
/// per segment. Densities are normalised by the window power sum(w^2).
struct WelchOptions {
  std::size_t segment_length = 1024;
  double overlap = 0.5;
  Window window = Window::hann;
  bool detrend_mean = true;
};

/// Number of segments the options yield for a record of n samples.
std::size_t welch_segment_count(std::size_t n, const WelchOptions& opts);

/// One-sided PSD estimate. Throws std::invalid_argument when the record holds
/// fewer than two segments' worth of samples.
Psd welch_psd(std::span<const double> x, double fs, const WelchOptions& opts,
              PsdUnits units = PsdUnits::relative);

struct CrossSpectrum {
  FrequencyGrid grid;
  std::vector<std::complex<double>> values;  // one-sided <conj(A) B>
  std::size_t n_segments = 0;
};

CrossSpectrum cross_spectrum(std::span<const double> a, std::span<const double> b, double fs,
                             const WelchOptions& opts);

struct CoherenceResult {
  Psd coherence;               // |S_ab|^2 / (S_a S_b), clamped to [0, 1]
  std::vector<double> phase;   // Arg S_ab, radians
  Psd psd_a;
  Psd psd_b;
  std::size_t n_segments = 0;
};

CoherenceResult coherence(std::span<const double> a, std::span<const double> b, double fs,
                          const WelchOptions& opts);

}  // namespace tinsim
