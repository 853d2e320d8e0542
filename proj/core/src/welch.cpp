#include "tinsim/welch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "tinsim/constants.hpp"

namespace tinsim {

namespace {

std::vector<double> make_window(std::size_t n, Window w) {
  std::vector<double> out(n, 1.0);
  if (w == Window::hann) {
    // Periodic Hann: exact 50% overlap-add.
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = 0.5 - 0.5 * std::cos(constants::two_pi * static_cast<double>(i) /
                                    static_cast<double>(n));
    }
  }
  return out;
}

std::size_t hop_length(const WelchOptions& opts) {
  const auto overlap = static_cast<std::size_t>(
      std::floor(static_cast<double>(opts.segment_length) * opts.overlap));
  return opts.segment_length - overlap;
}

void check_options(std::size_t n, double fs, const WelchOptions& opts) {
  if (!(fs > 0.0)) throw std::invalid_argument("welch: sample rate must be > 0");
  if (opts.segment_length < 4) throw std::invalid_argument("welch: segment_length must be >= 4");
  if (!(opts.overlap >= 0.0 && opts.overlap < 1.0)) {
    throw std::invalid_argument("welch: overlap must lie in [0, 1)");
  }
  if (n < 2 * opts.segment_length) {
    throw std::invalid_argument("welch: insufficient data (need at least 2 segments)");
  }
}

// Windowed, optionally mean-removed segment loaded into the FFT input.
void load_segment(std::span<const double> x, std::size_t start, const std::vector<double>& w,
                  bool detrend, std::span<double> dst) {
  const std::size_t n = w.size();
  double mean = 0.0;
  if (detrend) {
    for (std::size_t i = 0; i < n; ++i) mean += x[start + i];
    mean /= static_cast<double>(n);
  }
  for (std::size_t i = 0; i < n; ++i) dst[i] = (x[start + i] - mean) * w[i];
}

double window_power(const std::vector<double>& w) {
  double u = 0.0;
  for (double v : w) u += v * v;
  return u;
}

}  // namespace

std::size_t welch_segment_count(std::size_t n, const WelchOptions& opts) {
  if (n < opts.segment_length) return 0;
  return (n - opts.segment_length) / hop_length(opts) + 1;
}

Psd welch_psd(std::span<const double> x, double fs, const WelchOptions& opts, PsdUnits units) {
  check_options(x.size(), fs, opts);
  const std::size_t n = opts.segment_length;
  const std::size_t hop = hop_length(opts);
  const auto w = make_window(n, opts.window);
  const double scale = 1.0 / (fs * window_power(w));

  detail::RealFft fft(n);
  const std::size_t nf = n / 2 + 1;
  std::vector<double> acc(nf, 0.0);
  std::size_t segments = 0;
  for (std::size_t start = 0; start + n <= x.size(); start += hop) {
    load_segment(x, start, w, opts.detrend_mean, fft.input());
    const auto spec = fft.forward();
    for (std::size_t k = 0; k < nf; ++k) acc[k] += std::norm(spec[k]);
    ++segments;
  }

  FrequencyGrid grid{0.0, fs / static_cast<double>(n), nf};
  Psd out(grid, units);
  for (std::size_t k = 0; k < nf; ++k) {
    const double one_sided = (k == 0 || (n % 2 == 0 && k == nf - 1)) ? 1.0 : 2.0;
    out.values[k] = acc[k] * scale * one_sided / static_cast<double>(segments);
  }
  return out;
}

namespace {

struct PairAccumulation {
  FrequencyGrid grid;
  std::vector<double> saa;
  std::vector<double> sbb;
  std::vector<std::complex<double>> sab;
  std::size_t segments = 0;
};

PairAccumulation accumulate_pair(std::span<const double> a, std::span<const double> b, double fs,
                                 const WelchOptions& opts) {
  if (a.size() != b.size()) throw std::invalid_argument("cross_spectrum: length mismatch");
  check_options(a.size(), fs, opts);
  const std::size_t n = opts.segment_length;
  const std::size_t hop = hop_length(opts);
  const auto w = make_window(n, opts.window);
  const double scale = 1.0 / (fs * window_power(w));

  detail::RealFft fa(n);
  detail::RealFft fb(n);
  const std::size_t nf = n / 2 + 1;
  PairAccumulation acc{FrequencyGrid{0.0, fs / static_cast<double>(n), nf},
                       std::vector<double>(nf, 0.0), std::vector<double>(nf, 0.0),
                       std::vector<std::complex<double>>(nf), 0};
  for (std::size_t start = 0; start + n <= a.size(); start += hop) {
    load_segment(a, start, w, opts.detrend_mean, fa.input());
    load_segment(b, start, w, opts.detrend_mean, fb.input());
    const auto sa = fa.forward();
    const auto sb = fb.forward();
    for (std::size_t k = 0; k < nf; ++k) {
      const std::complex<double> cross = std::conj(sa[k]) * sb[k];
      acc.saa[k] += std::norm(sa[k]);
      acc.sbb[k] += std::norm(sb[k]);
      acc.sab[k] += cross;
    }
    ++acc.segments;
  }
  for (std::size_t k = 0; k < nf; ++k) {
    const double one_sided = (k == 0 || (n % 2 == 0 && k == nf - 1)) ? 1.0 : 2.0;
    const double f = scale * one_sided / static_cast<double>(acc.segments);
    acc.saa[k] *= f;
    acc.sbb[k] *= f;
    acc.sab[k] *= f;
  }
  return acc;
}

}  // namespace

CrossSpectrum cross_spectrum(std::span<const double> a, std::span<const double> b, double fs,
                             const WelchOptions& opts) {
  PairAccumulation acc = accumulate_pair(a, b, fs, opts);
  return {acc.grid, std::move(acc.sab), acc.segments};
}

CoherenceResult coherence(std::span<const double> a, std::span<const double> b, double fs,
                          const WelchOptions& opts) {
  PairAccumulation acc = accumulate_pair(a, b, fs, opts);
  if (acc.segments < 2) throw std::invalid_argument("coherence: need at least 2 averages");
  CoherenceResult out;
  out.n_segments = acc.segments;
  out.psd_a = Psd(acc.grid, acc.saa, PsdUnits::relative);
  out.psd_b = Psd(acc.grid, acc.sbb, PsdUnits::relative);
  out.coherence = Psd(acc.grid, PsdUnits::dimensionless);
  out.phase.resize(acc.grid.n_points);
  for (std::size_t k = 0; k < acc.grid.n_points; ++k) {
    const double denom = acc.saa[k] * acc.sbb[k];
    const double c = denom > 0.0 ? std::norm(acc.sab[k]) / denom : 0.0;
    out.coherence.values[k] = std::clamp(c, 0.0, 1.0);
    out.phase[k] = std::arg(acc.sab[k]);
  }
  return out;
}

}  // namespace tinsim
