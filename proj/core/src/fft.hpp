#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tinsim::detail {

/// Real-to-complex FFT of fixed length backed by FFTW. Planning is serialised
/// internally; execution on distinct instances is thread-safe.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  /// Input buffer of length n.
  std::span<double> input() { return {in_, n_}; }
  /// Transforms input() and returns the n/2+1 non-negative frequency bins.
  std::span<const std::complex<double>> forward();

 private:
  std::size_t n_;
  double* in_;
  std::complex<double>* out_;
  void* plan_;
};

/// Linear (acyclic) convolution c[k] = sum_j a[j] b[k-j], length |a|+|b|-1,
/// computed with zero padding to a power of two.
std::vector<double> linear_convolve(std::span<const double> a, std::span<const double> b);

std::size_t next_pow2(std::size_t n);

}  // namespace tinsim::detail
