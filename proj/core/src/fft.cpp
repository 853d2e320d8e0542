#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace tinsim::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("RealFft: length must be >= 2");
  in_ = fftw_alloc_real(n);
  out_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n / 2 + 1));
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, reinterpret_cast<fftw_complex*>(out_),
                               FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

std::span<const std::complex<double>> RealFft::forward() {
  fftw_execute(static_cast<fftw_plan>(plan_));
  return {out_, n_ / 2 + 1};
}

std::vector<double> linear_convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t n_out = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(n_out);
  const std::size_t nc = n / 2 + 1;

  double* ra = fftw_alloc_real(n);
  double* rb = fftw_alloc_real(n);
  fftw_complex* ca = fftw_alloc_complex(nc);
  fftw_complex* cb = fftw_alloc_complex(nc);
  fftw_plan pa, pb, pinv;
  {
    std::lock_guard lock(planner_mutex());
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), ra, ca, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), rb, cb, FFTW_ESTIMATE);
    pinv = fftw_plan_dft_c2r_1d(static_cast<int>(n), ca, ra, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    ra[i] = i < a.size() ? a[i] : 0.0;
    rb[i] = i < b.size() ? b[i] : 0.0;
  }
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t k = 0; k < nc; ++k) {
    const double re = ca[k][0] * cb[k][0] - ca[k][1] * cb[k][1];
    const double im = ca[k][0] * cb[k][1] + ca[k][1] * cb[k][0];
    ca[k][0] = re;
    ca[k][1] = im;
  }
  fftw_execute(pinv);
  std::vector<double> out(n_out);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n_out; ++i) out[i] = ra[i] * scale;
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pinv);
  }
  fftw_free(ra);
  fftw_free(rb);
  fftw_free(ca);
  fftw_free(cb);
  return out;
}

}  // namespace tinsim::detail
