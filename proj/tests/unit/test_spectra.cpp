#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "tinsim/constants.hpp"
#include "tinsim/reference.hpp"
#include "tinsim/spectra.hpp"

using namespace tinsim;
using constants::k_B;
using constants::two_pi;

namespace {

MechanicalMode desk_mode(double f_hz, double q) {
  MechanicalMode m{1e-9, two_pi * f_hz, two_pi * f_hz / q, 1e12, 300.0};
  return m;
}

double equipartition(const MechanicalMode& m) {
  return k_B * m.temperature / (m.mass * m.omega_m * m.omega_m);
}

// Direct O(N^2) linear convolution of the mirrored one-sided spectrum.
std::vector<double> brute_self_convolve(const Psd& s, std::size_t n_out) {
  const double df = s.grid.df;
  auto at = [&](double f) {
    const double a = std::abs(f);
    const double idx = (a - s.grid.f_start) / df;
    const long i = std::lround(idx);
    if (std::abs(idx - static_cast<double>(i)) > 1e-6 || i < 0 || i >= static_cast<long>(s.size())) return 0.0;
    return s.values[static_cast<std::size_t>(i)];
  };
  std::vector<double> out(n_out, 0.0);
  for (std::size_t k = 0; k < n_out; ++k) {
    const double f = df * static_cast<double>(k);
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double fp = s.grid.frequency(j);
      acc += s.values[j] * (at(f - fp) + at(f + fp));
    }
    out[k] = acc * df;
  }
  return out;
}

}  // namespace

TEST_CASE("susceptibility at resonance and at DC") {
  const auto m = desk_mode(100.0, 500.0);
  const FrequencyGrid g{0.0, 100.0, 2};
  const auto chi = effective_susceptibility(m, 0.0, 0.0, g);
  CHECK(std::abs(chi.values[1]) == doctest::Approx(1.0 / (m.mass * m.omega_m * m.gamma_m)).epsilon(1e-12));
  const double shift = two_pi * 3.0;
  const auto chi2 = effective_susceptibility(m, shift, 0.0, g);
  const double w = m.omega_m + shift;
  CHECK(std::abs(chi2.values[0]) == doctest::Approx(1.0 / (m.mass * w * w)).epsilon(1e-12));
}

TEST_CASE("susceptibility matches direct complex arithmetic") {
  const auto m = reference::trampoline_fundamental();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const double shift = 0.01 * m.gamma_m, damp = 0.3 * m.gamma_m;
  for (int i = 0; i < 20; ++i) {
    const double w = m.omega_m + u(rng) * m.gamma_m;
    const FrequencyGrid g{w / two_pi, 1.0, 2};
    const auto chi = effective_susceptibility(m, shift, damp, g);
    const double we = m.omega_m + shift;
    const std::complex<double> expect =
        (1.0 / m.mass) / std::complex<double>(we * we - w * w, w * (m.gamma_m + damp));
    // Near resonance the denominator loses about log10(Q) digits.
    CHECK(std::abs(chi.values[0] - expect) / std::abs(expect) < 1e-8);
  }
}

TEST_CASE("susceptibility rejects unstable parameters") {
  const auto m = desk_mode(100.0, 500.0);
  const FrequencyGrid g{0.0, 1.0, 10};
  CHECK_THROWS_AS(effective_susceptibility(m, -m.omega_m, 0.0, g), std::domain_error);
  CHECK_THROWS_AS(effective_susceptibility(m, 0.0, -2.0 * m.gamma_m, g), std::domain_error);
}

TEST_CASE("thermal displacement integrates to k_B T / (m w^2)") {
  for (double q : {150.0, 1e3, 1e4}) {
    const auto m = desk_mode(100.0, q);
    const double lw = 100.0 / q;
    const FrequencyGrid g{0.0, lw / 20.0, static_cast<std::size_t>(1000.0 / (lw / 20.0))};
    const auto s = thermal_displacement_psd(m, g);
    CHECK(s.integrate() == doctest::Approx(equipartition(m)).epsilon(0.01));
  }
}

TEST_CASE("bin-average sampling keeps the variance of unresolved peaks") {
  const auto m = desk_mode(1000.0, 1e7);  // 0.1 mHz linewidth
  const FrequencyGrid g{0.5, 1.0, 4000};
  const auto s = thermal_displacement_psd(m, g, Sampling::bin_average);
  CHECK(s.integrate() == doctest::Approx(equipartition(m)).epsilon(0.01));
  const auto p = thermal_displacement_psd(m, g, Sampling::point);
  CHECK(p.integrate() < 0.5 * equipartition(m));
}

TEST_CASE("thermal displacement special cases") {
  auto m = desk_mode(100.0, 500.0);
  m.temperature = 0.0;
  const FrequencyGrid g{1.0, 1.0, 300};
  for (double v : thermal_displacement_psd(m, g).values) CHECK(v == 0.0);

  auto v = desk_mode(100.0, 500.0);
  auto s = v;
  s.damping = DampingModel::structural;
  const FrequencyGrid at{100.0, 1.0, 2};
  CHECK(thermal_displacement_psd(s, at).values[0] ==
        doctest::Approx(thermal_displacement_psd(v, at).values[0]).epsilon(1e-12));
  CHECK_THROWS_AS(thermal_displacement_psd(s, FrequencyGrid{0.0, 1.0, 10}), std::invalid_argument);
}

TEST_CASE("multimode frequency noise is a weighted sum") {
  SystemParams sys;
  sys.modes = {desk_mode(100.0, 300.0)};
  sys.cavity = {1e8, 0.0, 0.0, 2.4e15, 1.0};
  const FrequencyGrid g{0.5, 1.0, 1000};
  const auto one = multimode_frequency_noise(sys, g);
  const auto x = thermal_displacement_psd(sys.modes[0], g);
  const double w = std::pow(2.0 * sys.modes[0].coupling_G / sys.cavity.kappa, 2);
  for (std::size_t i = 0; i < g.n_points; i += 97) {
    CHECK(one.values[i] == doctest::Approx(w * x.values[i]).epsilon(1e-12));
  }
  sys.modes.push_back(sys.modes[0]);
  const auto two = multimode_frequency_noise(sys, g);
  for (std::size_t i = 0; i < g.n_points; i += 97) CHECK(two.values[i] == doctest::Approx(2.0 * one.values[i]));
}

TEST_CASE("multimode variance is the sum of per-mode variances") {
  SystemParams sys;
  sys.modes = {desk_mode(100.0, 300.0), desk_mode(230.0, 500.0), desk_mode(410.0, 800.0)};
  sys.modes[1].coupling_G = 2e12;
  sys.cavity = {1e8, 0.0, 0.0, 2.4e15, 1.0};
  const FrequencyGrid g{0.0, 0.02, 200000};
  double expect = 0.0;
  for (const auto& m : sys.modes) {
    const double a = 2.0 * m.coupling_G * rms_thermal_displacement(m) / sys.cavity.kappa;
    expect += a * a;
  }
  CHECK(multimode_frequency_noise(sys, g).integrate() == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("self-convolution matches a direct linear convolution") {
  SystemParams sys;
  sys.modes = {desk_mode(20.0, 20.0), desk_mode(47.0, 30.0)};
  sys.cavity = {1e8, 0.0, 0.0, 2.4e15, 1.0};
  const FrequencyGrid g{0.25, 0.5, 600};
  const auto s = multimode_frequency_noise(sys, g);
  const auto out = self_convolve(s);
  const auto ref = brute_self_convolve(s, 300);
  double peak = 0.0;
  for (double v : ref) peak = std::max(peak, v);
  for (std::size_t k = 1; k < ref.size(); ++k) {
    CHECK(std::abs(out.values[k] - ref[k]) < 1e-9 * peak);
  }
}

TEST_CASE("self-convolution of one Lorentzian: peaks at 0 and 2 f_m only") {
  SystemParams sys;
  sys.modes = {desk_mode(50.0, 100.0)};
  sys.cavity = {1e8, 0.0, 0.0, 2.4e15, 1.0};
  const FrequencyGrid g{0.0, 0.05, 8000};
  const auto s = multimode_frequency_noise(sys, g);
  const auto out = self_convolve(s);
  const double at_2f = out.value_at(100.0);
  CHECK(out.value_at(100.0) > 10.0 * out.value_at(50.0));
  for (double f : {25.0, 50.0, 75.0, 125.0, 150.0, 200.0}) CHECK(out.value_at(f) < 0.01 * at_2f);
  CHECK(out.value_at(0.2) > 0.5 * at_2f);

  // Gaussian moment identity: var(nu^2) = 2 var(nu)^2.
  const double var = s.integrate();
  CHECK(out.integrate() == doctest::Approx(2.0 * var * var).epsilon(0.02));
}

TEST_CASE("self-convolution is quadratic and maps zero to zero") {
  SystemParams sys;
  sys.modes = {desk_mode(50.0, 100.0)};
  sys.cavity = {1e8, 0.0, 0.0, 2.4e15, 1.0};
  const FrequencyGrid g{0.0, 0.05, 8000};
  const auto s = multimode_frequency_noise(sys, g);
  const auto a = self_convolve(s);
  const auto b = self_convolve(s.scaled(3.0));
  for (std::size_t i = 0; i < a.size(); i += 501) CHECK(b.values[i] == doctest::Approx(9.0 * a.values[i]));
  const auto z = self_convolve(s.scaled(0.0));
  for (double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("self-convolution rejects inputs with power at the grid edge") {
  SystemParams sys;
  sys.modes = {desk_mode(380.0, 50.0)};
  sys.cavity = {1e8, 0.0, 0.0, 2.4e15, 1.0};
  const auto s = multimode_frequency_noise(sys, FrequencyGrid{0.0, 1.0, 400});
  CHECK_THROWS_AS(self_convolve(s), std::domain_error);
  Psd off(FrequencyGrid{0.3, 1.0, 10}, PsdUnits::relative);
  CHECK_THROWS_AS(self_convolve(off), std::invalid_argument);
}
