#include "doctest.h"

#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tinsim/constants.hpp"
#include "tinsim/welch.hpp"

using namespace tinsim;
using constants::two_pi;

namespace {

std::vector<double> white(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

double mean_of(const std::vector<double>& v, std::size_t from = 1) {
  return std::accumulate(v.begin() + static_cast<long>(from), v.end() - 1, 0.0) /
         static_cast<double>(v.size() - from - 1);
}

}  // namespace

TEST_CASE("white noise gives a flat 2 sigma^2 / fs density") {
  WelchOptions o;
  o.segment_length = 256;
  const auto x = white(256 * 201, 1);
  const auto p = welch_psd(x, 1.0, o);
  CHECK(welch_segment_count(x.size(), o) >= 200);
  CHECK(mean_of(p.values) == doctest::Approx(2.0).epsilon(0.02));
  // Per-bin scatter with about 400 effective averages.
  for (std::size_t i = 1; i + 1 < p.size(); ++i) CHECK(std::abs(p.values[i] / 2.0 - 1.0) < 0.3);
  CHECK(p.integrate() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("tone power integrates to A^2/2") {
  const double fs = 1000.0, f0 = 123.4, a = 3.0;
  std::vector<double> x(1 << 16);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = a * std::cos(two_pi * f0 * static_cast<double>(i) / fs);
  WelchOptions o;
  o.segment_length = 4096;
  const auto p = welch_psd(x, fs, o);
  CHECK(p.band_integral(f0 - 5.0, f0 + 5.0) == doctest::Approx(a * a / 2.0).epsilon(0.02));
}

TEST_CASE("Ornstein-Uhlenbeck process matches its Lorentzian") {
  const double fs = 1000.0, rate = two_pi * 20.0, sigma = 1.0;
  const double dt = 1.0 / fs, phi = std::exp(-rate * dt);
  const auto e = white(1 << 20, 5, sigma * std::sqrt(1.0 - phi * phi));
  std::vector<double> x(e.size());
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = v = phi * v + e[i];
  WelchOptions o;
  o.segment_length = 4096;
  const auto p = welch_psd(x, fs, o);
  // Exact spectrum of the sampled AR(1) process, one-sided.
  auto expect = [&](double f) {
    const double c = std::cos(two_pi * f / fs);
    return 2.0 / fs * sigma * sigma * (1.0 - phi * phi) / (1.0 + phi * phi - 2.0 * phi * c);
  };
  for (double f : {2.0, 10.0, 20.0, 40.0}) {
    const double band = p.band_mean(f - 1.0, f + 1.0);
    CHECK(band == doctest::Approx(expect(f)).epsilon(0.03));
  }
}

TEST_CASE("cross spectrum of a signal with itself is its PSD") {
  const auto x = white(1 << 14, 2);
  WelchOptions o;
  o.segment_length = 512;
  const auto c = cross_spectrum(x, x, 10.0, o);
  const auto p = welch_psd(x, 10.0, o);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(c.values[i].real() == doctest::Approx(p.values[i]).epsilon(1e-10));
    CHECK(std::abs(c.values[i].imag()) <= 1e-10 * p.values[i] + 1e-300);
  }
}

TEST_CASE("a delayed copy has a linear phase ramp") {
  const std::size_t lag = 3;
  const double fs = 100.0;
  const auto x = white((1 << 15) + lag, 9);
  std::vector<double> a(x.begin() + lag, x.end()), b(x.begin(), x.end() - lag);
  WelchOptions o;
  o.segment_length = 1024;
  const auto c = cross_spectrum(a, b, fs, o);
  const double tau = static_cast<double>(lag) / fs;
  for (std::size_t i = 5; i < 60; i += 7) {
    const double f = c.grid.frequency(i);
    const double expect = std::remainder(-two_pi * f * tau, two_pi);
    const double got = std::arg(c.values[i]);
    CHECK(std::abs(std::remainder(std::abs(got) - std::abs(expect), two_pi)) < 0.05);
  }
}

TEST_CASE("coherence bounds, identity and finite-average bias") {
  WelchOptions o;
  o.segment_length = 256;
  o.overlap = 0.0;
  const auto a = white(256 * 100, 3), b = white(256 * 100, 4);
  const auto self = coherence(a, a, 1.0, o);
  for (double v : self.coherence.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  const auto ind = coherence(a, b, 1.0, o);
  CHECK(ind.n_segments == 100);
  for (double v : ind.coherence.values) CHECK((v >= 0.0 && v <= 1.0));
  CHECK(mean_of(ind.coherence.values) == doctest::Approx(0.01).epsilon(0.15));
}

TEST_CASE("signal plus independent noise at SNR 1 gives coherence one half") {
  WelchOptions o;
  o.segment_length = 256;
  const auto s = white(256 * 400, 5), n = white(256 * 400, 6);
  std::vector<double> b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) b[i] = s[i] + n[i];
  const auto c = coherence(s, b, 1.0, o);
  CHECK(mean_of(c.coherence.values) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("Welch rejects short records and bad settings") {
  WelchOptions o;
  o.segment_length = 256;
  CHECK_THROWS_AS(welch_psd(white(300, 1), 1.0, o), std::invalid_argument);
  CHECK_THROWS_AS(welch_psd(white(3000, 1), 0.0, o), std::invalid_argument);
  o.overlap = 1.0;
  CHECK_THROWS_AS(welch_psd(white(3000, 1), 1.0, o), std::invalid_argument);
  o.overlap = 0.5;
  CHECK_THROWS_AS(cross_spectrum(white(3000, 1), white(2000, 1), 1.0, o), std::invalid_argument);
}
