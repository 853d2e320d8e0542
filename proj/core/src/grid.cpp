#include "tinsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tinsim {

void FrequencyGrid::validate() const {
  if (!(df > 0.0) || !std::isfinite(df)) throw std::invalid_argument("grid: df must be > 0");
  if (n_points < 2) throw std::invalid_argument("grid: n_points must be >= 2");
  if (!std::isfinite(f_start)) throw std::invalid_argument("grid: f_start must be finite");
}

std::vector<double> FrequencyGrid::frequencies() const {
  std::vector<double> f(n_points);
  for (std::size_t i = 0; i < n_points; ++i) f[i] = frequency(i);
  return f;
}

std::size_t FrequencyGrid::nearest_index(double f) const {
  const double idx = std::round((f - f_start) / df);
  if (idx <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(idx), n_points - 1);
}

FrequencyGrid FrequencyGrid::span(double f0, double f1, std::size_t n) {
  if (n < 2 || !(f1 > f0)) throw std::invalid_argument("grid: span needs f1 > f0 and n >= 2");
  return {f0, (f1 - f0) / static_cast<double>(n - 1), n};
}

std::string_view to_string(PsdUnits u) {
  switch (u) {
    case PsdUnits::displacement: return "m^2/Hz";
    case PsdUnits::relative: return "1/Hz";
    case PsdUnits::force: return "N^2/Hz";
    case PsdUnits::phase: return "rad^2/Hz";
    case PsdUnits::frequency_noise: return "(rad/s)^2/Hz";
    case PsdUnits::dimensionless: return "1";
  }
  return "?";
}

std::string_view to_string(Sidedness s) {
  return s == Sidedness::one_sided ? "one_sided" : "two_sided";
}

PsdUnits parse_units(std::string_view text) {
  for (auto u : {PsdUnits::displacement, PsdUnits::relative, PsdUnits::force, PsdUnits::phase,
                 PsdUnits::frequency_noise, PsdUnits::dimensionless}) {
    if (text == to_string(u)) return u;
  }
  throw std::invalid_argument("unknown PSD units '" + std::string(text) + "'");
}

Sidedness parse_sidedness(std::string_view text) {
  if (text == "one_sided") return Sidedness::one_sided;
  if (text == "two_sided") return Sidedness::two_sided;
  throw std::invalid_argument("unknown sidedness '" + std::string(text) + "'");
}

Psd::Psd(FrequencyGrid g, PsdUnits u, Sidedness s)
    : grid(g), values(g.n_points, 0.0), units(u), sidedness(s) {}

Psd::Psd(FrequencyGrid g, std::vector<double> v, PsdUnits u, Sidedness s)
    : grid(g), values(std::move(v)), units(u), sidedness(s) {
  validate();
}

void Psd::validate() const {
  grid.validate();
  if (values.size() != grid.n_points) throw std::invalid_argument("psd: value count != grid size");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("psd: values must be finite and non-negative");
    }
  }
}

double Psd::integrate() const {
  double s = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) s += 0.5 * (values[i - 1] + values[i]);
  return s * grid.df;
}

double Psd::band_integral(double f0, double f1) const {
  double s = 0.0;
  bool prev_in = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = grid.frequency(i);
    const bool in = f >= f0 && f <= f1;
    if (in && prev_in) s += 0.5 * (values[i - 1] + values[i]) * grid.df;
    prev_in = in;
  }
  return s;
}

double Psd::band_mean(double f0, double f1) const {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = grid.frequency(i);
    if (f >= f0 && f <= f1) {
      s += values[i];
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("psd: band contains no bins");
  return s / static_cast<double>(n);
}

double Psd::value_at(double f) const {
  const double pos = (f - grid.f_start) / grid.df;
  if (pos < 0.0 || pos > static_cast<double>(values.size() - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values.size()) return values.back();
  const double t = pos - static_cast<double>(i);
  return values[i] * (1.0 - t) + values[i + 1] * t;
}

Psd Psd::scaled(double factor) const {
  Psd out = *this;
  for (double& v : out.values) v *= factor;
  return out;
}

Psd& Psd::operator+=(const Psd& other) {
  if (!(other.grid == grid)) throw std::invalid_argument("psd: grids differ");
  if (other.units != units) throw std::invalid_argument("psd: units differ");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

Psd operator+(Psd a, const Psd& b) {
  a += b;
  return a;
}

}  // namespace tinsim
