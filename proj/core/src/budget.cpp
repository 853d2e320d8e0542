#include "tinsim/budget.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace tinsim {

NoiseBudget::NoiseBudget(FrequencyGrid grid, PsdUnits units) : grid_(grid), units_(units) {
  grid_.validate();
}

void NoiseBudget::add(std::string name, const Psd& psd) {
  if (!(psd.grid == grid_)) throw std::invalid_argument("budget: component grid differs");
  if (psd.units != units_) throw std::invalid_argument("budget: component units differ");
  add(std::move(name), psd.values);
}

void NoiseBudget::add(std::string name, std::vector<double> values) {
  if (values.size() != grid_.n_points) throw std::invalid_argument("budget: component size differs");
  if (contains(name)) throw std::invalid_argument("budget: duplicate component '" + name + "'");
  components_.push_back({std::move(name), std::move(values)});
}

bool NoiseBudget::contains(std::string_view name) const {
  for (const auto& c : components_) {
    if (c.name == name) return true;
  }
  return false;
}

Psd NoiseBudget::component(std::string_view name) const {
  for (const auto& c : components_) {
    if (c.name == name) return Psd(grid_, c.values, units_);
  }
  throw std::out_of_range("budget: no component '" + std::string(name) + "'");
}

Psd NoiseBudget::total() const {
  Psd out(grid_, units_);
  for (const auto& c : components_) {
    for (std::size_t i = 0; i < c.values.size(); ++i) out.values[i] += c.values[i];
  }
  return out;
}

const std::string& NoiseBudget::dominant_at(std::size_t i) const {
  if (components_.empty()) throw std::logic_error("budget: empty");
  const Component* best = &components_.front();
  for (const auto& c : components_) {
    if (c.values.at(i) > best->values.at(i)) best = &c;
  }
  return best->name;
}

double NoiseBudget::band_ratio(std::string_view numerator, std::string_view denominator,
                               double f0, double f1) const {
  return component(numerator).band_integral(f0, f1) / component(denominator).band_integral(f0, f1);
}

void NoiseBudget::write_csv(std::ostream& out) const {
  out << "# units=" << to_string(units_) << " sidedness=one_sided\n";
  out << "frequency_hz";
  for (const auto& c : components_) out << ',' << c.name;
  out << ",total\n";
  out << std::setprecision(10);
  const Psd tot = total();
  for (std::size_t i = 0; i < grid_.n_points; ++i) {
    out << grid_.frequency(i);
    for (const auto& c : components_) out << ',' << c.values[i];
    out << ',' << tot.values[i] << '\n';
  }
}

}  // namespace tinsim
