#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tinsim/grid.hpp"

namespace tinsim {

/// Named stack of spectral components on one grid, plus their sum.
class NoiseBudget {
 public:
  struct Component {
    std::string name;
    std::vector<double> values;
  };

  NoiseBudget(FrequencyGrid grid, PsdUnits units);

  /// Adds a component; throws if the grid, size or units disagree or the name repeats.
  void add(std::string name, const Psd& psd);
  void add(std::string name, std::vector<double> values);

  const FrequencyGrid& grid() const { return grid_; }
  PsdUnits units() const { return units_; }
  const std::vector<Component>& components() const { return components_; }
  bool contains(std::string_view name) const;
  Psd component(std::string_view name) const;
  /// Bin-wise sum of all components.
  Psd total() const;
  /// Name of the largest component at bin i.
  const std::string& dominant_at(std::size_t i) const;
  /// Ratio of band-integrated power of two components.
  double band_ratio(std::string_view numerator, std::string_view denominator, double f0,
                    double f1) const;

  /// `frequency_hz,<component>...,total` with a units comment line.
  void write_csv(std::ostream& out) const;

 private:
  FrequencyGrid grid_;
  PsdUnits units_;
  std::vector<Component> components_;
};

}  // namespace tinsim
