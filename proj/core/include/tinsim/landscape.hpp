#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "tinsim/phys.hpp"

namespace tinsim {

/// Measured or simulated TIN level used to extrapolate across parameters with
/// S_RIN^TIN ~ G^4 kappa^-4 T^2 tin_prefactor(nu).
struct TinReference {
  double s_rin_tin = 0.0;  // 1/Hz
  double kappa = 0.0;      // rad/s
  double coupling_G = 0.0; // rad/s/m
  double temperature = 0.0;
  double nu = 0.0;

  double scaled(double kappa_new, double coupling_new, double temperature_new,
                double nu_new) const;
};

struct LandscapePoint {
  double kappa = 0.0;
  double p_in = 0.0;
  double nu = 0.0;
  double temperature = 0.0;
  double n_c = 0.0;
  double cq = 0.0;
  bool stable = true;
};

struct LandscapeSpec {
  std::vector<double> kappas;        // rad/s, increasing
  std::vector<double> powers;        // W, increasing
  std::vector<double> temperatures;  // K
  double nu = 0.0;
  TinReference reference;
};

/// Evaluates C_q over temperature x kappa x power in that nesting order.
/// Points with an unstable optical spring are kept with cq = 0 and stable = false.
/// Work is split over `threads` workers; output order does not depend on it.
std::vector<LandscapePoint> cq_landscape(const SystemParams& base, const LandscapeSpec& spec,
                                         unsigned threads = 1);

struct OptimumPoint {
  double kappa = 0.0;
  double temperature = 0.0;
  double n_c = 0.0;
  double p_in = 0.0;
  double cq = 0.0;
};

/// Closed-form per-kappa optimum (photon number, power and C_q).
std::vector<OptimumPoint> cq_optimum_curve(const SystemParams& base, const LandscapeSpec& spec);

void write_landscape_csv(std::ostream& out, const LandscapeSpec& spec,
                         const std::vector<LandscapePoint>& points);

}  // namespace tinsim
