#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "tinsim/backaction.hpp"
#include "tinsim/constants.hpp"
#include "tinsim/reference.hpp"
#include "tinsim/spectra.hpp"
#include "tinsim/transduction.hpp"

using namespace tinsim;
using constants::two_pi;

namespace {

// Brute-force maximum of cq_with_tin over a fine logarithmic scan.
std::pair<double, double> scan_optimum(const MechanicalMode& m, CavityParams c, double s) {
  double best = 0.0, arg = 0.0;
  for (int i = 0; i <= 40000; ++i) {
    c.n_cav = std::pow(10.0, 2.0 + 12.0 * i / 40000.0);
    const double v = cq_with_tin(m, c, s);
    if (v > best) best = v, arg = c.n_cav;
  }
  return {arg, best};
}

}  // namespace

TEST_CASE("thermal force density and QBA ratio") {
  const auto m = reference::trampoline_fundamental();
  const double sf = 4.0 * constants::k_B * m.temperature * m.mass * m.gamma_m;
  CHECK(thermal_force_psd(m) == doctest::Approx(sf));
  auto cav = reference::trampoline_cavity(2e6);
  const auto qba = qba_force_psd(m, cav, FrequencyGrid{41e3, 1.0, 2});
  const double ratio = qba.values[0] / thermal_force_psd(m);
  // The closed form drops the small omega_m / kappa roll-off.
  CHECK(ratio == doctest::Approx(qba_to_thermal_ratio(m, cav)).epsilon(1e-3));
  CHECK(qba_to_thermal_ratio(m, cav) ==
        doctest::Approx(vacuum_cooperativity(m, cav) * 2e6 / thermal_occupation(m)));
}

TEST_CASE("TINBA force follows (hbar G n)^2 c2^2 S_nu2") {
  const auto m = reference::trampoline_fundamental();
  auto cav = reference::trampoline_cavity(1e6);
  Psd s(FrequencyGrid{0.0, 10.0, 4}, {1e-20, 2e-20, 3e-20, 4e-20}, PsdUnits::relative);
  const double k = std::pow(constants::hbar * m.coupling_G * 1e6, 2);
  const auto f = tinba_force_psd(m, cav, s);
  for (std::size_t i = 0; i < 4; ++i) CHECK(f.values[i] == doctest::Approx(k * s.values[i]));
  cav.detuning_nu = magic_detuning();
  for (double v : tinba_force_psd(m, cav, s).values) CHECK(std::abs(v) < 1e-30 * k);
}

TEST_CASE("dynamical backaction limits") {
  const auto m = reference::trampoline_fundamental();
  auto cav = reference::trampoline_cavity(1e6);
  const double g2 = std::pow(vacuum_coupling_rate(m), 2) * cav.n_cav;
  SUBCASE("resonant probe has no spring or damping") {
    const auto d = dynamical_backaction(m, cav);
    CHECK(std::abs(d.spring_shift) < 1e-12 * g2);
    CHECK(std::abs(d.opt_damping) < 1e-12 * g2);
    CHECK(d.stable);
  }
  SUBCASE("bad cavity: spring matches the closed form, damping is first order in omega/kappa") {
    for (double nu : {-1.0, -0.3, 0.2, 0.577, 2.0}) {
      cav.detuning_nu = nu;
      const auto d = dynamical_backaction(m, cav);
      CHECK(d.spring_shift == doctest::Approx(bad_cavity_spring_shift(m, cav)).epsilon(1e-5));
      const double delta = 0.5 * nu * cav.kappa;
      const double l = 0.25 * cav.kappa * cav.kappa + delta * delta;
      CHECK(d.opt_damping == doctest::Approx(-4.0 * g2 * cav.kappa * delta * m.omega_m / (l * l)).epsilon(1e-4));
    }
  }
  SUBCASE("resolved sideband cooling rate") {
    auto mm = m;
    mm.omega_m = 100.0 * cav.kappa;
    cav.detuning_nu = -2.0 * mm.omega_m / cav.kappa;
    const auto d = dynamical_backaction(mm, cav);
    const double g2b = std::pow(vacuum_coupling_rate(mm), 2) * cav.n_cav;
    CHECK(d.opt_damping == doctest::Approx(4.0 * g2b / cav.kappa).epsilon(1e-3));
  }
  SUBCASE("strong blue detuning is flagged unstable") {
    cav.detuning_nu = 0.3;
    cav.n_cav = 1e10;
    CHECK_FALSE(dynamical_backaction(m, cav).stable);
  }
}

TEST_CASE("cooperativity optimum agrees with a brute-force scan") {
  const auto m = reference::trampoline_fundamental();
  for (double nu : {0.0, 0.4, 1.0}) {
    for (double s : {1e-13, 1e-11, 1e-9}) {
      auto cav = reference::trampoline_cavity(1e6);
      cav.detuning_nu = nu;
      const auto [arg, best] = scan_optimum(m, cav, s);
      CHECK(optimal_photon_number(m, cav, s) == doctest::Approx(arg).epsilon(2e-3));
      cav.n_cav = optimal_photon_number(m, cav, s);
      CHECK(cq_with_tin(m, cav, s) == doctest::Approx(best).epsilon(1e-6));
      CHECK(cq_upper_bound(m, cav, s) == doctest::Approx(best).epsilon(1e-6));
    }
  }
}

TEST_CASE("cooperativity without TIN is linear in n") {
  const auto m = reference::trampoline_fundamental();
  const auto cav = reference::trampoline_cavity(3e6);
  const double ideal = vacuum_cooperativity(m, cav) * 3e6 / thermal_occupation(m);
  CHECK(cq_with_tin(m, cav, 0.0) == doctest::Approx(ideal));
  const auto r = quantum_cooperativity(m, cav, reference::kTinRin);
  CHECK(r.cq_ideal == doctest::Approx(ideal));
  CHECK(r.cq_with_tin < r.cq_ideal);
  CHECK(r.cq_with_tin <= r.cq_upper_bound * (1 + 1e-12));
  CHECK(r.optimal_n_cav == doctest::Approx(optimal_photon_number(m, cav, reference::kTinRin)));
}

TEST_CASE("observability conditions flip at their thresholds") {
  const auto m = reference::trampoline_fundamental();
  auto cav = reference::trampoline_cavity(0.0);
  const double n_req = thermal_occupation(m) / vacuum_cooperativity(m, cav);
  cav.n_cav = 2.0 * n_req;
  CHECK(quantum_cooperativity(m, cav, 0.0).conditions.photon_number);
  cav.n_cav = 0.5 * n_req;
  CHECK_FALSE(quantum_cooperativity(m, cav, 0.0).conditions.photon_number);
  const double s_max = 2.0 * zero_point_detuning_psd(m, cav) / thermal_occupation(m);
  CHECK(quantum_cooperativity(m, cav, 0.5 * s_max).conditions.tin_level);
  CHECK_FALSE(quantum_cooperativity(m, cav, 2.0 * s_max).conditions.tin_level);
  CHECK(quantum_cooperativity(m, cav, 0.0).conditions.quality_factor);
}

TEST_CASE("force budget filtered through the susceptibility") {
  const auto m = reference::trampoline_fundamental();
  const auto cav = reference::trampoline_cavity(1e6);
  const FrequencyGrid g{40990.0, 0.5, 41};
  const auto fb = make_force_budget(m, cav, g);
  for (double v : fb.s_f_tin) CHECK(v == 0.0);
  const auto chi = effective_susceptibility(m, 0.0, 0.0, g);
  const auto b = displacement_psd(chi, fb);
  const auto th = thermal_displacement_psd(m, g);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    CHECK(b.component("thermal").values[i] == doctest::Approx(th.values[i]).epsilon(1e-9));
  }
  CHECK(b.contains("qba"));
  CHECK_THROWS_AS(displacement_psd(effective_susceptibility(m, 0.0, 0.0, FrequencyGrid{0.0, 1.0, 41}), fb),
                  std::invalid_argument);
}
