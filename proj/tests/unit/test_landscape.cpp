#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tinsim/backaction.hpp"
#include "tinsim/landscape.hpp"
#include "tinsim/reference.hpp"
#include "tinsim/transduction.hpp"

using namespace tinsim;

namespace {

SystemParams base_system() {
  SystemParams s;
  s.modes.push_back(reference::trampoline_fundamental());
  s.cavity = reference::trampoline_cavity(1e6);
  return s;
}

LandscapeSpec small_spec(const SystemParams& s) {
  LandscapeSpec spec;
  for (int i = 0; i < 9; ++i) spec.kappas.push_back(1e7 * std::pow(10.0, 0.5 * i));
  for (int i = 0; i < 11; ++i) spec.powers.push_back(1e-7 * std::pow(10.0, 0.6 * i));
  spec.temperatures = {4.0, 298.0};
  spec.reference = {reference::kTinRin, s.cavity.kappa, s.probe().coupling_G, 298.0, 0.0};
  return spec;
}

}  // namespace

TEST_CASE("TIN reference rescaling exponents") {
  const TinReference r{1e-11, 1e9, 1e18, 300.0, 0.0};
  CHECK(r.scaled(1e9, 1e18, 300.0, 0.0) == doctest::Approx(1e-11));
  CHECK(r.scaled(1e10, 1e18, 300.0, 0.0) == doctest::Approx(1e-15));
  CHECK(r.scaled(1e9, 2e18, 300.0, 0.0) == doctest::Approx(16e-11));
  CHECK(r.scaled(1e9, 1e18, 3.0, 0.0) == doctest::Approx(1e-15));
  CHECK(r.scaled(1e9, 1e18, 300.0, 1.0) == doctest::Approx(1e-11 * tin_prefactor(1.0)));
  const TinReference magic{1e-11, 1e9, 1e18, 300.0, magic_detuning()};
  CHECK_THROWS_AS(magic.scaled(1e9, 1e18, 300.0, 0.0), std::invalid_argument);
}

TEST_CASE("landscape is independent of the thread count") {
  const auto s = base_system();
  const auto spec = small_spec(s);
  const auto one = cq_landscape(s, spec, 1);
  const auto many = cq_landscape(s, spec, 7);
  REQUIRE(one.size() == 2 * 9 * 11);
  REQUIRE(many.size() == one.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].cq == many[i].cq);
    CHECK(one[i].n_c == many[i].n_c);
  }
  // Nesting order: temperature, then kappa, then power.
  CHECK(one[0].temperature == 4.0);
  CHECK(one[1].p_in == spec.powers[1]);
  CHECK(one[11].kappa == spec.kappas[1]);
}

TEST_CASE("each point matches a direct cooperativity evaluation") {
  const auto s = base_system();
  const auto spec = small_spec(s);
  for (const auto& p : cq_landscape(s, spec, 2)) {
    auto mode = s.probe();
    mode.temperature = p.temperature;
    auto cav = s.cavity;
    cav.kappa = p.kappa;
    cav.n_cav = photon_number_from_power(p.p_in, cav);
    const double tin = spec.reference.scaled(p.kappa, mode.coupling_G, p.temperature, 0.0);
    CHECK(p.stable);
    CHECK(p.cq == doctest::Approx(cq_with_tin(mode, cav, tin)));
  }
}

TEST_CASE("optimum curve bounds the grid and scales as kappa at resonance") {
  const auto s = base_system();
  const auto spec = small_spec(s);
  const auto pts = cq_landscape(s, spec, 1);
  const auto opt = cq_optimum_curve(s, spec);
  REQUIRE(opt.size() == 2 * 9);
  for (std::size_t j = 0; j < opt.size(); ++j) {
    for (std::size_t p = 0; p < 11; ++p) CHECK(pts[j * 11 + p].cq <= opt[j].cq * (1 + 1e-12));
    CHECK(opt[j].p_in == doctest::Approx(power_for_photon_number(opt[j].n_c, [&] {
      auto c = s.cavity;
      c.kappa = opt[j].kappa;
      return c;
    }())));
  }
  // kappa increases by sqrt(10) per step; the TIN-limited bound grows linearly.
  CHECK(opt[10].cq / opt[9].cq == doctest::Approx(std::sqrt(10.0)).epsilon(1e-9));
}

TEST_CASE("unstable blue-detuned points are flagged") {
  auto s = base_system();
  auto spec = small_spec(s);
  spec.nu = 0.3;
  spec.reference.nu = 0.3;
  spec.powers = {1e-6, 1.0};
  spec.kappas = {1e7};
  const auto pts = cq_landscape(s, spec, 1);
  CHECK_FALSE(pts.back().stable);
  CHECK(pts.back().cq == 0.0);
}

TEST_CASE("landscape input validation and CSV") {
  const auto s = base_system();
  auto spec = small_spec(s);
  spec.kappas = {1e9, 1e8};
  CHECK_THROWS_AS(cq_landscape(s, spec), std::invalid_argument);
  spec = small_spec(s);
  spec.powers.clear();
  CHECK_THROWS_AS(cq_landscape(s, spec), std::invalid_argument);
  spec = small_spec(s);
  std::ostringstream os;
  write_landscape_csv(os, spec, cq_landscape(s, spec));
  std::istringstream is(os.str());
  std::string line;
  int comments = 0, rows = 0;
  while (std::getline(is, line)) (line[0] == '#' ? comments : rows)++;
  CHECK(comments == 2);
  CHECK(rows == 1 + 2 * 9 * 11);
}
