#include "doctest.h"

#include <string>

#include "scenario.hpp"
#include "tinsim/constants.hpp"

using namespace tinsim;
using namespace tinsim::app;

namespace {

const std::string kMinimal = R"(name: mini
temperature_k: 298
modes:
  - {mass_kg: 1.0e-9, frequency_hz: 41, quality: 1000, coupling_hz_per_m: 8.0e14}
cavity: {kappa_hz: 1.0e8, photon_number: 1.0e12}
)";

std::string message_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("shipped scenarios survive parse, serialise, parse") {
  for (const char* name : {"reference", "landscape", "calibration", "desk_tin", "tinba_sweep"}) {
    CAPTURE(name);
    const auto first = load_scenario(std::string(TINSIM_SCENARIO_DIR) + "/" + name + ".yaml");
    const auto second = parse_scenario(serialize_scenario(first));
    CHECK(build_system(first) == build_system(second));
    CHECK(build_grid(first) == build_grid(second));
    CHECK(serialize_scenario(second) == serialize_scenario(first));
  }
}

TEST_CASE("reference scenario maps onto physical units") {
  const auto in = load_scenario(std::string(TINSIM_SCENARIO_DIR) + "/reference.yaml");
  const auto sys = build_system(in);
  REQUIRE(sys.modes.size() == 4);
  const auto& m = sys.probe();
  CHECK(m.omega_m == doctest::Approx(constants::two_pi * 41e3));
  CHECK(m.quality_factor() == doctest::Approx(7.8e6));
  CHECK(vacuum_coupling_rate(m) == doctest::Approx(constants::two_pi * 1.5e3));
  CHECK(sys.cavity.kappa == doctest::Approx(constants::two_pi * 0.65e9));
  CHECK(sys.cavity.n_cav == doctest::Approx(photon_number_from_power(0.2e-3, sys.cavity)));
}

TEST_CASE("linewidth and finesse are alternative spellings") {
  auto a = parse_scenario(kMinimal);
  std::string text = kMinimal;
  text.replace(text.find("quality: 1000"), 13, "linewidth_hz: 0.041");
  text.replace(text.find("kappa_hz: 1.0e8"), 15, "length_m: 0.01, finesse: 1e5");
  const auto b = parse_scenario(text);
  const auto sa = build_system(a), sb = build_system(b);
  CHECK(sb.probe().gamma_m == doctest::Approx(sa.probe().gamma_m));
  CHECK(sb.cavity.kappa == doctest::Approx(CavityParams::kappa_from_finesse(0.01, 1e5)));
}

TEST_CASE("unknown keys are reported with their line") {
  std::string text = kMinimal + "grid: {f_start_hz: 0, df_hz: 1, n_point: 10}\n";
  const auto msg = message_of(text);
  CHECK(msg.find("line 6") != std::string::npos);
  CHECK(msg.find("n_point") != std::string::npos);
}

TEST_CASE("missing and conflicting fields are rejected") {
  CHECK_FALSE(message_of("name: x\n").empty());
  std::string both = kMinimal;
  both.replace(both.find("quality: 1000"), 13, "quality: 1000, linewidth_hz: 0.04");
  CHECK_THROWS_AS(build_system(parse_scenario(both)), ScenarioError);
  std::string two_widths = kMinimal;
  two_widths.replace(two_widths.find("kappa_hz: 1.0e8"), 15, "kappa_hz: 1.0e8, finesse: 1e5");
  CHECK_THROWS_AS(parse_scenario(two_widths), ScenarioError);
  std::string two_powers = kMinimal;
  two_powers.replace(two_powers.find("photon_number"), 13, "power_w: 1e-3, photon_number");
  CHECK_THROWS_AS(parse_scenario(two_powers), ScenarioError);
  std::string bad_type = kMinimal;
  bad_type.replace(bad_type.find("1000"), 4, "many");
  CHECK_THROWS_AS(build_system(parse_scenario(bad_type)), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("modes: [unterminated\n"), ScenarioError);
}

TEST_CASE("ranges expand linearly or logarithmically") {
  const RangeInput lin{0.0, 1.0, 5, false};
  CHECK(lin.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto lg = RangeInput{1.0, 1000.0, 4, true}.values();
  REQUIRE(lg.size() == 4);
  CHECK(lg[1] == doctest::Approx(10.0));
  CHECK(lg[3] == doctest::Approx(1000.0));
  CHECK(RangeInput{3.0, 3.0, 1, false}.values() == std::vector<double>{3.0});
}
