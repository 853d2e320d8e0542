#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "json.hpp"
#include "scenario.hpp"
#include "tinsim/record_io.hpp"

using namespace tinsim::app;
namespace fs = std::filesystem;

namespace {

const std::string kSmall = R"(name: small
seed: 3
temperature_k: 298
modes:
  - {mass_kg: 1.0e-9, frequency_hz: 41, quality: 200, coupling_hz_per_m: 8.0e14}
  - {mass_kg: 1.0e-9, frequency_hz: 150, quality: 1000, coupling_hz_per_m: 9.0e14}
cavity: {kappa_hz: 1.6e8, photon_number: 1.0e12}
grid: {f_start_hz: 0, df_hz: 0.05, n_points: 8000}
tin:
  nu_sweep: {start: -1, stop: 1, points: 5}
  band_lo_hz: 30
  band_hi_hz: 50
oracle:
  fs_hz: 4000
  duration_s: 8
  radiation_pressure: false
  welch_segment: 4096
landscape:
  kappa_hz: {start: 1.0e7, stop: 1.0e10, points: 4, log: true}
  power_w: {start: 1.0e-6, stop: 1.0e-2, points: 5, log: true}
)";

fs::path fresh_dir(const std::string& tag) {
  const auto p = fs::temp_directory_path() / ("tinsim_cmd_test_" + tag);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_CASE("budget and tin outputs are byte-identical across reruns") {
  const auto in = parse_scenario(kSmall);
  std::ostringstream log;
  RunOptions a{fresh_dir("a"), {}, 1}, b{fresh_dir("b"), {}, 4};
  REQUIRE(cmd_budget(in, a, log) == kExitOk);
  REQUIRE(cmd_budget(in, b, log) == kExitOk);
  REQUIRE(cmd_tin(in, a, log) == kExitOk);
  REQUIRE(cmd_tin(in, b, log) == kExitOk);
  for (const char* f : {"budget-small/budget_sy.csv", "budget-small/budget_rin.csv", "tin-small/s_nu2.csv",
                        "tin-small/tin_rin.csv", "tin-small/nu_sweep.csv"}) {
    CAPTURE(f);
    const auto x = slurp(a.out_root / f);
    CHECK_FALSE(x.empty());
    CHECK(x == slurp(b.out_root / f));
  }
  const auto m = manifest(a.out_root / "budget-small");
  CHECK(m["command"] == "budget");
  CHECK(m["scenario"] == "small");
  const auto files = m["files"].get<std::vector<std::string>>();
  CHECK(std::find(files.begin(), files.end(), "budget_sy.csv") != files.end());
  CHECK(fs::exists(a.out_root / "budget-small" / "scenario.yaml"));
  // The stored scenario reproduces the input.
  const auto again = load_scenario(a.out_root / "budget-small" / "scenario.yaml");
  CHECK(serialize_scenario(again) == serialize_scenario(in));
}

TEST_CASE("simulate honours the seed override and is reproducible") {
  const auto in = parse_scenario(kSmall);
  std::ostringstream log;
  RunOptions a{fresh_dir("sa"), {}, 1}, b{fresh_dir("sb"), std::uint64_t{11}, 1},
      c{fresh_dir("sc"), std::uint64_t{11}, 2};
  REQUIRE(cmd_simulate(in, a, log) == kExitOk);
  REQUIRE(cmd_simulate(in, b, log) == kExitOk);
  REQUIRE(cmd_simulate(in, c, log) == kExitOk);
  CHECK(manifest(a.out_root / "simulate-small")["seed"] == 3);
  CHECK(manifest(b.out_root / "simulate-small")["seed"] == 11);
  const auto ra = tinsim::read_record_binary(a.out_root / "simulate-small" / "record.bin");
  const auto rb = tinsim::read_record_binary(b.out_root / "simulate-small" / "record.bin");
  CHECK(ra.seed == 3);
  CHECK(rb.seed == 11);
  CHECK_FALSE(ra.phase == rb.phase);
  CHECK(slurp(b.out_root / "simulate-small" / "record.bin") ==
        slurp(c.out_root / "simulate-small" / "record.bin"));
}

TEST_CASE("landscape command writes grid and optimum") {
  const auto in = parse_scenario(kSmall);
  std::ostringstream log;
  RunOptions o{fresh_dir("l"), {}, 3};
  REQUIRE(cmd_landscape(in, o, log) == kExitOk);
  std::istringstream is(slurp(o.out_root / "landscape-small" / "landscape.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) rows += (!line.empty() && line[0] != '#') ? 1 : 0;
  CHECK(rows == 1 + 4 * 5);
  CHECK(fs::exists(o.out_root / "landscape-small" / "optimum.csv"));
}

TEST_CASE("commands reject scenarios that lack their section") {
  auto in = parse_scenario(kSmall);
  in.oracle.reset();
  in.landscape.reset();
  std::ostringstream log;
  RunOptions o{fresh_dir("x"), {}, 1};
  CHECK_THROWS_AS(cmd_simulate(in, o, log), ScenarioError);
  CHECK_THROWS_AS(cmd_landscape(in, o, log), ScenarioError);
}
