#include "doctest.h"

#include <sstream>
#include <stdexcept>

#include "tinsim/constants.hpp"
#include "tinsim/oracle.hpp"
#include "tinsim/psd_csv.hpp"
#include "tinsim/record_io.hpp"

using namespace tinsim;

namespace {

TimeSeriesRecord small_record() {
  SimConfig c;
  c.system.modes.push_back(MechanicalMode{1e-9, constants::two_pi * 41.0, 1.3, 1e14, 298.0});
  c.system.modes.push_back(MechanicalMode{1e-9, constants::two_pi * 150.0, 0.9, 5e13, 298.0});
  c.system.cavity = CavityParams{1e9, 0.2, 1e6, 2.4e15, 0.4};
  c.fs = 4096.0;
  c.duration = 0.5;
  c.seed = 99;
  c.phase_imprecision = 1e-20;
  c.force_coupling_scale = {1.0, 0.0};
  return simulate(c);
}

}  // namespace

TEST_CASE("binary records round trip exactly") {
  const auto r = small_record();
  std::stringstream ss;
  write_record_binary(ss, r);
  const auto back = read_record_binary(ss);
  CHECK(back == r);
}

TEST_CASE("truncated or foreign binary input is rejected") {
  const auto r = small_record();
  std::stringstream ss;
  write_record_binary(ss, r);
  const std::string bytes = ss.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 100));
  CHECK_THROWS_AS(read_record_binary(cut), std::runtime_error);
  std::stringstream junk("NOTARECORD and some bytes");
  CHECK_THROWS_AS(read_record_binary(junk), std::runtime_error);
  std::stringstream header_only(bytes.substr(0, 20));
  CHECK_THROWS_AS(read_record_binary(header_only), std::runtime_error);
}

TEST_CASE("record CSV has one row per sample") {
  const auto r = small_record();
  std::ostringstream os;
  write_record_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line.find("time_s") != std::string::npos);
  CHECK(line.find("x1_m") != std::string::npos);
  std::size_t rows = 0;
  while (std::getline(is, line)) rows += (!line.empty() && line[0] != '#') ? 1 : 0;
  CHECK(rows == r.n_samples);
}

TEST_CASE("PSD CSV round trip keeps grid, units and values") {
  Psd p(FrequencyGrid{12.5, 0.25, 6}, {1e-30, 2.5e-29, 3.125e-28, 0.0, 1.0, 7e7},
        PsdUnits::displacement);
  std::stringstream ss;
  write_psd_csv(ss, p);
  const auto back = read_psd_csv(ss);
  CHECK(back.units == PsdUnits::displacement);
  CHECK(back.grid.n_points == 6);
  CHECK(back.grid.f_start == doctest::Approx(12.5));
  CHECK(back.grid.df == doctest::Approx(0.25));
  for (std::size_t i = 0; i < 6; ++i) CHECK(back.values[i] == doctest::Approx(p.values[i]).epsilon(1e-14));
}

TEST_CASE("PSD CSV reader accepts headers and rejects bad grids") {
  std::istringstream swapped("# exported\npsd,frequency\n1.0,10\n2.0,20\n3.0,30\n");
  const auto p = read_psd_csv(swapped);
  CHECK(p.units == PsdUnits::relative);
  CHECK(p.values[2] == 3.0);
  CHECK(p.grid.f_start == 10.0);
  std::istringstream uneven("10,1\n20,1\n35,1\n");
  CHECK_THROWS_AS(read_psd_csv(uneven), std::invalid_argument);
  std::istringstream falling("10,1\n5,1\n");
  CHECK_THROWS_AS(read_psd_csv(falling), std::invalid_argument);
  std::istringstream text("10,abc\n20,1\n");
  CHECK_THROWS_AS(read_psd_csv(text), std::invalid_argument);
  std::istringstream single("10,1\n");
  CHECK_THROWS_AS(read_psd_csv(single), std::invalid_argument);
}
