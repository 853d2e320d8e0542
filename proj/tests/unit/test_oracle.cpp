#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tinsim/constants.hpp"
#include "tinsim/measure.hpp"
#include "tinsim/oracle.hpp"
#include "tinsim/spectra.hpp"
#include "tinsim/transduction.hpp"

using namespace tinsim;
using constants::two_pi;

namespace {

MechanicalMode desk_mode(double f, double q, double coupling) {
  return MechanicalMode{1e-9, two_pi * f, two_pi * f / q, coupling, 298.0};
}

SimConfig base_config(double coupling = 0.0) {
  SimConfig c;
  c.system.modes.push_back(desk_mode(41.0, 200.0, coupling));
  c.system.cavity = CavityParams{1e9, 0.0, 1e6, 2.4e15, 1.0};
  c.fs = 1024.0;
  c.duration = 400.0;
  c.seed = 17;
  return c;
}

double variance(const std::vector<double>& x) {
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("identical seeds give identical records") {
  auto c = base_config(1e14);
  c.duration = 20.0;
  const auto a = simulate(c), b = simulate(c);
  CHECK(a == b);
  c.seed = 18;
  CHECK_FALSE(simulate(c) == a);
}

TEST_CASE("thermal motion obeys equipartition") {
  auto c = base_config();
  c.radiation_pressure = false;
  c.shot_noise = false;
  c.record.intensity = false;
  c.duration = 1000.0;
  c.settle_time = 10.0;
  const auto r = simulate(c);
  const auto& m = c.system.modes[0];
  const double x2 = std::pow(rms_thermal_displacement(m), 2);
  // About 1300 correlation times; statistical error near 3%.
  CHECK(variance(r.displacement[0]) == doctest::Approx(x2).epsilon(0.12));
}

TEST_CASE("simulated displacement PSD tracks the analytic Lorentzian within 1 dB") {
  auto c = base_config();
  c.radiation_pressure = false;
  c.shot_noise = false;
  c.record.intensity = false;
  c.settle_time = 10.0;
  const auto r = simulate(c);
  WelchOptions w;
  w.segment_length = 8192;
  const auto p = welch_psd(r.displacement[0], r.fs, w, PsdUnits::displacement);
  const auto& m = c.system.modes[0];
  for (double f : {20.0, 35.0, 40.0, 41.0, 42.0, 50.0, 80.0}) {
    const double band = p.band_mean(f - 0.25, f + 0.25);
    const double expect =
        thermal_displacement_psd(m, FrequencyGrid{f - 0.25, p.grid.df, 5}).band_mean(f - 0.25, f + 0.25);
    CHECK(std::abs(10.0 * std::log10(band / expect)) < 1.0);
  }
}

TEST_CASE("zero coupling leaves only shot noise in the intensity") {
  auto c = base_config(0.0);
  c.duration = 100.0;
  const auto r = simulate(c);
  for (double v : r.detuning) CHECK(v == 0.0);
  WelchOptions w;
  w.segment_length = 4096;
  const auto p = welch_psd(r.intensity, r.fs, w);
  CHECK(p.band_mean(10.0, 400.0) == doctest::Approx(r.shot_rin).epsilon(0.05));
  CHECK(r.shot_rin == doctest::Approx(shot_rin_level(c.system.cavity)));
}

TEST_CASE("derivative feedback cools the mode") {
  auto c = base_config(1e14);
  c.radiation_pressure = false;
  c.shot_noise = false;
  c.duration = 1000.0;
  c.settle_time = 20.0;
  const auto& m = c.system.modes[0];
  const auto hot = simulate(c);
  FeedbackConfig fb;
  fb.target_mode_indices = {0};
  fb.gain = 3.0 * m.mass * m.gamma_m;
  fb.band_center = m.omega_m;
  fb.band_width = 40.0 * m.gamma_m;
  c.feedback.push_back(fb);
  const auto cold = simulate(c);
  const double ratio = variance(cold.displacement[0]) / variance(hot.displacement[0]);
  CHECK(ratio == doctest::Approx(0.25).epsilon(0.3));
}

TEST_CASE("configuration invariants are enforced") {
  auto c = base_config(1e14);
  SUBCASE("undersampled") {
    c.fs = 500.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("structural damping") {
    c.system.modes[0].damping = DampingModel::structural;
    CHECK_THROWS_AS(simulate(c), std::invalid_argument);
  }
  SUBCASE("optical channels without light") {
    c.system.cavity.n_cav = 0.0;
    CHECK_THROWS_AS(simulate(c), std::invalid_argument);
  }
  SUBCASE("sample cap") {
    c.max_samples = 1000;
    CHECK_THROWS_AS(simulate(c), std::invalid_argument);
  }
  SUBCASE("scale vector length") {
    c.force_coupling_scale = {1.0, 1.0};
    CHECK_THROWS_AS(simulate(c), std::invalid_argument);
  }
  SUBCASE("negative feedback gain") {
    c.feedback.push_back(FeedbackConfig{{0}, -1.0, 1.0, 1.0});
    CHECK_THROWS_AS(simulate(c), std::invalid_argument);
  }
}

TEST_CASE("runaway motion raises SimulationUnstable") {
  auto c = base_config(1e14);
  c.duration = 30.0;
  const auto& m = c.system.modes[0];
  const double x_th = rms_thermal_displacement(m);
  c.drive = DriveTone{0, 1e7 * x_th * m.mass * m.omega_m * m.gamma_m, m.omega_m, 0.0};
  CHECK_THROWS_AS(simulate(c), SimulationUnstable);
}
