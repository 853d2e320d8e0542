#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "tinsim/constants.hpp"
#include "tinsim/measure.hpp"

using namespace tinsim;
using constants::two_pi;

namespace {

TimeSeriesRecord synthetic_record(double n_c, std::size_t n, double level) {
  TimeSeriesRecord r;
  r.fs = 100.0;
  r.n_samples = n;
  r.system.modes.push_back(MechanicalMode{1e-9, two_pi * 5.0, 0.1, 1e14, 298.0});
  r.system.cavity = CavityParams{1e9, 0.0, n_c, 2.4e15, 1.0};
  r.displacement.assign(1, std::vector<double>(n, 0.0));
  r.detuning.assign(n, 0.0);
  r.intensity.assign(n, 1.0);
  r.phase.resize(n);
  // Deterministic broadband signal: a sum of incommensurate tones.
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 1; k <= 40; ++k) s += std::sin(0.37 * k * k + two_pi * (1.013 * k) * i / r.fs);
    r.phase[i] = level * s;
  }
  return r;
}

}  // namespace

TEST_CASE("TINBA scaling fit needs enough records over enough range") {
  std::vector<TimeSeriesRecord> recs;
  for (int k = 0; k < 4; ++k) recs.push_back(synthetic_record(std::pow(10.0, 0.5 * k), 4096, std::pow(10.0, 0.5 * k)));
  TinbaOptions o;
  o.f_lo = 5.0;
  o.f_hi = 30.0;
  o.welch.segment_length = 512;
  o.subtract_imprecision = false;
  const auto rep = measure_tinba(recs, o);
  // Band power goes as level^2 = n^2.
  CHECK(rep.slope == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rep.points.size() == 4);

  CHECK_THROWS_AS(measure_tinba(std::span(recs).first(3), o), std::invalid_argument);
  auto narrow = recs;
  for (int k = 0; k < 4; ++k) narrow[k].system.cavity.n_cav = 1.0 + 0.1 * k;
  CHECK_THROWS_AS(measure_tinba(narrow, o), std::invalid_argument);
  o.extra_floor = [](const TimeSeriesRecord&, double) { return 1e300; };
  CHECK_THROWS_AS(measure_tinba(recs, o), std::domain_error);
  o.extra_floor = {};
  o.f_hi = 1.0;
  CHECK_THROWS_AS(measure_tinba(recs, o), std::invalid_argument);
}

TEST_CASE("coherence measurement needs 50 segments and the phase channel") {
  WelchOptions w;
  w.segment_length = 256;
  w.overlap = 0.0;
  auto r = synthetic_record(1e6, 256 * 40, 1.0);
  CHECK_THROWS_AS(measure_coherence(r, w), std::invalid_argument);
  r.phase.clear();
  CHECK_THROWS_AS(measure_coherence(r, w), std::invalid_argument);
}

TEST_CASE("TIN estimate subtracts the shot floor and needs intensity") {
  auto r = synthetic_record(1e6, 8192, 1.0);
  r.shot_rin = 1e-3;
  WelchOptions w;
  w.segment_length = 512;
  const auto tin = measure_tin(r, w);
  for (double v : tin.values) CHECK(v == 0.0);  // constant intensity sits below the floor
  r.intensity.clear();
  CHECK_THROWS_AS(measure_tin(r, w), std::invalid_argument);
  CHECK_THROWS_AS(measure_apparent_displacement(synthetic_record(1, 10, 1), w), std::invalid_argument);
}
