#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "tinsim/constants.hpp"
#include "tinsim/oracle.hpp"
#include "tinsim/spectra.hpp"
#include "tinsim/welch.hpp"

using namespace tinsim;
using constants::two_pi;

namespace {

SystemParams desk_system() {
  SystemParams s;
  for (double f : {41.0, 183.0, 260.0}) {
    s.modes.push_back(MechanicalMode{1e-9, two_pi * f, two_pi * f / 1000.0, two_pi * 9e14, 298.0});
  }
  s.cavity = CavityParams{two_pi * 1.6e8, 0.0, 1e13, 2.4e15, 1.0};
  return s;
}

void BM_SelfConvolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double df = 1200.0 / static_cast<double>(n);
  const auto s_nu = multimode_frequency_noise(desk_system(), FrequencyGrid{0.5 * df, df, n});
  for (auto _ : state) benchmark::DoNotOptimize(self_convolve(s_nu));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SelfConvolve)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Complexity();

void BM_Welch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(std::size_t{1} << 22);
  for (auto& v : x) v = g(rng);
  WelchOptions o;
  o.segment_length = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(welch_psd(x, 1.0, o));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * x.size() * sizeof(double)));
}
BENCHMARK(BM_Welch)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_Simulate(benchmark::State& state) {
  SimConfig c;
  c.system = desk_system();
  c.fs = 6000.0;
  c.duration = static_cast<double>(state.range(0));
  c.radiation_pressure = state.range(1) != 0;
  // Keep the optical spring well inside the stable region when it acts.
  if (c.radiation_pressure) c.system.cavity.n_cav = 1e8;
  for (auto _ : state) {
    c.seed++;
    benchmark::DoNotOptimize(simulate(c));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * c.n_samples()));
}
BENCHMARK(BM_Simulate)->Args({10, 0})->Args({10, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
