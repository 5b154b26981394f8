#include "thirsty/analysis.hpp"
#include "thirsty/footprint.hpp"
#include "thirsty/ingestion.hpp"
#include "thirsty/operational.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

// Microbenchmarks for the paths that dominate a year-scale run: the
// intensity builder, the step integrator, the wet-bulb regression, and the
// job-log power estimator.

namespace {

using namespace thirsty;

WueCurve bench_curve() {
  WueCurve c;
  c.name = "bench";
  c.knots = {{0.0, 0.05}, {5.0, 0.3}, {10.0, 0.7},
             {15.0, 1.1}, {20.0, 1.5}, {25.0, 2.0}, {30.0, 2.5}};
  return c;
}

SourceFactorMap bench_factors() {
  SourceFactorMap f;
  f["coal"] = {"coal", 1.0, 820.0, ""};
  f["gas"] = {"gas", 0.7, 490.0, ""};
  f["wind"] = {"wind", 0.01, 11.0, ""};
  return f;
}

WeatherSeries sinusoidal_weather(std::size_t hours) {
  WeatherSeries w;
  w.step_s = 3600;
  w.samples.reserve(hours);
  for (std::size_t h = 0; h < hours; ++h) {
    const double phase = 2.0 * M_PI * static_cast<double>(h % 24) / 24.0;
    w.samples.push_back({static_cast<UnixSeconds>(h) * 3600,
                         25.0 + 7.0 * std::sin(phase),
                         55.0 - 15.0 * std::sin(phase)});
  }
  return w;
}

EnergyMixSeries swinging_mix(std::size_t hours) {
  EnergyMixSeries m;
  m.step_s = 3600;
  m.samples.reserve(hours);
  for (std::size_t h = 0; h < hours; ++h) {
    const double wind = 0.1 + 0.2 * ((h % 24) < 12 ? 1.0 : 0.0);
    m.samples.push_back({static_cast<UnixSeconds>(h) * 3600,
                         {{"gas", 0.7 - wind}, {"coal", 0.3}, {"wind", wind}}});
  }
  return m;
}

PowerTrace noisy_power(std::size_t hours) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(800.0, 1200.0);
  PowerTrace p;
  p.step_s = 3600;
  p.samples.reserve(hours);
  for (std::size_t h = 0; h < hours; ++h)
    p.samples.push_back({static_cast<UnixSeconds>(h) * 3600, u(rng)});
  return p;
}

void bm_wet_bulb(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    t += 0.001;
    if (t > 40.0)
      t = 0.0;
    benchmark::DoNotOptimize(wet_bulb_temperature(t, 50.0));
  }
}
BENCHMARK(bm_wet_bulb);

void bm_build_intensity_year(benchmark::State& state) {
  const std::size_t hours = 365 * 24;
  const WeatherSeries weather = sinusoidal_weather(hours);
  const EnergyMixSeries mix = swinging_mix(hours);
  const WueCurve curve = bench_curve();
  const SourceFactorMap factors = bench_factors();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        build_intensity_series(weather, mix, 1.2, curve, factors));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(hours));
}
BENCHMARK(bm_build_intensity_year);

void bm_operational_footprint_year(benchmark::State& state) {
  const std::size_t hours = 365 * 24;
  const IntensitySeries intensity =
      build_intensity_series(sinusoidal_weather(hours), swinging_mix(hours),
                             1.2, bench_curve(), bench_factors());
  const PowerTrace power = noisy_power(hours);
  for (auto _ : state)
    benchmark::DoNotOptimize(operational_footprint(power, intensity));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(hours));
}
BENCHMARK(bm_operational_footprint_year);

void bm_embodied_footprint(benchmark::State& state) {
  HardwareInventory inv;
  inv.system_name = "bench";
  inv.params = {{7.0, "fab", 0.6, 4.2, 2.1, 1.1, 0.8, 0.022, 0.033}};
  for (int i = 0; i < 64; ++i) {
    DeviceSpec d;
    d.kind = (i % 2) ? DeviceKind::GPU : DeviceKind::CPU;
    d.count = 128;
    d.n_ic = 2;
    d.die_area_mm2 = 400.0;
    d.process_node_nm = 7.0;
    d.fab_site = "fab";
    inv.devices.push_back(d);
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(embodied_footprint(inv));
}
BENCHMARK(bm_embodied_footprint);

void bm_utilization_to_power_month(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> start(0, 30 * 86400 - 3600);
  std::uniform_int_distribution<std::int64_t> dur(600, 86400);
  std::uniform_int_distribution<std::int64_t> nodes(1, 8);
  std::vector<JobRecord> jobs;
  for (int j = 0; j < 2000; ++j) {
    JobRecord job;
    job.job_id = "j" + std::to_string(j);
    job.start = start(rng);
    job.end = job.start + dur(rng);
    job.nodes_used = nodes(rng);
    jobs.push_back(job);
  }
  const NodePowerModel model{0.5, 0.2};
  for (auto _ : state)
    benchmark::DoNotOptimize(utilization_to_power(jobs, 20000, model, 3600, 0,
                                                  31 * 86400));
}
BENCHMARK(bm_utilization_to_power_month);

void bm_rank_week(benchmark::State& state) {
  const std::size_t hours = 14 * 24;
  const IntensitySeries intensity =
      build_intensity_series(sinusoidal_weather(hours), swinging_mix(hours),
                             1.2, bench_curve(), bench_factors());
  PowerTrace profile;
  profile.step_s = 3600;
  for (int h = 0; h < 24; ++h)
    profile.samples.push_back({static_cast<UnixSeconds>(h) * 3600, 500.0});
  std::vector<UnixSeconds> candidates;
  for (int h = 0; h < 7 * 24; ++h)
    candidates.push_back(static_cast<UnixSeconds>(h) * 3600);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        rank_start_times(candidates, 24.0, profile, intensity));
}
BENCHMARK(bm_rank_week);

} // namespace

BENCHMARK_MAIN();
