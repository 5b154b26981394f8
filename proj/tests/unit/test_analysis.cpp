#include "thirsty/analysis.hpp"

#include "thirsty/errors.hpp"
#include "thirsty/time.hpp"

#include <doctest.h>

#include <cmath>

using namespace thirsty;

namespace {

SourceFactorMap grid_factors() {
  SourceFactorMap m;
  m.emplace("coal", SourceFactors{"coal", 1.0, 820.0, ""});
  m.emplace("gas", SourceFactors{"gas", 0.7, 490.0, ""});
  m.emplace("wind", SourceFactors{"wind", 0.01, 11.0, ""});
  m.emplace("solar", SourceFactors{"solar", 0.1, 45.0, ""});
  m.emplace("hydro", SourceFactors{"hydro", 17.0, 24.0, ""});
  m.emplace("nuclear", SourceFactors{"nuclear", 2.7, 12.0, "wet_tower"});
  return m;
}

/// Constant conditions: fixed WUE 1.0, PUE 1.2, gas-heavy mix, 1 MW for 10 h.
ScenarioBundle constant_bundle() {
  ScenarioBundle b;
  b.pue = 1.2;
  b.curve = WueCurve{"flat", {{0.0, 1.0}}};
  b.factors = grid_factors();
  b.weather.step_s = 3600;
  b.mix.step_s = 3600;
  b.power.step_s = 3600;
  for (int i = 0; i < 10; ++i) {
    b.weather.samples.push_back(WeatherSample{3600 * i, 20.0, 50.0});
    b.mix.samples.push_back(EnergyMixSample{
        3600 * i, {{"gas", 0.8}, {"wind", 0.1}, {"solar", 0.1}}});
    b.power.samples.push_back(PowerSample{3600 * i, 1000.0});
  }
  return b;
}

} // namespace

TEST_CASE("scenario shares validate like any mix") {
  CHECK_NOTHROW(validate(Scenario{"ok", {{{"wind", 1.0}}}}));
  CHECK_NOTHROW(validate(Scenario{"asis", std::nullopt}));
  CHECK_THROWS_AS(validate(Scenario{"", std::nullopt}), ValidationError);
  CHECK_THROWS_AS(validate(Scenario{"bad", {{{"wind", 0.5}}}}), ValidationError);
  CHECK_THROWS_AS(validate(Scenario{"neg", {{{"wind", 1.2}, {"coal", -0.2}}}}),
                  ValidationError);
}

TEST_CASE("the baseline row comes first and carries zero deltas") {
  const ScenarioBundle b = constant_bundle();
  const auto rows = run_scenarios(b, {Scenario{"all-coal", {{{"coal", 1.0}}}}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].name == "baseline");
  CHECK(rows[0].energy_kwh == 10000.0);
  REQUIRE(rows[0].delta_water_total_pct.has_value());
  CHECK(*rows[0].delta_water_total_pct == 0.0);
  CHECK(*rows[0].delta_carbon_pct == 0.0);
}

TEST_CASE("an unchanged scenario reproduces the baseline bit for bit") {
  const ScenarioBundle b = constant_bundle();
  const ScenarioOutcome out = run_scenario(b, Scenario{"as-is", std::nullopt});
  const auto rows = run_scenarios(b, {});
  REQUIRE(rows.size() == 1);
  CHECK(out.energy_kwh == rows[0].energy_kwh);
  CHECK(out.water_direct_l == rows[0].water_direct_l);
  CHECK(out.water_indirect_l == rows[0].water_indirect_l);
  CHECK(out.water_total_l == rows[0].water_total_l);
  CHECK(out.carbon_g == rows[0].carbon_g);
  CHECK(*out.delta_water_total_pct == 0.0);
  CHECK(*out.delta_carbon_pct == 0.0);
}

TEST_CASE("mix overrides shift carbon and water the way the factors say") {
  const ScenarioBundle b = constant_bundle();
  const auto rows = run_scenarios(
      b, {Scenario{"all-coal", {{{"coal", 1.0}}}},
          Scenario{"all-nuclear", {{{"nuclear", 1.0}}}},
          Scenario{"all-hydro", {{{"hydro", 1.0}}}}});
  REQUIRE(rows.size() == 4);

  // Baseline mix: CI 0.8*490 + 0.1*11 + 0.1*45 = 397.6 g/kWh, EWF 0.571.
  const double base_ci = 397.6;
  const ScenarioOutcome& coal = rows[1];
  REQUIRE(coal.delta_carbon_pct.has_value());
  CHECK(*coal.delta_carbon_pct ==
        doctest::Approx((820.0 - base_ci) / base_ci * 100.0).epsilon(1e-9));
  CHECK(*coal.delta_carbon_pct > 100.0);

  const ScenarioOutcome& nuclear = rows[2];
  CHECK(*nuclear.delta_carbon_pct ==
        doctest::Approx((12.0 - base_ci) / base_ci * 100.0).epsilon(1e-9));
  CHECK(*nuclear.delta_carbon_pct < -80.0);

  // Hydro's huge EWF balloons indirect water: wi goes from
  // 1 + 1.2*0.571 = 1.6852 to 1 + 1.2*17 = 21.4.
  const ScenarioOutcome& hydro = rows[3];
  REQUIRE(hydro.delta_water_total_pct.has_value());
  CHECK(*hydro.delta_water_total_pct ==
        doctest::Approx((21.4 - 1.6852) / 1.6852 * 100.0).epsilon(1e-9));
  CHECK(*hydro.delta_water_total_pct > 60.0);
  // Direct water is untouched by the mix.
  CHECK(*hydro.delta_water_direct_pct == 0.0);
}

TEST_CASE("a scenario naming an unknown source fails resolution") {
  const ScenarioBundle b = constant_bundle();
  CHECK_THROWS_WITH_AS(run_scenario(b, Scenario{"fusion", {{{"fusion", 1.0}}}}),
                       doctest::Contains("fusion"), ResolutionError);
}

TEST_CASE("the sign of a nuclear water delta depends on the baseline") {
  // Against a hydro-heavy grid (EWF 17) nuclear (EWF 2.7) saves water;
  // against a wind-heavy grid (EWF 0.01) the same swap costs water. The
  // location-dependence is entirely in the baseline mix.
  const Scenario all_nuclear{"all-nuclear", {{{"nuclear", 1.0}}}};

  ScenarioBundle hydro_site = constant_bundle();
  for (auto& s : hydro_site.mix.samples)
    s.shares = {{"hydro", 1.0}};
  const ScenarioOutcome vs_hydro = run_scenario(hydro_site, all_nuclear);
  REQUIRE(vs_hydro.delta_water_total_pct.has_value());
  CHECK(*vs_hydro.delta_water_total_pct < 0.0);

  ScenarioBundle wind_site = constant_bundle();
  for (auto& s : wind_site.mix.samples)
    s.shares = {{"wind", 1.0}};
  const ScenarioOutcome vs_wind = run_scenario(wind_site, all_nuclear);
  REQUIRE(vs_wind.delta_water_total_pct.has_value());
  CHECK(*vs_wind.delta_water_total_pct > 0.0);
}

TEST_CASE("zero baseline buckets yield empty deltas, except zero-to-zero") {
  ScenarioBundle b = constant_bundle();
  // Wind-only baseline with PUE 1: nearly no indirect water, but not zero;
  // use a zero-power bundle for the true-zero case instead.
  for (auto& s : b.power.samples) s.power_kw = 0.0;
  const ScenarioOutcome out =
      run_scenario(b, Scenario{"all-coal", {{{"coal", 1.0}}}});
  CHECK(out.energy_kwh == 0.0);
  REQUIRE(out.delta_water_total_pct.has_value());
  CHECK(*out.delta_water_total_pct == 0.0); // zero on both sides
}

namespace {

IntensitySeries varying_intensity() {
  IntensitySeries is;
  is.step_s = 3600;
  for (int h = 0; h < 24; ++h) {
    const double wue = (h == 12 || h == 13) ? 0.5 : 2.0;
    const WaterIntensity wi = water_intensity(wue, 1.0, 0.0);
    IntensitySample s;
    s.timestamp = 3600 * h;
    s.wue = wue;
    s.ewf = 0.0;
    s.pue = 1.0;
    s.wi_direct = wi.wi_direct;
    s.wi_indirect = wi.wi_indirect;
    s.wi = wi.wi;
    s.ci = 100.0;
    is.samples.push_back(s);
  }
  return is;
}

PowerTrace two_hour_profile(double kw = 100.0) {
  PowerTrace p;
  p.step_s = 3600;
  p.samples = {{0, kw}, {3600, kw}};
  return p;
}

} // namespace

TEST_CASE("start-time ranking finds the cheap window and breaks ties early") {
  const IntensitySeries is = varying_intensity();
  const std::vector<UnixSeconds> candidates = {0, 6 * 3600, 12 * 3600};
  const RankResult r = rank_start_times(candidates, 2.0, two_hour_profile(), is);

  REQUIRE(r.costs.size() == 3);
  CHECK(r.costs[0].water_l == 400.0); // 100 kWh x 2.0 twice
  CHECK(r.costs[2].water_l == 100.0); // the cheap trough
  CHECK(r.costs[0].energy_kwh == 200.0);
  CHECK(r.costs[0].carbon_g == 20000.0);

  REQUIRE(r.water_order.size() == 3);
  CHECK(r.water_order[0] == 2);
  CHECK(r.water_order[1] == 0); // tie with candidate 1, earlier start wins
  CHECK(r.water_order[2] == 1);
  // Constant CI: carbon ranking falls back to start order entirely.
  CHECK(r.carbon_order == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("ranking is invariant under scaling the profile") {
  const IntensitySeries is = varying_intensity();
  const std::vector<UnixSeconds> candidates = {0, 4 * 3600, 12 * 3600, 20 * 3600};
  const RankResult a = rank_start_times(candidates, 2.0, two_hour_profile(1.0), is);
  const RankResult b = rank_start_times(candidates, 2.0, two_hour_profile(8.0), is);
  CHECK(a.water_order == b.water_order);
  CHECK(a.carbon_order == b.carbon_order);
}

TEST_CASE("ranking rejects uncovered windows and fractional durations") {
  const IntensitySeries is = varying_intensity();
  SUBCASE("window past coverage") {
    CHECK_THROWS_AS(rank_start_times({23 * 3600}, 2.0, two_hour_profile(), is),
                    AlignmentError);
  }
  SUBCASE("window before coverage") {
    CHECK_THROWS_AS(rank_start_times({-3600}, 2.0, two_hour_profile(), is),
                    AlignmentError);
  }
  SUBCASE("fractional duration") {
    CHECK_THROWS_AS(rank_start_times({0}, 1.5, two_hour_profile(), is),
                    ValidationError);
  }
  SUBCASE("step mismatch") {
    PowerTrace p;
    p.step_s = 1800;
    p.samples = {{0, 1.0}, {1800, 1.0}};
    CHECK_THROWS_AS(rank_start_times({0}, 1.0, p, is), AlignmentError);
  }
  SUBCASE("exact fit at the series tail is fine") {
    CHECK_NOTHROW(rank_start_times({22 * 3600}, 2.0, two_hour_profile(), is));
  }
}

TEST_CASE("off-lattice candidates are costed by zero-order hold") {
  const IntensitySeries is = varying_intensity();
  // Starting half past hour 12: both step instants (12:30, 13:30) hold the
  // trough samples at 12:00 and 13:00.
  const RankResult r =
      rank_start_times({12 * 3600 + 1800}, 2.0, two_hour_profile(), is);
  REQUIRE(r.costs.size() == 1);
  CHECK(r.costs[0].water_l == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("ratio maps divide scarcity-weighted embodied by operational") {
  RatioMapSpec spec;
  spec.mfg_wsi_axis = {1.0, 2.0};
  spec.op_wsi_axis = {1.0, 2.0};
  spec.wue = 1.0;
  spec.pue = 1.0;
  spec.ewf = 1.0;
  spec.energy_kwh = 8.0;

  ProcessParams p;
  p.node_nm = 7.0;
  p.site = "fab_a";
  p.w_ic_l = 0.6;
  p.upw_l_per_cm2 = 0.5;
  p.pcw_l_per_cm2 = 0.3;
  p.wpa_l_per_cm2 = 0.2;
  p.wpc_dram_l_per_gb = 0.8;
  p.wpc_ssd_l_per_gb = 0.022;
  p.wpc_hdd_l_per_gb = 0.033;
  DeviceSpec d;
  d.kind = DeviceKind::CPU;
  d.count = 10;
  d.n_ic = 1;
  d.die_area_mm2 = 100.0;
  d.process_node_nm = 7.0;
  d.yield_rate = 1.0;
  d.fab_site = "fab_a";
  spec.inventory.system_name = "toy";
  spec.inventory.params = {p};
  spec.inventory.devices = {d};

  const RatioMap m = embodied_operational_ratio_map(spec);
  CHECK(m.embodied_l == 16.0);    // 10 manufacturing + 6 packaging
  CHECK(m.operational_l == 16.0); // 8 kWh x (1 + 1x1) L/kWh
  REQUIRE(m.ratios.size() == 2);
  CHECK(m.ratios[0][0] == 1.0);
  CHECK(m.ratios[0][1] == 0.5);
  CHECK(m.ratios[1][0] == 2.0);
  CHECK(m.ratios[1][1] == 1.0);
  REQUIRE(m.unit_contour.size() == 2);
  CHECK(m.unit_contour[0].first == 1.0);
  CHECK(m.unit_contour[0].second == 1.0);
  CHECK(m.unit_contour[1].second == 2.0);

  SUBCASE("zero operational water is refused") {
    spec.energy_kwh = 0.0;
    CHECK_THROWS_WITH_AS(embodied_operational_ratio_map(spec),
                         doctest::Contains("undefined"), ValidationError);
  }
  SUBCASE("axes must increase") {
    spec.mfg_wsi_axis = {2.0, 1.0};
    CHECK_THROWS_AS(embodied_operational_ratio_map(spec), ValidationError);
  }
}

TEST_CASE("series comparison: monthly means, normalization, rank correlation") {
  const std::vector<UnixSeconds> ts = {
      parse_utc("2023-01-10T00:00:00Z"), parse_utc("2023-01-20T00:00:00Z"),
      parse_utc("2023-02-10T00:00:00Z"), parse_utc("2023-02-20T00:00:00Z")};
  const std::vector<double> wi = {1.0, 3.0, 5.0, 7.0};

  SUBCASE("co-monotone traces correlate at +1") {
    const std::vector<double> ci = {10.0, 30.0, 50.0, 70.0};
    const SeriesComparison c = compare_series(ts, wi, ci);
    REQUIRE(c.wi_monthly.size() == 2);
    CHECK(c.wi_monthly[0].year == 2023);
    CHECK(c.wi_monthly[0].month == 1);
    CHECK(c.wi_monthly[0].mean == 2.0);
    CHECK(c.wi_monthly[1].mean == 6.0);
    REQUIRE(c.wi_normalized.size() == 4);
    CHECK(c.wi_normalized[0] == 0.0);
    CHECK(c.wi_normalized[3] == 1.0);
    CHECK(c.wi_normalized[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(c.rank_correlation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.method == "spearman");
  }
  SUBCASE("reversed traces correlate at -1") {
    const std::vector<double> ci = {70.0, 50.0, 30.0, 10.0};
    const SeriesComparison c = compare_series(ts, wi, ci);
    CHECK(c.rank_correlation == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("a constant trace normalizes to zero and correlates as zero") {
    const std::vector<double> ci = {5.0, 5.0, 5.0, 5.0};
    const SeriesComparison c = compare_series(ts, wi, ci);
    for (double v : c.ci_normalized) CHECK(v == 0.0);
    CHECK(c.rank_correlation == 0.0);
  }
  SUBCASE("rank correlation ignores monotone rescaling") {
    std::vector<double> ci;
    for (double v : wi) ci.push_back(std::exp(v));
    const SeriesComparison c = compare_series(ts, wi, ci);
    CHECK(c.rank_correlation == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("misaligned traces are rejected") {
    CHECK_THROWS_AS(compare_series(ts, wi, {1.0, 2.0}), AlignmentError);
    std::vector<UnixSeconds> bad = ts;
    std::swap(bad[1], bad[2]);
    CHECK_THROWS_AS(compare_series(bad, wi, wi), AlignmentError);
  }
}

TEST_CASE("comparison accepts an intensity series directly") {
  IntensitySeries is;
  is.step_s = 86400;
  const UnixSeconds start = parse_utc("2023-03-01T00:00:00Z");
  for (int i = 0; i < 40; ++i) {
    const double wue = 0.5 + 0.01 * i;
    const WaterIntensity wi = water_intensity(wue, 1.0, 0.0);
    IntensitySample s;
    s.timestamp = start + 86400 * i;
    s.wue = wue;
    s.pue = 1.0;
    s.wi_direct = wi.wi_direct;
    s.wi_indirect = wi.wi_indirect;
    s.wi = wi.wi;
    s.ci = 400.0 - i;
    is.samples.push_back(s);
  }
  const SeriesComparison c = compare_series(is);
  REQUIRE(c.wi_monthly.size() == 2); // March and April
  CHECK(c.rank_correlation == doctest::Approx(-1.0).epsilon(1e-12));
}
