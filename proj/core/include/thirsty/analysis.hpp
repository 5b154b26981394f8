#pragma once

#include "thirsty/footprint.hpp"
#include "thirsty/operational.hpp"
#include "thirsty/series.hpp"
#include "thirsty/time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace thirsty {

/// One what-if row: either keep the baseline mix (`mix_override` empty) or
/// replace every mix sample with a fixed shares map.
struct Scenario {
  std::string name;
  std::optional<std::map<std::string, double>> mix_override;
};

void validate(const Scenario& scenario);

/// Everything needed to evaluate one site's operational footprint.
struct ScenarioBundle {
  WeatherSeries weather;
  EnergyMixSeries mix;
  double pue = 1.0;
  WueCurve curve;
  SourceFactorMap factors;
  PowerTrace power;
};

/// Totals under one scenario plus deltas against the baseline. Deltas are
/// empty when the baseline bucket is zero while the scenario's is not.
struct ScenarioOutcome {
  std::string name;
  double energy_kwh = 0.0;
  double water_direct_l = 0.0;
  double water_indirect_l = 0.0;
  double water_total_l = 0.0;
  double carbon_g = 0.0;
  std::optional<double> delta_water_total_pct;
  std::optional<double> delta_water_direct_pct;
  std::optional<double> delta_water_indirect_pct;
  std::optional<double> delta_carbon_pct;
};

/// Evaluate one scenario against the baseline bundle. The baseline and the
/// override run through the identical pipeline, so the `unchanged` scenario
/// reproduces baseline numbers bit-for-bit and reports zero deltas.
ScenarioOutcome run_scenario(const ScenarioBundle& baseline,
                             const Scenario& scenario);

/// Evaluate several scenarios against one baseline (computed once).
/// The first element of the result is the baseline itself, named "baseline",
/// followed by one outcome per scenario in input order.
std::vector<ScenarioOutcome> run_scenarios(const ScenarioBundle& baseline,
                                           const std::vector<Scenario>& scenarios);

struct CandidateCost {
  UnixSeconds start = 0;
  double energy_kwh = 0.0;
  double water_l = 0.0;
  double carbon_g = 0.0;
};

struct RankResult {
  std::vector<CandidateCost> costs;     // input order
  std::vector<std::size_t> water_order; // indices into costs, cheapest first
  std::vector<std::size_t> carbon_order;
};

/**
 * Cost out a fixed power profile started at each candidate instant,
 * integrating energy × wi and energy × ci over [t, t + duration). The
 * profile must share the intensity series' step; each candidate window must
 * be fully covered by the series (zero-order hold between samples), else
 * AlignmentError. Rankings sort ascending by cost with ties broken by the
 * earlier start.
 */
RankResult rank_start_times(const std::vector<UnixSeconds>& candidates,
                            double duration_hours, const PowerTrace& profile,
                            const IntensitySeries& intensity);

/// Grid spec for the embodied-vs-operational trade-off map. Operational
/// water is energy × (wue + pue × ewf); embodied water comes from the
/// inventory. Axis values are candidate WSI weights.
struct RatioMapSpec {
  std::vector<double> mfg_wsi_axis;
  std::vector<double> op_wsi_axis;
  double wue = 0.0;
  double pue = 1.0;
  double ewf = 0.0;
  double energy_kwh = 0.0;
  HardwareInventory inventory;
};

struct RatioMap {
  double embodied_l = 0.0;
  double operational_l = 0.0;
  std::vector<double> mfg_wsi_axis;
  std::vector<double> op_wsi_axis;
  std::vector<std::vector<double>> ratios; // [mfg index][op index]
  /// Points (m, o) with ratio exactly 1: o = m × embodied/operational.
  std::vector<std::pair<double, double>> unit_contour;
};

RatioMap embodied_operational_ratio_map(const RatioMapSpec& spec);

struct MonthlyMean {
  int year = 0;
  unsigned month = 0;
  double mean = 0.0;
};

struct SeriesComparison {
  std::vector<MonthlyMean> wi_monthly;
  std::vector<MonthlyMean> ci_monthly;
  std::vector<double> wi_normalized; // min-max scaled to [0, 1]
  std::vector<double> ci_normalized;
  double rank_correlation = 0.0;
  std::string method = "spearman"; // average ranks on ties
};

/// Water-vs-carbon comparison of two aligned traces: calendar-month means,
/// min-max normalized traces, and Spearman rank correlation. A constant
/// trace normalizes to 0 and correlates as 0.
SeriesComparison compare_series(const std::vector<UnixSeconds>& timestamps,
                                const std::vector<double>& wi,
                                const std::vector<double>& ci);

/// Same, reading wi and ci from an intensity series.
SeriesComparison compare_series(const IntensitySeries& intensity);

} // namespace thirsty
