#include "thirsty/analysis.hpp"

#include "thirsty/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thirsty {

void validate(const Scenario& scenario) {
  if (scenario.name.empty())
    throw ValidationError("scenario without a name");
  if (!scenario.mix_override) return;
  const auto& shares = *scenario.mix_override;
  if (shares.empty())
    throw ValidationError("scenario '" + scenario.name +
                          "': mix override has no shares");
  double sum = 0.0;
  for (const auto& [source, share] : shares) {
    if (!std::isfinite(share) || share < 0.0 || share > 1.0)
      throw ValidationError("scenario '" + scenario.name + "': share for '" +
                            source + "' outside [0, 1]");
    sum += share;
  }
  if (std::fabs(sum - 1.0) > mix_share_tolerance)
    throw ValidationError("scenario '" + scenario.name + "': shares sum to " +
                          std::to_string(sum) + ", expected 1 within 1e-6");
}

namespace {

/// Both baseline and overrides run through this one path; `unchanged`
/// scenarios therefore reproduce baseline numbers bit-for-bit.
ScenarioOutcome evaluate_bundle(const ScenarioBundle& bundle,
                                const std::optional<std::map<std::string, double>>& override_shares,
                                const std::string& name) {
  EnergyMixSeries mix = bundle.mix;
  if (override_shares) {
    for (const auto& [source, share] : *override_shares) {
      (void)share;
      if (!bundle.factors.count(source))
        throw ResolutionError("scenario '" + name +
                              "' overrides with unknown energy source '" +
                              source + "'");
    }
    for (auto& sample : mix.samples) sample.shares = *override_shares;
  }
  const IntensitySeries intensity = build_intensity_series(
      bundle.weather, mix, bundle.pue, bundle.curve, bundle.factors);
  const OperationalResult op = operational_footprint(bundle.power, intensity);

  ScenarioOutcome out;
  out.name = name;
  out.energy_kwh = op.energy_kwh;
  out.water_direct_l = op.direct.liters();
  out.water_indirect_l = op.indirect.liters();
  out.water_total_l = op.total.liters();
  out.carbon_g = op.carbon_g;
  return out;
}

std::optional<double> delta_pct(double value, double base) {
  if (base == 0.0) {
    if (value == 0.0) return 0.0;
    return std::nullopt; // undefined against a zero baseline
  }
  return (value - base) / base * 100.0;
}

void fill_deltas(ScenarioOutcome& out, const ScenarioOutcome& base) {
  out.delta_water_total_pct = delta_pct(out.water_total_l, base.water_total_l);
  out.delta_water_direct_pct = delta_pct(out.water_direct_l, base.water_direct_l);
  out.delta_water_indirect_pct =
      delta_pct(out.water_indirect_l, base.water_indirect_l);
  out.delta_carbon_pct = delta_pct(out.carbon_g, base.carbon_g);
}

} // namespace

std::vector<ScenarioOutcome> run_scenarios(const ScenarioBundle& baseline,
                                           const std::vector<Scenario>& scenarios) {
  for (const auto& s : scenarios) validate(s);

  std::vector<ScenarioOutcome> out;
  out.reserve(scenarios.size() + 1);
  out.push_back(evaluate_bundle(baseline, std::nullopt, "baseline"));
  fill_deltas(out.front(), out.front());
  for (const auto& s : scenarios) {
    ScenarioOutcome o = evaluate_bundle(baseline, s.mix_override, s.name);
    fill_deltas(o, out.front());
    out.push_back(std::move(o));
  }
  return out;
}

ScenarioOutcome run_scenario(const ScenarioBundle& baseline,
                             const Scenario& scenario) {
  return run_scenarios(baseline, {scenario}).back();
}

RankResult rank_start_times(const std::vector<UnixSeconds>& candidates,
                            double duration_hours, const PowerTrace& profile,
                            const IntensitySeries& intensity) {
  validate(profile);
  validate(intensity);
  if (candidates.empty())
    throw ValidationError("no start-time candidates");
  if (!std::isfinite(duration_hours) || duration_hours <= 0.0)
    throw ValidationError("duration must be > 0 hours");
  const std::int64_t step = intensity.step_s;
  if (profile.step_s != step)
    throw AlignmentError("power profile step " + std::to_string(profile.step_s) +
                         " s does not match intensity step " +
                         std::to_string(step) + " s");
  const auto duration_s = static_cast<std::int64_t>(std::llround(duration_hours * 3600.0));
  if (duration_s % step != 0)
    throw ValidationError("duration of " + std::to_string(duration_s) +
                          " s is not a whole number of " + std::to_string(step) +
                          " s steps");
  const std::size_t n = static_cast<std::size_t>(duration_s / step);
  if (profile.samples.size() < n)
    throw ValidationError("power profile covers only " +
                          std::to_string(profile.samples.size()) +
                          " steps, duration needs " + std::to_string(n));
  const UnixSeconds profile0 = profile.samples.front().timestamp;
  for (std::size_t k = 0; k < n; ++k)
    if (profile.samples[k].timestamp !=
        profile0 + static_cast<UnixSeconds>(k) * step)
      throw AlignmentError("power profile has a gap; resample first");

  const auto& is = intensity.samples;
  const UnixSeconds cover_start = is.front().timestamp;
  const UnixSeconds cover_end = is.back().timestamp + step;
  const double step_h = static_cast<double>(step) / 3600.0;

  RankResult out;
  out.costs.reserve(candidates.size());
  for (const UnixSeconds start : candidates) {
    if (start < cover_start || start + duration_s > cover_end)
      throw AlignmentError("candidate window [" + format_utc(start) + ", " +
                           format_utc(start + duration_s) +
                           ") is not covered by the intensity series");
    auto it = std::upper_bound(is.begin(), is.end(), start,
                               [](UnixSeconds t, const IntensitySample& s) {
                                 return t < s.timestamp;
                               });
    std::size_t j = static_cast<std::size_t>(it - is.begin()) - 1;
    CandidateCost cost;
    cost.start = start;
    for (std::size_t k = 0; k < n; ++k) {
      const UnixSeconds tau = start + static_cast<UnixSeconds>(k) * step;
      while (j + 1 < is.size() && is[j + 1].timestamp <= tau) ++j;
      const double e = profile.samples[k].power_kw * step_h;
      cost.energy_kwh += e;
      cost.water_l += e * is[j].wi;
      cost.carbon_g += e * is[j].pue * is[j].ci;
    }
    out.costs.push_back(cost);
  }

  auto order_by = [&](double CandidateCost::*field) {
    std::vector<std::size_t> idx(out.costs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const auto& ca = out.costs[a];
      const auto& cb = out.costs[b];
      if (ca.*field != cb.*field) return ca.*field < cb.*field;
      if (ca.start != cb.start) return ca.start < cb.start;
      return a < b;
    });
    return idx;
  };
  out.water_order = order_by(&CandidateCost::water_l);
  out.carbon_order = order_by(&CandidateCost::carbon_g);
  return out;
}

RatioMap embodied_operational_ratio_map(const RatioMapSpec& spec) {
  auto check_axis = [](const std::vector<double>& axis, const char* name) {
    if (axis.empty())
      throw ValidationError(std::string(name) + " axis is empty");
    for (std::size_t i = 0; i < axis.size(); ++i) {
      if (!std::isfinite(axis[i]) || axis[i] <= 0.0)
        throw ValidationError(std::string(name) + " axis values must be > 0");
      if (i > 0 && axis[i] <= axis[i - 1])
        throw ValidationError(std::string(name) +
                              " axis must be strictly increasing");
    }
  };
  check_axis(spec.mfg_wsi_axis, "manufacturing WSI");
  check_axis(spec.op_wsi_axis, "operational WSI");
  if (!std::isfinite(spec.energy_kwh) || spec.energy_kwh < 0.0)
    throw ValidationError("energy must be finite and >= 0 kWh");

  const WaterIntensity wi = water_intensity(spec.wue, spec.pue, spec.ewf);
  const double operational_l = spec.energy_kwh * wi.wi;
  if (operational_l <= 0.0)
    throw ValidationError("operational footprint is zero; the embodied/"
                          "operational ratio is undefined");
  const double embodied_l = embodied_footprint(spec.inventory).total.liters();

  RatioMap out;
  out.embodied_l = embodied_l;
  out.operational_l = operational_l;
  out.mfg_wsi_axis = spec.mfg_wsi_axis;
  out.op_wsi_axis = spec.op_wsi_axis;
  out.ratios.reserve(spec.mfg_wsi_axis.size());
  for (const double m : spec.mfg_wsi_axis) {
    std::vector<double> row;
    row.reserve(spec.op_wsi_axis.size());
    for (const double o : spec.op_wsi_axis)
      row.push_back((embodied_l * m) / (operational_l * o));
    out.ratios.push_back(std::move(row));
  }
  const double slope = embodied_l / operational_l;
  out.unit_contour.reserve(spec.mfg_wsi_axis.size());
  for (const double m : spec.mfg_wsi_axis)
    out.unit_contour.emplace_back(m, m * slope);
  return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0; // all-tied trace: correlation undefined
  return cov / std::sqrt(va * vb);
}

std::vector<double> min_max_normalize(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  std::vector<double> out;
  out.reserve(v.size());
  if (*lo == *hi) {
    out.assign(v.size(), 0.0);
    return out;
  }
  const double span = *hi - *lo;
  for (const double x : v) out.push_back((x - *lo) / span);
  return out;
}

std::vector<MonthlyMean> monthly_means(const std::vector<UnixSeconds>& ts,
                                       const std::vector<double>& v) {
  std::vector<MonthlyMean> out;
  std::size_t i = 0;
  while (i < ts.size()) {
    const YearMonth ym = year_month_of(ts[i]);
    double sum = 0.0;
    std::size_t count = 0;
    while (i < ts.size() && year_month_of(ts[i]) == ym) {
      sum += v[i];
      ++i;
      ++count;
    }
    out.push_back(MonthlyMean{ym.year, ym.month, sum / static_cast<double>(count)});
  }
  return out;
}

} // namespace

SeriesComparison compare_series(const std::vector<UnixSeconds>& timestamps,
                                const std::vector<double>& wi,
                                const std::vector<double>& ci) {
  if (timestamps.empty() || timestamps.size() != wi.size() ||
      timestamps.size() != ci.size())
    throw AlignmentError("series comparison needs two non-empty traces on the "
                         "same timestamps");
  for (std::size_t i = 1; i < timestamps.size(); ++i)
    if (timestamps[i] <= timestamps[i - 1])
      throw AlignmentError("comparison timestamps must be strictly increasing");
  for (std::size_t i = 0; i < wi.size(); ++i)
    if (!std::isfinite(wi[i]) || !std::isfinite(ci[i]))
      throw ValidationError("comparison traces must be finite");

  SeriesComparison out;
  out.wi_monthly = monthly_means(timestamps, wi);
  out.ci_monthly = monthly_means(timestamps, ci);
  out.wi_normalized = min_max_normalize(wi);
  out.ci_normalized = min_max_normalize(ci);
  out.rank_correlation = pearson(average_ranks(wi), average_ranks(ci));
  return out;
}

SeriesComparison compare_series(const IntensitySeries& intensity) {
  validate(intensity);
  std::vector<UnixSeconds> ts;
  std::vector<double> wi, ci;
  ts.reserve(intensity.samples.size());
  wi.reserve(intensity.samples.size());
  ci.reserve(intensity.samples.size());
  for (const auto& s : intensity.samples) {
    ts.push_back(s.timestamp);
    wi.push_back(s.wi);
    ci.push_back(s.ci);
  }
  return compare_series(ts, wi, ci);
}

} // namespace thirsty
