#include "thirsty/operational.hpp"

#include "thirsty/errors.hpp"

#include <algorithm>
#include <cmath>

namespace thirsty {

void validate(const WueCurve& curve) {
  if (curve.knots.empty())
    throw ValidationError("WUE curve '" + curve.name + "' has no knots");
  for (std::size_t i = 0; i < curve.knots.size(); ++i) {
    const auto& [t, w] = curve.knots[i];
    if (!std::isfinite(t) || !std::isfinite(w))
      throw ValidationError("WUE curve '" + curve.name + "': knot " +
                            std::to_string(i) + " is not finite");
    if (w < wue_floor)
      throw ValidationError("WUE curve '" + curve.name + "': wue " +
                            std::to_string(w) + " below the 0.05 L/kWh floor");
    if (i > 0) {
      if (t <= curve.knots[i - 1].first)
        throw ValidationError("WUE curve '" + curve.name +
                              "': knot temperatures must be strictly increasing");
      if (w < curve.knots[i - 1].second)
        throw ValidationError("WUE curve '" + curve.name +
                              "': wue must be non-decreasing in temperature");
    }
  }
}

void validate(const SourceFactors& f) {
  if (f.source.empty())
    throw ValidationError("energy source entry with empty name");
  if (!std::isfinite(f.ewf_l_per_kwh) || f.ewf_l_per_kwh < 0.0 ||
      f.ewf_l_per_kwh > ewf_max)
    throw ValidationError("energy source '" + f.source + "': ewf " +
                          std::to_string(f.ewf_l_per_kwh) +
                          " L/kWh outside [0, 20]");
  if (!std::isfinite(f.ci_g_per_kwh) || f.ci_g_per_kwh < 0.0)
    throw ValidationError("energy source '" + f.source +
                          "': carbon intensity must be finite and >= 0");
  if (f.cooling.empty()) return;
  if (f.cooling == "wet_tower") {
    if (f.ewf_l_per_kwh < wet_tower_ewf_min || f.ewf_l_per_kwh > wet_tower_ewf_max)
      throw ValidationError("energy source '" + f.source + "': ewf " +
                            std::to_string(f.ewf_l_per_kwh) +
                            " L/kWh outside the wet-tower range [2.2, 3.2]");
  } else if (f.cooling == "once_through") {
    if (f.ewf_l_per_kwh < once_through_ewf_min ||
        f.ewf_l_per_kwh > once_through_ewf_max)
      throw ValidationError("energy source '" + f.source + "': ewf " +
                            std::to_string(f.ewf_l_per_kwh) +
                            " L/kWh outside the once-through range [0.5, 1.5]");
  } else {
    throw ValidationError("energy source '" + f.source + "': unknown cooling '" +
                          f.cooling + "' (expected wet_tower or once_through)");
  }
}

double wet_bulb_temperature(double air_temp_c, double rel_humidity_pct) {
  const double t = air_temp_c;
  const double rh = rel_humidity_pct;
  if (!std::isfinite(rh) || rh < 5.0 || rh > 99.0)
    throw ValidationError("relative humidity " + std::to_string(rh) +
                          " % outside the regression window [5, 99]");
  if (!std::isfinite(t) || t < -20.0 || t > 50.0)
    throw ValidationError("air temperature " + std::to_string(t) +
                          " degC outside the regression window [-20, 50]");
  // Stull (2011) regression coefficients, verbatim.
  return t * std::atan(0.151977 * std::sqrt(rh + 8.313659)) +
         std::atan(t + rh) - std::atan(rh - 1.676331) +
         0.00391838 * std::pow(rh, 1.5) * std::atan(0.023101 * rh) -
         4.686035;
}

WeatherSample clamp_to_wet_bulb_domain(WeatherSample s) {
  s.air_temp_c = std::clamp(s.air_temp_c, -20.0, 50.0);
  s.rel_humidity_pct = std::clamp(s.rel_humidity_pct, 5.0, 99.0);
  return s;
}

double wue_from_wet_bulb(const WueCurve& curve, double wet_bulb_c) {
  validate(curve);
  const auto& knots = curve.knots;
  if (wet_bulb_c <= knots.front().first) return knots.front().second;
  if (wet_bulb_c >= knots.back().first) return knots.back().second;
  auto hi = std::lower_bound(knots.begin(), knots.end(), wet_bulb_c,
                             [](const auto& knot, double t) { return knot.first < t; });
  auto lo = hi - 1;
  const double span = hi->first - lo->first;
  const double frac = (wet_bulb_c - lo->first) / span;
  return lo->second + (hi->second - lo->second) * frac;
}

double wue_at(const WueCurve& curve, const WeatherSample& weather) {
  return wue_from_wet_bulb(
      curve, wet_bulb_temperature(weather.air_temp_c, weather.rel_humidity_pct));
}

namespace {

double weighted_sum(const EnergyMixSample& mix, const SourceFactorMap& factors,
                    double SourceFactors::*field) {
  validate(mix);
  double sum = 0.0;
  for (const auto& [source, share] : mix.shares) {
    auto it = factors.find(source);
    if (it == factors.end())
      throw ResolutionError("unknown energy source '" + source + "' at " +
                            format_utc(mix.timestamp));
    sum += share * (it->second.*field);
  }
  return sum;
}

} // namespace

double ewf_of_mix(const EnergyMixSample& mix, const SourceFactorMap& factors) {
  return weighted_sum(mix, factors, &SourceFactors::ewf_l_per_kwh);
}

double carbon_intensity_of_mix(const EnergyMixSample& mix,
                               const SourceFactorMap& factors) {
  return weighted_sum(mix, factors, &SourceFactors::ci_g_per_kwh);
}

WaterIntensity water_intensity(double wue, double pue, double ewf) {
  if (!std::isfinite(wue) || wue < 0.0)
    throw ValidationError("wue must be finite and >= 0 L/kWh");
  if (!std::isfinite(ewf) || ewf < 0.0)
    throw ValidationError("ewf must be finite and >= 0 L/kWh");
  if (!std::isfinite(pue) || pue < 1.0)
    throw ValidationError("pue " + std::to_string(pue) + " must be >= 1");
  WaterIntensity out;
  out.wi_direct = wue;
  out.wi_indirect = pue * ewf;
  out.wi = out.wi_direct + out.wi_indirect;
  return out;
}

void validate(const IntensitySeries& s) {
  check_series_grid(s.samples, s.step_s, "intensity series");
  for (const auto& x : s.samples) {
    if (!std::isfinite(x.wue) || x.wue < 0.0 || !std::isfinite(x.ewf) ||
        x.ewf < 0.0 || !std::isfinite(x.ci) || x.ci < 0.0)
      throw ValidationError("intensity sample at " + format_utc(x.timestamp) +
                            " has a negative or non-finite component");
    if (!std::isfinite(x.pue) || x.pue < 1.0)
      throw ValidationError("intensity sample at " + format_utc(x.timestamp) +
                            ": pue must be >= 1");
    // Invariants are exact by construction; reject hand-built samples that
    // break them.
    if (x.wi_direct != x.wue || x.wi_indirect != x.pue * x.ewf ||
        x.wi != x.wi_direct + x.wi_indirect)
      throw ValidationError("intensity sample at " + format_utc(x.timestamp) +
                            " violates wi = wue + pue*ewf");
  }
}

namespace {

IntensitySeries build_impl(const WeatherSeries& weather, const EnergyMixSeries& mix,
                           const PueSeries* pue_series, double pue_scalar,
                           const WueCurve& curve, const SourceFactorMap& factors) {
  validate(weather);
  validate(mix);
  validate(curve);
  for (const auto& [name, f] : factors) {
    (void)name;
    validate(f);
  }
  if (!pue_series && (!std::isfinite(pue_scalar) || pue_scalar < 1.0))
    throw ValidationError("pue " + std::to_string(pue_scalar) + " must be >= 1");
  if (pue_series) validate(*pue_series);

  std::vector<SeriesExtent> extents{
      extent_of(weather.samples, weather.step_s),
      extent_of(mix.samples, mix.step_s),
  };
  if (pue_series) extents.push_back(extent_of(pue_series->samples, pue_series->step_s));
  const GridSpec grid = common_grid(extents);

  const auto w = resample_forward_fill(weather.samples, weather.step_s, grid,
                                       "weather series");
  const auto m = resample_forward_fill(mix.samples, mix.step_s, grid,
                                       "energy mix series");
  std::vector<PueSample> p;
  if (pue_series)
    p = resample_forward_fill(pue_series->samples, pue_series->step_s, grid,
                              "PUE series");

  IntensitySeries out;
  out.step_s = grid.step_s;
  out.samples.reserve(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    IntensitySample s;
    s.timestamp = w[i].timestamp;
    s.wue = wue_from_wet_bulb(
        curve, wet_bulb_temperature(w[i].air_temp_c, w[i].rel_humidity_pct));
    s.ewf = ewf_of_mix(m[i], factors);
    s.ci = carbon_intensity_of_mix(m[i], factors);
    s.pue = pue_series ? p[i].pue : pue_scalar;
    const WaterIntensity wi = water_intensity(s.wue, s.pue, s.ewf);
    s.wi_direct = wi.wi_direct;
    s.wi_indirect = wi.wi_indirect;
    s.wi = wi.wi;
    out.samples.push_back(s);
  }
  return out;
}

} // namespace

IntensitySeries build_intensity_series(const WeatherSeries& weather,
                                       const EnergyMixSeries& mix, double pue,
                                       const WueCurve& curve,
                                       const SourceFactorMap& factors) {
  return build_impl(weather, mix, nullptr, pue, curve, factors);
}

IntensitySeries build_intensity_series(const WeatherSeries& weather,
                                       const EnergyMixSeries& mix,
                                       const PueSeries& pue, const WueCurve& curve,
                                       const SourceFactorMap& factors) {
  return build_impl(weather, mix, &pue, 1.0, curve, factors);
}

OperationalResult operational_footprint(const PowerTrace& power,
                                        const IntensitySeries& intensity) {
  validate(power);
  validate(intensity);
  const std::int64_t step = power.step_s;
  if (step != intensity.step_s)
    throw AlignmentError("step mismatch: power trace at " +
                         std::to_string(power.step_s) +
                         " s vs intensity series at " +
                         std::to_string(intensity.step_s) + " s");
  const UnixSeconds p0 = power.samples.front().timestamp;
  const UnixSeconds i0 = intensity.samples.front().timestamp;
  if ((i0 - p0) % step != 0)
    throw AlignmentError("power trace and intensity series are offset by a "
                         "fraction of a step; no common instants");
  const UnixSeconds start = std::max(p0, i0);
  const UnixSeconds end = std::min(power.samples.back().timestamp + step,
                                   intensity.samples.back().timestamp + step);
  if (start >= end)
    throw AlignmentError("power trace and intensity series do not overlap");

  auto find_start = [start](const auto& samples, const char* what) {
    auto it = std::lower_bound(samples.begin(), samples.end(), start,
                               [](const auto& s, UnixSeconds t) {
                                 return s.timestamp < t;
                               });
    if (it == samples.end() || it->timestamp != start)
      throw AlignmentError(std::string(what) + " has a gap at " +
                           format_utc(start) + "; resample first");
    return static_cast<std::size_t>(it - samples.begin());
  };
  std::size_t ip = find_start(power.samples, "power trace");
  std::size_t ii = find_start(intensity.samples, "intensity series");

  OperationalResult out;
  out.step_s = step;
  const double step_h = static_cast<double>(step) / 3600.0;
  double direct = 0.0, indirect = 0.0, energy = 0.0, carbon = 0.0;
  const std::size_t n = static_cast<std::size_t>((end - start) / step);
  out.series.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const UnixSeconds t = start + static_cast<UnixSeconds>(k) * step;
    if (ip + k >= power.samples.size() || power.samples[ip + k].timestamp != t)
      throw AlignmentError("power trace has a gap at " + format_utc(t) +
                           "; resample first");
    if (ii + k >= intensity.samples.size() ||
        intensity.samples[ii + k].timestamp != t)
      throw AlignmentError("intensity series has a gap at " + format_utc(t) +
                           "; resample first");
    const auto& ps = power.samples[ip + k];
    const auto& is = intensity.samples[ii + k];
    const double e = ps.power_kw * step_h;
    const double d = e * is.wi_direct;
    const double ind = e * is.wi_indirect;
    const double c = e * is.pue * is.ci;
    energy += e;
    direct += d;
    indirect += ind;
    carbon += c;
    out.series.push_back(OperationalStep{t, e, d, ind, c});
  }
  out.energy_kwh = energy;
  out.carbon_g = carbon;
  out.direct = WaterVolume::from_liters(direct);
  out.indirect = WaterVolume::from_liters(indirect);
  out.total = out.direct + out.indirect;
  return out;
}

} // namespace thirsty
