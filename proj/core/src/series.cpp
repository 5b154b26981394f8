#include "thirsty/series.hpp"

#include <algorithm>
#include <cmath>

namespace thirsty {

void validate(const WeatherSample& s) {
  if (!std::isfinite(s.air_temp_c) || s.air_temp_c < -60.0 || s.air_temp_c > 60.0)
    throw ValidationError("air temperature " + std::to_string(s.air_temp_c) +
                          " degC at " + format_utc(s.timestamp) +
                          " outside [-60, 60]");
  if (!std::isfinite(s.rel_humidity_pct) || s.rel_humidity_pct < 0.0 ||
      s.rel_humidity_pct > 100.0)
    throw ValidationError("relative humidity " + std::to_string(s.rel_humidity_pct) +
                          " % at " + format_utc(s.timestamp) + " outside [0, 100]");
}

void validate(const EnergyMixSample& s) {
  if (s.shares.empty())
    throw ValidationError("energy mix at " + format_utc(s.timestamp) +
                          " has no shares");
  double sum = 0.0;
  for (const auto& [source, share] : s.shares) {
    if (!std::isfinite(share) || share < 0.0 || share > 1.0)
      throw ValidationError("energy mix share for '" + source + "' at " +
                            format_utc(s.timestamp) + " outside [0, 1]");
    sum += share;
  }
  if (std::fabs(sum - 1.0) > mix_share_tolerance)
    throw ValidationError("energy mix shares at " + format_utc(s.timestamp) +
                          " sum to " + std::to_string(sum) +
                          ", expected 1 within 1e-6");
}

void validate(const WeatherSeries& s) {
  check_series_grid(s.samples, s.step_s, "weather series");
  for (const auto& sample : s.samples) validate(sample);
}

void validate(const EnergyMixSeries& s) {
  check_series_grid(s.samples, s.step_s, "energy mix series");
  for (const auto& sample : s.samples) validate(sample);
}

void validate(const PowerTrace& s) {
  check_series_grid(s.samples, s.step_s, "power trace");
  for (const auto& sample : s.samples)
    if (!std::isfinite(sample.power_kw) || sample.power_kw < 0.0)
      throw ValidationError("power at " + format_utc(sample.timestamp) +
                            " must be finite and >= 0 kW");
}

void validate(const PueSeries& s) {
  check_series_grid(s.samples, s.step_s, "PUE series");
  for (const auto& sample : s.samples)
    if (!std::isfinite(sample.pue) || sample.pue < 1.0)
      throw ValidationError("PUE at " + format_utc(sample.timestamp) +
                            " must be >= 1");
}

GridSpec common_grid(const std::vector<SeriesExtent>& extents) {
  if (extents.empty())
    throw AlignmentError("no series to align");
  UnixSeconds start = extents.front().first;
  UnixSeconds end = extents.front().last + extents.front().step_s;
  std::int64_t step = extents.front().step_s;
  for (const auto& e : extents) {
    if (e.step_s <= 0)
      throw AlignmentError("series step must be positive");
    start = std::max(start, e.first);
    end = std::min(end, e.last + e.step_s);
    step = std::gcd(step, e.step_s);
  }
  if (start >= end)
    throw AlignmentError("series windows do not overlap");
  return GridSpec{start, end, step};
}

} // namespace thirsty
