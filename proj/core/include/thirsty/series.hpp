#pragma once

#include "thirsty/errors.hpp"
#include "thirsty/time.hpp"

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace thirsty {

struct WeatherSample {
  UnixSeconds timestamp = 0;
  double air_temp_c = 0.0;     // within [-60, 60]
  double rel_humidity_pct = 0.0; // within [0, 100]
};

struct WeatherSeries {
  std::int64_t step_s = 0;
  std::vector<WeatherSample> samples;
};

struct EnergyMixSample {
  UnixSeconds timestamp = 0;
  std::map<std::string, double> shares; // per source, sums to 1 within 1e-6
};

struct EnergyMixSeries {
  std::int64_t step_s = 0;
  std::vector<EnergyMixSample> samples;
};

struct PowerSample {
  UnixSeconds timestamp = 0;
  double power_kw = 0.0; // finite, >= 0
};

struct PowerTrace {
  std::int64_t step_s = 0;
  std::vector<PowerSample> samples;
};

struct PueSample {
  UnixSeconds timestamp = 0;
  double pue = 1.0; // >= 1
};

struct PueSeries {
  std::int64_t step_s = 0;
  std::vector<PueSample> samples;
};

/// Tolerance for energy-mix share sums.
inline constexpr double mix_share_tolerance = 1e-6;

/// Longest tolerated run of missing rows when forward-filling. A source gap
/// of more than this many steps aborts alignment instead of being filled.
inline constexpr std::int64_t max_fill_gap_steps = 6;

void validate(const WeatherSample& s);
void validate(const EnergyMixSample& s);

/// Grid checks shared by every series type: positive step, at least one
/// sample, strictly increasing timestamps on the step lattice anchored at the
/// first sample. Rows may be missing (gaps); off-lattice rows are an error.
template <class Sample>
void check_series_grid(const std::vector<Sample>& samples, std::int64_t step_s,
                       const std::string& what) {
  if (step_s <= 0)
    throw ValidationError(what + ": step must be a positive number of seconds");
  if (samples.empty())
    throw ValidationError(what + ": series has no samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const auto prev = samples[i - 1].timestamp;
    const auto cur = samples[i].timestamp;
    if (cur <= prev)
      throw ValidationError(what + ": timestamps must be strictly increasing (row " +
                            std::to_string(i) + ", " + format_utc(cur) + ")");
    if ((cur - samples[0].timestamp) % step_s != 0)
      throw ValidationError(what + ": timestamp " + format_utc(cur) +
                            " is not on the declared " + std::to_string(step_s) +
                            " s step lattice");
  }
}

void validate(const WeatherSeries& s);
void validate(const EnergyMixSeries& s);
void validate(const PowerTrace& s);
void validate(const PueSeries& s);

/// The window and step shared by several series. Under zero-order hold, a
/// series with samples t_0 < ... < t_n at step s covers [t_0, t_n + s).
struct SeriesExtent {
  UnixSeconds first = 0;
  UnixSeconds last = 0;
  std::int64_t step_s = 0;
};

struct GridSpec {
  UnixSeconds start = 0; // inclusive
  UnixSeconds end = 0;   // exclusive
  std::int64_t step_s = 0;

  std::size_t size() const {
    return static_cast<std::size_t>((end - start + step_s - 1) / step_s);
  }
};

template <class Sample>
SeriesExtent extent_of(const std::vector<Sample>& samples, std::int64_t step_s) {
  return SeriesExtent{samples.front().timestamp, samples.back().timestamp, step_s};
}

/// Intersect coverage windows and take the gcd of steps. Empty intersection
/// throws AlignmentError.
GridSpec common_grid(const std::vector<SeriesExtent>& extents);

/// Zero-order-hold resampling onto [grid.start, grid.end) at grid.step_s.
/// Each output instant takes the latest source sample at or before it. A
/// source gap longer than max_fill_gap_steps source steps throws
/// AlignmentError rather than being filled.
template <class Sample>
std::vector<Sample> resample_forward_fill(const std::vector<Sample>& src,
                                          std::int64_t src_step_s,
                                          const GridSpec& grid,
                                          const std::string& what) {
  if (src.empty()) throw AlignmentError(what + ": cannot resample an empty series");
  if (grid.start < src.front().timestamp)
    throw AlignmentError(what + ": grid starts before first sample");
  if (grid.end > src.back().timestamp + src_step_s)
    throw AlignmentError(what + ": grid extends past series coverage");

  std::vector<Sample> out;
  out.reserve(grid.size());
  std::size_t i = 0;
  for (UnixSeconds t = grid.start; t < grid.end; t += grid.step_s) {
    while (i + 1 < src.size() && src[i + 1].timestamp <= t) ++i;
    if (t >= src[i].timestamp + src_step_s) {
      // t falls in a run of missing rows after sample i.
      if (i + 1 >= src.size())
        throw AlignmentError(what + ": grid extends past series coverage");
      const UnixSeconds spacing = src[i + 1].timestamp - src[i].timestamp;
      if (spacing > (max_fill_gap_steps + 1) * src_step_s)
        throw AlignmentError(what + ": gap of more than " +
                             std::to_string(max_fill_gap_steps) +
                             " steps after " + format_utc(src[i].timestamp) +
                             "; refusing to forward-fill");
    }
    Sample s = src[i];
    s.timestamp = t;
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace thirsty
