#pragma once

#include "thirsty/series.hpp"
#include "thirsty/water.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace thirsty {

/// Piecewise-linear map from outside wet-bulb temperature to cooling water
/// use. Knots are strictly increasing in temperature; values are clamped to
/// the end knots outside the covered range.
struct WueCurve {
  std::string name;
  std::vector<std::pair<double, double>> knots; // (wet_bulb_c, wue_l_per_kwh)
};

/// Lowest admissible WUE value for any knot.
inline constexpr double wue_floor = 0.05;

void validate(const WueCurve& curve);

/// Per-energy-source water and carbon factors. `cooling` is normally empty;
/// thermal entries may carry "wet_tower" or "once_through", which pins the
/// EWF to that cooling technology's plausible range.
struct SourceFactors {
  std::string source;
  double ewf_l_per_kwh = 0.0;
  double ci_g_per_kwh = 0.0;
  std::string cooling;
};

inline constexpr double ewf_max = 20.0;
inline constexpr double wet_tower_ewf_min = 2.2;
inline constexpr double wet_tower_ewf_max = 3.2;
inline constexpr double once_through_ewf_min = 0.5;
inline constexpr double once_through_ewf_max = 1.5;

void validate(const SourceFactors& f);

using SourceFactorMap = std::map<std::string, SourceFactors>;

/**
 * Wet-bulb temperature from dry-bulb temperature and relative humidity,
 * using the regression of Stull (2011), "Wet-Bulb Temperature from Relative
 * Humidity and Air Temperature", J. Appl. Meteor. Climatol. 50.
 *
 * Valid for rel_humidity_pct in [5, 99] and air_temp_c in [-20, 50]; inputs
 * outside that window throw ValidationError. Callers with out-of-window
 * weather must clamp explicitly (see clamp_to_wet_bulb_domain).
 */
double wet_bulb_temperature(double air_temp_c, double rel_humidity_pct);

/// Clamp a weather sample into the wet-bulb regression's validity window.
WeatherSample clamp_to_wet_bulb_domain(WeatherSample s);

/// Interpolate the curve at a wet-bulb temperature, clamping outside the
/// knot range.
double wue_from_wet_bulb(const WueCurve& curve, double wet_bulb_c);

/// WUE for a weather sample: wue_from_wet_bulb at the sample's wet bulb.
double wue_at(const WueCurve& curve, const WeatherSample& weather);

/// Share-weighted EWF of an energy mix, L/kWh. Unknown sources throw
/// ResolutionError; malformed shares throw ValidationError.
double ewf_of_mix(const EnergyMixSample& mix, const SourceFactorMap& factors);

/// Share-weighted carbon intensity, gCO2-eq/kWh. Same contract as
/// ewf_of_mix.
double carbon_intensity_of_mix(const EnergyMixSample& mix,
                               const SourceFactorMap& factors);

struct WaterIntensity {
  double wi_direct = 0.0;   // = wue
  double wi_indirect = 0.0; // = pue × ewf
  double wi = 0.0;          // wi_direct + wi_indirect, exactly
};

/// Water intensity in L/kWh. pue < 1 throws ValidationError. The returned wi
/// is computed as wi_direct + wi_indirect, so the additivity invariant holds
/// bit-for-bit.
WaterIntensity water_intensity(double wue, double pue, double ewf);

struct IntensitySample {
  UnixSeconds timestamp = 0;
  double wue = 0.0;
  double ewf = 0.0;
  double pue = 1.0;
  double wi_direct = 0.0;
  double wi_indirect = 0.0;
  double wi = 0.0;
  double ci = 0.0;
};

struct IntensitySeries {
  std::int64_t step_s = 0;
  std::vector<IntensitySample> samples;
};

void validate(const IntensitySeries& s);

/// Combine weather and energy-mix series into a per-step intensity series on
/// their common grid (gcd step, intersected window, forward-fill). Weather
/// must lie within the wet-bulb validity window.
IntensitySeries build_intensity_series(const WeatherSeries& weather,
                                       const EnergyMixSeries& mix,
                                       double pue,
                                       const WueCurve& curve,
                                       const SourceFactorMap& factors);

/// Same, with time-varying PUE.
IntensitySeries build_intensity_series(const WeatherSeries& weather,
                                       const EnergyMixSeries& mix,
                                       const PueSeries& pue,
                                       const WueCurve& curve,
                                       const SourceFactorMap& factors);

struct OperationalStep {
  UnixSeconds timestamp = 0;
  double energy_kwh = 0.0;
  double direct_l = 0.0;
  double indirect_l = 0.0;
  double carbon_g = 0.0;
};

struct OperationalResult {
  WaterVolume direct;
  WaterVolume indirect;
  WaterVolume total; // direct + indirect
  double energy_kwh = 0.0;
  double carbon_g = 0.0; // Σ energy × pue × ci, the facility-energy ledger
  std::int64_t step_s = 0;
  std::vector<OperationalStep> series;
};

/**
 * Integrate power against intensity over their overlapping window using
 * left-step (zero-order-hold) sums: per step, energy = power × step-hours,
 * direct += energy × wue, indirect += energy × pue × ewf. Carbon is
 * accounted alongside as energy × pue × ci (facility energy times grid
 * intensity, mirroring the indirect water term).
 *
 * Both series must share the same step, lie on the same step lattice, and be
 * gap-free across the overlap; resample first if they are not. Violations
 * throw AlignmentError.
 */
OperationalResult operational_footprint(const PowerTrace& power,
                                        const IntensitySeries& intensity);

} // namespace thirsty
