#include "thirsty/withdrawal.hpp"

#include "thirsty/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thirsty {

namespace {

void check_unit_interval(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw ValidationError(std::string(name) + " " + std::to_string(v) +
                          " outside [0, 1]");
}

} // namespace

void validate(const WithdrawalParams& params) {
  if (!std::isfinite(params.outfall_factor) || params.outfall_factor < 0.0)
    throw ValidationError("outfall_factor must be finite and >= 0");
  if (!std::isfinite(params.pollutant_factor) || params.pollutant_factor < 0.0)
    throw ValidationError("pollutant_factor must be finite and >= 0");
  check_unit_interval(params.reuse_rate, "reuse_rate");
  check_unit_interval(params.beta_potable, "beta_potable");
  check_unit_interval(params.beta_nonpotable, "beta_nonpotable");
  check_unit_interval(params.scarcity_potable, "scarcity_potable");
  check_unit_interval(params.scarcity_nonpotable, "scarcity_nonpotable");
  if (std::fabs(params.beta_potable + params.beta_nonpotable - 1.0) > 1e-9)
    throw ValidationError("beta_potable + beta_nonpotable must equal 1 within 1e-9");
}

WaterVolume adjusted_discharge(const WithdrawalParams& params) {
  validate(params);
  return params.discharge_actual * params.outfall_factor * params.pollutant_factor;
}

WaterVolume water_reuse(WaterVolume discharge, double rho) {
  check_unit_interval(rho, "reuse_rate");
  return discharge * rho;
}

WithdrawalResult withdrawal(WaterVolume consumption,
                            const WithdrawalParams& params) {
  validate(params);
  const WaterVolume adjusted = adjusted_discharge(params);
  const WaterVolume reused = water_reuse(adjusted, params.reuse_rate);

  WithdrawalResult out;
  out.gross = consumption + adjusted;
  // reused <= adjusted <= gross, so the difference cannot go negative except
  // by construction errors; clamp defensively.
  out.net = WaterVolume::from_liters(
      std::max(0.0, out.gross.liters() - reused.liters()));
  // Two complementary subtractions: one of them satisfies the Sterbenz
  // condition (its operands are within a factor of two), so the surviving
  // pair sums back to net without rounding. A single remainder would not.
  const double net_l = out.net.liters();
  const double nonpotable_l =
      std::max(0.0, net_l - net_l * params.beta_potable);
  const double potable_l = std::max(0.0, net_l - nonpotable_l);
  out.potable = WaterVolume::from_liters(potable_l);
  out.nonpotable = WaterVolume::from_liters(nonpotable_l);
  out.potable_weighted = out.potable * params.scarcity_potable;
  out.nonpotable_weighted = out.nonpotable * params.scarcity_nonpotable;
  return out;
}

} // namespace thirsty
