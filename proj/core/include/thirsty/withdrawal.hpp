#pragma once

#include "thirsty/water.hpp"

namespace thirsty {

/// Withdrawal accounting inputs. Defaults are neutral: discharge passes
/// through unscaled, nothing is reused, everything is potable, and the
/// supply-scarcity factors do not shrink the weighted figures.
struct WithdrawalParams {
  WaterVolume discharge_actual;     // reported discharge
  double outfall_factor = 1.0;      // >= 0, scales discharge by outfall type
  double pollutant_factor = 1.0;    // >= 0, scales discharge by pollutant load
  double reuse_rate = 0.0;          // in [0, 1], share of discharge recycled
  double beta_potable = 1.0;        // potable intake share
  double beta_nonpotable = 0.0;     // with beta_potable sums to 1 within 1e-9
  double scarcity_potable = 1.0;    // in [0, 1], higher = more limited supply
  double scarcity_nonpotable = 1.0; // in [0, 1]
};

void validate(const WithdrawalParams& params);

/// Reported discharge scaled by outfall and pollutant factors.
WaterVolume adjusted_discharge(const WithdrawalParams& params);

/// Share of a discharge volume recycled within the system: discharge × rho.
WaterVolume water_reuse(WaterVolume discharge, double rho);

struct WithdrawalResult {
  WaterVolume gross;     // consumption + adjusted discharge
  WaterVolume net;       // gross − reused water
  WaterVolume potable;   // net × beta_potable
  WaterVolume nonpotable;
  WaterVolume potable_weighted;    // potable × scarcity_potable
  WaterVolume nonpotable_weighted;
};

/// Full withdrawal accounting for a consumption volume under the given
/// parameters. potable + nonpotable always sums to net.
WithdrawalResult withdrawal(WaterVolume consumption,
                            const WithdrawalParams& params);

} // namespace thirsty
