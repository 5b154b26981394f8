#include "thirsty/scarcity.hpp"

#include "thirsty/errors.hpp"
#include "thirsty/series.hpp"

#include <cmath>

namespace thirsty {

void validate(const ScarcityIndex& idx) {
  if (!std::isfinite(idx.wsi) || idx.wsi < wsi_min || idx.wsi > wsi_max)
    throw ValidationError("WSI " + std::to_string(idx.wsi) + " for region '" +
                          idx.region + "' outside [0.1, 100]");
}

double adjust_intensity_uniform(double wi, const ScarcityIndex& wsi) {
  validate(wsi);
  if (!std::isfinite(wi) || wi < 0.0)
    throw ValidationError("water intensity must be finite and >= 0 L/kWh");
  return wi * wsi.wsi;
}

double adjust_intensity_split(double wi_direct, double wi_indirect,
                              const ScarcityIndex& wsi_direct,
                              const ScarcityIndex& wsi_indirect) {
  validate(wsi_direct);
  validate(wsi_indirect);
  if (!std::isfinite(wi_direct) || wi_direct < 0.0 ||
      !std::isfinite(wi_indirect) || wi_indirect < 0.0)
    throw ValidationError("water intensities must be finite and >= 0 L/kWh");
  // Equal weights must reduce to the uniform rule exactly, which the
  // distributed form does not guarantee in floating point.
  if (wsi_direct.wsi == wsi_indirect.wsi)
    return (wi_direct + wi_indirect) * wsi_direct.wsi;
  return wi_direct * wsi_direct.wsi + wi_indirect * wsi_indirect.wsi;
}

double effective_indirect_wsi(const std::vector<GridSupplyShare>& supplies) {
  if (supplies.empty())
    throw ValidationError("grid supply set is empty");
  double share_sum = 0.0;
  double weighted = 0.0;
  for (const auto& s : supplies) {
    if (!std::isfinite(s.share) || s.share < 0.0 || s.share > 1.0)
      throw ValidationError("grid supply share for '" + s.grid_region +
                            "' outside [0, 1]");
    validate(s.wsi);
    share_sum += s.share;
    weighted += s.share * s.wsi.wsi;
  }
  if (std::fabs(share_sum - 1.0) > mix_share_tolerance)
    throw ValidationError("grid supply shares sum to " +
                          std::to_string(share_sum) +
                          ", expected 1 within 1e-6");
  return weighted;
}

WaterVolume adjust_volume_uniform(WaterVolume volume, const ScarcityIndex& wsi) {
  validate(wsi);
  return volume * wsi.wsi;
}

} // namespace thirsty
