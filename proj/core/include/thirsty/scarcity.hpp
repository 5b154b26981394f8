#pragma once

#include "thirsty/water.hpp"

#include <string>
#include <vector>

namespace thirsty {

/// Regional water scarcity weight. Valid indices lie in [0.1, 100]; 1 means
/// average scarcity, larger means scarcer.
struct ScarcityIndex {
  std::string region;
  double wsi = 1.0;
};

inline constexpr double wsi_min = 0.1;
inline constexpr double wsi_max = 100.0;

void validate(const ScarcityIndex& idx);

/// One upstream grid feeding a site, with its share of delivered energy.
struct GridSupplyShare {
  std::string grid_region;
  double share = 0.0; // in [0, 1]; a supply set sums to 1 within 1e-6
  ScarcityIndex wsi;
};

/// Scarcity-weighted intensity: wi × wsi.
double adjust_intensity_uniform(double wi, const ScarcityIndex& wsi);

/// Separate facility and generation weights:
/// wi_direct × wsi_direct + wi_indirect × wsi_indirect.
/// With equal weights this equals adjust_intensity_uniform on the summed
/// intensity exactly.
double adjust_intensity_split(double wi_direct, double wi_indirect,
                              const ScarcityIndex& wsi_direct,
                              const ScarcityIndex& wsi_indirect);

/// Share-weighted mean WSI across the grids supplying a site.
double effective_indirect_wsi(const std::vector<GridSupplyShare>& supplies);

/// Scarcity-weighted volume: volume × wsi.
WaterVolume adjust_volume_uniform(WaterVolume volume, const ScarcityIndex& wsi);

} // namespace thirsty
