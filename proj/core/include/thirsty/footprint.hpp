#pragma once

#include "thirsty/water.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace thirsty {

enum class DeviceKind { CPU, GPU, DRAM, SSD, HDD };

constexpr bool is_processor(DeviceKind k) {
  return k == DeviceKind::CPU || k == DeviceKind::GPU;
}

const char* to_string(DeviceKind k);
DeviceKind device_kind_from_string(std::string_view s);

/// One inventory row: `count` identical devices. Processors carry die area
/// and process node; memory/storage carry capacity. `yield_rate` defaults to
/// 0.875 when the input file omits it.
struct DeviceSpec {
  DeviceKind kind = DeviceKind::CPU;
  std::string name;                  // optional; used in error messages
  std::int64_t count = 1;
  std::int64_t n_ic = 1;             // ICs per device
  double die_area_mm2 = 0.0;         // processors
  double process_node_nm = 0.0;      // processors (optional for storage)
  double capacity_gb = 0.0;          // DRAM/SSD/HDD
  double yield_rate = 0.875;
  std::string fab_site;
  double transport_disposal_l = 0.0; // flat per-device allowance, default 0
};

/// Human-readable handle for error messages: the row name if present,
/// otherwise "<kind> #<index>".
std::string device_label(const DeviceSpec& spec, std::size_t index);

void validate(const DeviceSpec& spec, std::size_t index = 0);

/// Manufacturing water factors for one (process node, fab site) pair.
/// Area factors are liters per cm² of die; capacity factors liters per GB.
struct ProcessParams {
  double node_nm = 0.0;
  std::string site;
  double w_ic_l = 0.0;        // packaging overhead per IC
  double upw_l_per_cm2 = 0.0; // ultrapure water
  double pcw_l_per_cm2 = 0.0; // process cooling water
  double wpa_l_per_cm2 = 0.0; // water for power
  double wpc_dram_l_per_gb = 0.0;
  double wpc_ssd_l_per_gb = 0.0;
  double wpc_hdd_l_per_gb = 0.0;
};

void validate(const ProcessParams& params);

struct HardwareInventory {
  std::string system_name;
  std::vector<DeviceSpec> devices;
  std::vector<ProcessParams> params;
};

/// Find the ProcessParams entry for one device. Processors (and storage rows
/// that state a process node) match on (node, site) exactly. Storage rows
/// without a node match on site alone; several entries at the site are
/// tolerated only if they agree on every factor the device uses.
/// Throws ResolutionError naming the device when no or no unambiguous entry
/// exists.
const ProcessParams& resolve_params(const HardwareInventory& inv,
                                    std::size_t device_index);

struct KindWater {
  WaterVolume packaging;
  WaterVolume manufacturing;
  WaterVolume total() const { return packaging + manufacturing; }
};

struct EmbodiedBreakdown {
  std::map<DeviceKind, KindWater> per_kind;
  WaterVolume packaging_total;
  WaterVolume manufacturing_total;
  WaterVolume total; // packaging_total + manufacturing_total
};

/// Packaging overhead across the whole inventory: Σ w_ic × n_ic × count.
WaterVolume packaging_water(const HardwareInventory& inv);

/// Die manufacturing water for a processor row:
/// (1 / yield) × die_area_cm² × (UPW + PCW + WPA) × count.
/// Die area arrives in mm² and is divided by 100 here.
WaterVolume manufacturing_water_processor(const DeviceSpec& spec,
                                          const ProcessParams& params);

/// Capacity-driven manufacturing water for DRAM/SSD/HDD:
/// wpc_kind × capacity_gb × count.
WaterVolume manufacturing_water_storage(const DeviceSpec& spec,
                                        const ProcessParams& params);

/// Full embodied footprint: per-kind packaging and manufacturing buckets plus
/// grand totals. The per-device transport/disposal allowance is folded into
/// the manufacturing bucket.
EmbodiedBreakdown embodied_footprint(const HardwareInventory& inv);

} // namespace thirsty
