#include "thirsty/footprint.hpp"

#include "thirsty/errors.hpp"

#include <cctype>
#include <cmath>

namespace thirsty {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

double storage_wpc(DeviceKind kind, const ProcessParams& p) {
  switch (kind) {
    case DeviceKind::DRAM: return p.wpc_dram_l_per_gb;
    case DeviceKind::SSD: return p.wpc_ssd_l_per_gb;
    case DeviceKind::HDD: return p.wpc_hdd_l_per_gb;
    default: break;
  }
  throw ValidationError("device kind has no capacity water factor");
}

} // namespace

const char* to_string(DeviceKind k) {
  switch (k) {
    case DeviceKind::CPU: return "CPU";
    case DeviceKind::GPU: return "GPU";
    case DeviceKind::DRAM: return "DRAM";
    case DeviceKind::SSD: return "SSD";
    case DeviceKind::HDD: return "HDD";
  }
  return "?";
}

DeviceKind device_kind_from_string(std::string_view s) {
  std::string upper(s);
  for (char& c : upper)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "CPU") return DeviceKind::CPU;
  if (upper == "GPU") return DeviceKind::GPU;
  if (upper == "DRAM") return DeviceKind::DRAM;
  if (upper == "SSD") return DeviceKind::SSD;
  if (upper == "HDD") return DeviceKind::HDD;
  throw ValidationError("unknown device kind '" + std::string(s) +
                        "' (expected CPU, GPU, DRAM, SSD or HDD)");
}

std::string device_label(const DeviceSpec& spec, std::size_t index) {
  if (!spec.name.empty()) return spec.name;
  return std::string(to_string(spec.kind)) + " #" + std::to_string(index);
}

void validate(const DeviceSpec& spec, std::size_t index) {
  const std::string who = device_label(spec, index);
  if (spec.count < 1)
    throw ValidationError(who + ": count must be >= 1");
  if (spec.n_ic < 1)
    throw ValidationError(who + ": n_ic must be >= 1");
  if (!(spec.yield_rate > 0.0 && spec.yield_rate <= 1.0))
    throw ValidationError(who + ": yield_rate must lie in (0, 1], got " +
                          std::to_string(spec.yield_rate));
  if (!finite_nonneg(spec.transport_disposal_l))
    throw ValidationError(who + ": transport_disposal_l must be finite and >= 0");
  if (is_processor(spec.kind)) {
    if (!(std::isfinite(spec.die_area_mm2) && spec.die_area_mm2 > 0.0))
      throw ValidationError(who + ": processors require die_area_mm2 > 0");
    if (!(std::isfinite(spec.process_node_nm) && spec.process_node_nm > 0.0))
      throw ValidationError(who + ": processors require process_node_nm > 0");
  } else {
    if (!(std::isfinite(spec.capacity_gb) && spec.capacity_gb > 0.0))
      throw ValidationError(who + ": memory/storage devices require capacity_gb > 0");
  }
}

void validate(const ProcessParams& params) {
  if (!(std::isfinite(params.node_nm) && params.node_nm > 0.0))
    throw ValidationError("process_params entry (site '" + params.site +
                          "'): node_nm must be > 0");
  const struct { const char* name; double value; } factors[] = {
      {"w_ic_l", params.w_ic_l},
      {"upw_l_per_cm2", params.upw_l_per_cm2},
      {"pcw_l_per_cm2", params.pcw_l_per_cm2},
      {"wpa_l_per_cm2", params.wpa_l_per_cm2},
      {"wpc_dram_l_per_gb", params.wpc_dram_l_per_gb},
      {"wpc_ssd_l_per_gb", params.wpc_ssd_l_per_gb},
      {"wpc_hdd_l_per_gb", params.wpc_hdd_l_per_gb},
  };
  for (const auto& f : factors)
    if (!finite_nonneg(f.value))
      throw ValidationError("process_params entry (node " +
                            std::to_string(params.node_nm) + " nm, site '" +
                            params.site + "'): " + f.name +
                            " must be finite and >= 0");
}

const ProcessParams& resolve_params(const HardwareInventory& inv,
                                    std::size_t device_index) {
  const DeviceSpec& spec = inv.devices.at(device_index);
  const std::string who = device_label(spec, device_index);

  if (is_processor(spec.kind) || spec.process_node_nm > 0.0) {
    const ProcessParams* found = nullptr;
    for (const auto& p : inv.params) {
      if (p.node_nm == spec.process_node_nm && p.site == spec.fab_site) {
        if (found)
          throw ResolutionError("ambiguous process parameters for device '" + who +
                                "': several entries match node " +
                                std::to_string(spec.process_node_nm) +
                                " nm at site '" + spec.fab_site + "'");
        found = &p;
      }
    }
    if (!found)
      throw ResolutionError("no process parameters for device '" + who +
                            "' (node " + std::to_string(spec.process_node_nm) +
                            " nm, site '" + spec.fab_site + "')");
    return *found;
  }

  // Storage row without a stated node: match on site; several entries at the
  // site are fine only if the factors this device consumes coincide.
  const ProcessParams* found = nullptr;
  for (const auto& p : inv.params) {
    if (p.site != spec.fab_site) continue;
    if (!found) {
      found = &p;
      continue;
    }
    if (p.w_ic_l != found->w_ic_l ||
        storage_wpc(spec.kind, p) != storage_wpc(spec.kind, *found))
      throw ResolutionError("ambiguous process parameters for device '" + who +
                            "': entries at site '" + spec.fab_site +
                            "' disagree on its water factors; state a "
                            "process_node_nm on the device to disambiguate");
  }
  if (!found)
    throw ResolutionError("no process parameters for device '" + who +
                          "' (site '" + spec.fab_site + "')");
  return *found;
}

WaterVolume packaging_water(const HardwareInventory& inv) {
  double liters = 0.0;
  for (std::size_t i = 0; i < inv.devices.size(); ++i) {
    const DeviceSpec& spec = inv.devices[i];
    validate(spec, i);
    const ProcessParams& p = resolve_params(inv, i);
    liters += p.w_ic_l * static_cast<double>(spec.n_ic) *
              static_cast<double>(spec.count);
  }
  return WaterVolume::from_liters(liters);
}

WaterVolume manufacturing_water_processor(const DeviceSpec& spec,
                                          const ProcessParams& params) {
  if (!is_processor(spec.kind))
    throw ValidationError(device_label(spec, 0) + ": not a processor device");
  if (!(spec.yield_rate > 0.0 && spec.yield_rate <= 1.0))
    throw ValidationError(device_label(spec, 0) + ": yield_rate must lie in (0, 1], got " +
                          std::to_string(spec.yield_rate));
  if (!(std::isfinite(spec.die_area_mm2) && spec.die_area_mm2 > 0.0))
    throw ValidationError(device_label(spec, 0) + ": die_area_mm2 must be > 0");
  const double area_cm2 = spec.die_area_mm2 / 100.0;
  const double per_cm2 =
      params.upw_l_per_cm2 + params.pcw_l_per_cm2 + params.wpa_l_per_cm2;
  const double liters = (1.0 / spec.yield_rate) * area_cm2 * per_cm2 *
                        static_cast<double>(spec.count);
  return WaterVolume::from_liters(liters);
}

WaterVolume manufacturing_water_storage(const DeviceSpec& spec,
                                        const ProcessParams& params) {
  if (is_processor(spec.kind))
    throw ValidationError(device_label(spec, 0) + ": not a storage device");
  if (!(std::isfinite(spec.capacity_gb) && spec.capacity_gb >= 0.0))
    throw ValidationError(device_label(spec, 0) + ": capacity_gb must be >= 0");
  const double liters = storage_wpc(spec.kind, params) * spec.capacity_gb *
                        static_cast<double>(spec.count);
  return WaterVolume::from_liters(liters);
}

EmbodiedBreakdown embodied_footprint(const HardwareInventory& inv) {
  EmbodiedBreakdown out;
  for (std::size_t i = 0; i < inv.devices.size(); ++i) {
    const DeviceSpec& spec = inv.devices[i];
    validate(spec, i);
    const ProcessParams& p = resolve_params(inv, i);

    const double pkg = p.w_ic_l * static_cast<double>(spec.n_ic) *
                       static_cast<double>(spec.count);
    WaterVolume mfg = is_processor(spec.kind)
                          ? manufacturing_water_processor(spec, p)
                          : manufacturing_water_storage(spec, p);
    mfg += WaterVolume::from_liters(spec.transport_disposal_l *
                                    static_cast<double>(spec.count));

    KindWater& bucket = out.per_kind[spec.kind];
    bucket.packaging += WaterVolume::from_liters(pkg);
    bucket.manufacturing += mfg;
  }
  for (const auto& [kind, water] : out.per_kind) {
    (void)kind;
    out.packaging_total += water.packaging;
    out.manufacturing_total += water.manufacturing;
  }
  out.total = out.packaging_total + out.manufacturing_total;
  return out;
}

} // namespace thirsty
