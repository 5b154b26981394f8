#pragma once

#include "thirsty/analysis.hpp"
#include "thirsty/footprint.hpp"
#include "thirsty/operational.hpp"
#include "thirsty/scarcity.hpp"
#include "thirsty/series.hpp"
#include "thirsty/withdrawal.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace thirsty {

/// One scheduler job: [start, end) on `nodes_used` nodes.
struct JobRecord {
  std::string job_id;
  UnixSeconds start = 0;
  UnixSeconds end = 0;
  std::int64_t nodes_used = 0;
};

void validate(const JobRecord& job);

/// TDP occupancy model: busy nodes draw tdp_per_node_kw, idle nodes
/// idle_fraction × tdp_per_node_kw. The default idle_fraction of 0 matches
/// estimation from job logs alone.
struct NodePowerModel {
  double tdp_per_node_kw = 0.0;
  double idle_fraction = 0.0;
};

void validate(const NodePowerModel& model);

/// Facility bundle from the parameter DB `sites` section. `region` keys the
/// `wsi` section; `grid_supply` lists the grids feeding the site (defaults to
/// the facility region). `weather_ref`/`mix_ref` are optional series paths
/// relative to the DB file.
struct SiteProfile {
  std::string name;
  double pue = 1.0;
  std::string wue_curve = "default";
  std::string region;
  std::vector<std::pair<std::string, double>> grid_supply;
  std::string weather_ref;
  std::string mix_ref;
};

void validate(const SiteProfile& site);

/// Area-factor convention the engine computes with; parameter files must
/// declare this basis (or none).
inline constexpr const char* area_basis_l_per_cm2 = "L_per_cm2_die";

struct ParameterDb {
  std::string path;     // absolute path the DB was loaded from ("" if built)
  std::string area_basis = area_basis_l_per_cm2;
  std::vector<ProcessParams> process_params;
  SourceFactorMap source_factors;
  std::map<std::string, ScarcityIndex> wsi;
  std::map<std::string, WueCurve> wue_curves;
  WithdrawalParams withdrawal;
  std::map<std::string, SiteProfile> sites;
};

/// Parse and validate the JSON parameter database. File-system problems
/// throw IoError; malformed JSON or out-of-range values throw
/// ValidationError naming the section, field, and admissible range.
ParameterDb load_parameter_db(const std::string& path);

/// Site accessors; lookups that fail throw ResolutionError.
const SiteProfile& site_profile(const ParameterDb& db, const std::string& name);
const WueCurve& curve_for_site(const ParameterDb& db, const SiteProfile& site);
ScarcityIndex wsi_for_region(const ParameterDb& db, const std::string& region);
ScarcityIndex direct_wsi_for_site(const ParameterDb& db, const SiteProfile& site);
/// Share-weighted WSI over the site's grid supply.
ScarcityIndex indirect_wsi_for_site(const ParameterDb& db, const SiteProfile& site);

/// Cross-reference every site against curves and WSI regions; used by the
/// `validate` command for whole-DB checking.
void check_cross_references(const ParameterDb& db);

/// Hardware inventory JSON: system_name plus device rows; process parameters
/// come from the DB.
HardwareInventory load_inventory(const std::string& path, const ParameterDb& db);

/// Scenario definitions, section `scenarios` of the shared structured format.
std::vector<Scenario> load_scenarios(const std::string& path);

// CSV ingestion. All series files share the layout: optional leading
// comment lines ("# step_seconds: N" declares the step), a fixed header,
// then data rows. Without a declared step it is inferred as the smallest
// timestamp gap; all gaps must be multiples of it.

WeatherSeries load_weather_csv(const std::string& path);
EnergyMixSeries load_energy_mix_csv(const std::string& path);
PowerTrace load_power_csv(const std::string& path);
std::vector<JobRecord> load_jobs_csv(const std::string& path);
std::vector<ScarcityIndex> load_wsi_csv(const std::string& path);
std::vector<UnixSeconds> load_candidates_csv(const std::string& path);

enum class SeriesKind { energy_mix, weather, power };
using AnySeries = std::variant<EnergyMixSeries, WeatherSeries, PowerTrace>;
AnySeries load_series(const std::string& path, SeriesKind kind);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

// Canonical CSV writers; loading what they wrote reproduces the series
// bit-for-bit.
void write_weather_csv(const std::string& path, const WeatherSeries& series);
void write_energy_mix_csv(const std::string& path, const EnergyMixSeries& series);
void write_power_csv(const std::string& path, const PowerTrace& trace);
void write_intensity_csv(const std::string& path, const IntensitySeries& series);
void write_operational_csv(const std::string& path, const OperationalResult& result);

/// Estimate a power trace from job occupancy over an explicit window
/// [window_start, window_end) on the epoch-anchored step lattice. Jobs are
/// weighted by their fractional overlap with each step.
PowerTrace utilization_to_power(const std::vector<JobRecord>& jobs,
                                std::int64_t total_nodes,
                                const NodePowerModel& model, std::int64_t step_s,
                                UnixSeconds window_start, UnixSeconds window_end);

/// Same, with the window derived from the jobs themselves (earliest start
/// floored to the lattice, latest end ceiled).
PowerTrace utilization_to_power(const std::vector<JobRecord>& jobs,
                                std::int64_t total_nodes,
                                const NodePowerModel& model, std::int64_t step_s);

} // namespace thirsty
