#pragma once

#include "thirsty/ingestion.hpp"
#include "thirsty/report.hpp"
#include "thirsty/water.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace thirsty::cli {

using ordered_json = nlohmann::ordered_json;

enum class WsiMode { none, uniform, split };

/// Flags shared by every subcommand.
struct GlobalOptions {
  std::string params_path; // resolved from --params or THIRSTY_PARAMS
  std::string out_dir = ".";
  bool gallons = false;
  WsiMode wsi = WsiMode::none;
  bool reproducible = false;
};

/// --params beats THIRSTY_PARAMS; neither set is a validation error.
std::string resolve_params_path(const std::string& flag_value);

/// Load the DB named by the options and record it in the manifest.
ParameterDb load_db(const GlobalOptions& opts, RunManifest& manifest);

/// Resolve a series path: an explicit flag wins; otherwise a site-declared
/// reference, taken relative to the parameter DB's directory. Empty result
/// plus empty fallback is a validation error naming the flag.
std::string resolve_input_path(const std::string& flag_value,
                               const std::string& site_ref,
                               const std::string& db_path,
                               const std::string& what);

/// Report envelope: type, engine identity, optional timestamp, units legend,
/// and the run manifest. Payload keys are appended by the caller.
ordered_json make_envelope(const std::string& report_type,
                           const GlobalOptions& opts,
                           const RunManifest& manifest);

/// Emit `<stem>_l` and, under --gallons, `<stem>_gal`.
void put_volume(ordered_json& obj, const std::string& stem, WaterVolume v,
                const GlobalOptions& opts);

/// Serialize with a trailing newline and write into the out directory.
/// Returns the full path written. Creates the directory if needed.
std::string write_report(const ordered_json& report, const GlobalOptions& opts,
                         const std::string& filename);

/// Path inside the out directory (created if needed) for sidecar series.
std::string out_path(const GlobalOptions& opts, const std::string& filename);

} // namespace thirsty::cli
