#include "cli_support.hpp"

#include "thirsty/errors.hpp"
#include "thirsty/time.hpp"

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace thirsty::cli {

namespace fs = std::filesystem;

std::string resolve_params_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("THIRSTY_PARAMS"); env && *env)
    return env;
  throw ValidationError(
      "no parameter DB: pass --params <file> or set THIRSTY_PARAMS");
}

ParameterDb load_db(const GlobalOptions& opts, RunManifest& manifest) {
  manifest.add_input(opts.params_path);
  return load_parameter_db(opts.params_path);
}

std::string resolve_input_path(const std::string& flag_value,
                               const std::string& site_ref,
                               const std::string& db_path,
                               const std::string& what) {
  if (!flag_value.empty()) return flag_value;
  if (!site_ref.empty()) {
    const fs::path ref(site_ref);
    if (ref.is_absolute()) return ref.string();
    return (fs::path(db_path).parent_path() / ref).string();
  }
  throw ValidationError("no " + what + " input: pass --" + what +
                        " or declare it on the site profile");
}

ordered_json make_envelope(const std::string& report_type,
                           const GlobalOptions& opts,
                           const RunManifest& manifest) {
  ordered_json j;
  j["report_type"] = report_type;
  j["engine"] = {{"name", engine_name}, {"version", engine_version}};
  if (!opts.reproducible)
    j["generated_at"] = format_utc(static_cast<UnixSeconds>(std::time(nullptr)));
  ordered_json units;
  units["water"] = "L";
  if (opts.gallons) units["water_gal"] = "US gal";
  units["energy"] = "kWh";
  units["intensity"] = "L/kWh";
  units["carbon_intensity"] = "gCO2-eq/kWh";
  units["carbon"] = "gCO2-eq";
  j["units"] = std::move(units);
  ordered_json m;
  m["command"] = manifest.command;
  m["args"] = manifest.args;
  ordered_json inputs = ordered_json::array();
  for (const auto& in : manifest.inputs)
    inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  m["inputs"] = std::move(inputs);
  j["manifest"] = std::move(m);
  return j;
}

void put_volume(ordered_json& obj, const std::string& stem, WaterVolume v,
                const GlobalOptions& opts) {
  obj[stem + "_l"] = v.liters();
  if (opts.gallons) obj[stem + "_gal"] = v.gallons();
}

std::string out_path(const GlobalOptions& opts, const std::string& filename) {
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + opts.out_dir + "': " +
                  ec.message());
  return (fs::path(opts.out_dir) / filename).string();
}

std::string write_report(const ordered_json& report, const GlobalOptions& opts,
                         const std::string& filename) {
  const std::string path = out_path(opts, filename);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out << report.dump(2) << "\n";
  out.flush();
  if (!out)
    throw IoError("failed writing '" + path + "'");
  return path;
}

} // namespace thirsty::cli
