#pragma once

#include "cli_support.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace thirsty::cli {

/// Inputs shared by the commands that integrate a bundle (operate, scenario,
/// rank): a site from the parameter DB, weather + mix series, and a power
/// trace given directly or derived from a job log.
struct BundleArgs {
  std::string site;
  std::string weather; // optional; falls back to the site's reference
  std::string mix;     // optional; falls back to the site's reference
  std::string power;   // mutually exclusive with jobs
  std::string jobs;
  std::int64_t total_nodes = 0;
  double tdp_kw = 0.0;
  double idle_fraction = 0.0;
  std::int64_t step_s = 3600;
  double pue_override = 0.0; // 0 = use the site's PUE
  bool clamp_weather = false;
};

struct EmbodiedArgs {
  std::string inventory;
};

struct OperateArgs {
  BundleArgs bundle;
};

struct ScenarioArgs {
  BundleArgs bundle;
  std::string scenarios;
};

struct RankArgs {
  BundleArgs bundle; // power/jobs unused; the profile is separate
  std::string candidates;
  std::string profile;
  double duration_hours = 0.0;
};

struct WithdrawArgs {
  double consumption_l = -1.0; // < 0 = not given
  std::string report;          // operational report to take the total from
  double discharge_l = -1.0;   // < 0 = use the DB's value
};

struct RatioMapArgs {
  std::string inventory;
  double energy_kwh = 0.0;
  double wue = 0.0;
  double pue = 1.0;
  double ewf = 0.0;
  std::vector<double> mfg_axis;
  std::vector<double> op_axis;
};

struct ValidateArgs {
  std::string inventory;
  std::string weather;
  std::string mix;
  std::string power;
  std::string jobs;
  std::string scenarios;
  std::string candidates;
};

void cmd_embodied(const GlobalOptions& opts, const EmbodiedArgs& args,
                  RunManifest manifest);
void cmd_operate(const GlobalOptions& opts, const OperateArgs& args,
                 RunManifest manifest);
void cmd_scenario(const GlobalOptions& opts, const ScenarioArgs& args,
                  RunManifest manifest);
void cmd_rank(const GlobalOptions& opts, const RankArgs& args,
              RunManifest manifest);
void cmd_withdraw(const GlobalOptions& opts, const WithdrawArgs& args,
                  RunManifest manifest);
void cmd_ratio_map(const GlobalOptions& opts, const RatioMapArgs& args,
                   RunManifest manifest);
void cmd_validate(const GlobalOptions& opts, const ValidateArgs& args,
                  RunManifest manifest);

} // namespace thirsty::cli
