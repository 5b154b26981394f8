#include "commands.hpp"

#include "thirsty/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace {

using namespace thirsty;
using namespace thirsty::cli;

int run(int argc, char** argv) {
  CLI::App app{"Water footprint accounting for data centers and HPC systems"};
  app.name("thirsty");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  std::string params_flag;
  app.add_option("--params", params_flag,
                 "parameter database JSON (default: $THIRSTY_PARAMS)");
  app.add_option("--out", opts.out_dir,
                 "directory for reports and sidecar CSVs")
      ->capture_default_str();
  app.add_flag("--gallons", opts.gallons,
               "also render volumes in US gallons (3.785411784 L/gal)");
  const std::map<std::string, WsiMode> wsi_names{
      {"none", WsiMode::none},
      {"uniform", WsiMode::uniform},
      {"split", WsiMode::split}};
  app.add_option("--wsi", opts.wsi,
                 "scarcity weighting: none, uniform, or split")
      ->transform(CLI::CheckedTransformer(wsi_names, CLI::ignore_case));
  app.add_flag("--reproducible", opts.reproducible,
               "omit the generation timestamp so identical runs are "
               "byte-identical");

  // Bundle flags shared by operate/scenario/rank. Each subcommand gets its
  // own copy so CLI11 can mark requirements independently.
  auto add_site_flags = [](CLI::App* sub, BundleArgs& b,
                           bool with_power) {
    sub->add_option("--site", b.site, "site profile name from the DB")
        ->required();
    sub->add_option("--weather", b.weather,
                    "weather CSV (default: the site's declared file)");
    sub->add_option("--mix", b.mix,
                    "energy mix CSV (default: the site's declared file)");
    sub->add_option("--pue", b.pue_override, "override the site's PUE");
    sub->add_flag("--clamp-weather", b.clamp_weather,
                  "clamp weather into the wet-bulb regression's validity "
                  "window instead of rejecting it");
    if (with_power) {
      sub->add_option("--power", b.power, "facility power trace CSV");
      sub->add_option("--jobs", b.jobs,
                      "scheduler log CSV to estimate power from");
      sub->add_option("--total-nodes", b.total_nodes,
                      "machine node count (with --jobs)");
      sub->add_option("--tdp-kw", b.tdp_kw,
                      "per-node TDP in kW (with --jobs)");
      sub->add_option("--idle-fraction", b.idle_fraction,
                      "idle power as a fraction of TDP (with --jobs)")
          ->capture_default_str();
      sub->add_option("--step", b.step_s,
                      "step seconds for the derived trace (with --jobs)")
          ->capture_default_str();
    }
  };

  EmbodiedArgs embodied;
  CLI::App* sub_embodied = app.add_subcommand(
      "embodied", "embodied water of a hardware inventory");
  sub_embodied->fallthrough();
  sub_embodied->add_option("--inventory", embodied.inventory,
                           "hardware inventory JSON")
      ->required();

  OperateArgs operate;
  CLI::App* sub_operate = app.add_subcommand(
      "operate", "operational water and carbon over a time window");
  sub_operate->fallthrough();
  add_site_flags(sub_operate, operate.bundle, true);

  ScenarioArgs scenario;
  CLI::App* sub_scenario = app.add_subcommand(
      "scenario", "what-if energy-mix comparison against a baseline");
  sub_scenario->fallthrough();
  add_site_flags(sub_scenario, scenario.bundle, true);
  sub_scenario->add_option("--scenarios", scenario.scenarios,
                           "scenario definitions JSON")
      ->required();

  RankArgs rank;
  CLI::App* sub_rank = app.add_subcommand(
      "rank", "rank candidate start times by water and carbon cost");
  sub_rank->fallthrough();
  add_site_flags(sub_rank, rank.bundle, false);
  sub_rank->add_option("--candidates", rank.candidates,
                       "candidate start times CSV")
      ->required();
  sub_rank->add_option("--profile", rank.profile,
                       "application power profile CSV")
      ->required();
  sub_rank->add_option("--duration-hours", rank.duration_hours,
                       "run duration in hours")
      ->required();

  WithdrawArgs withdraw;
  CLI::App* sub_withdraw = app.add_subcommand(
      "withdraw", "withdrawal accounting for a consumption volume");
  sub_withdraw->fallthrough();
  sub_withdraw->add_option("--consumption-l", withdraw.consumption_l,
                           "consumed water in liters");
  sub_withdraw->add_option("--report", withdraw.report,
                           "operational report to take the total from");
  sub_withdraw->add_option("--discharge-l", withdraw.discharge_l,
                           "override the DB's reported discharge (liters)");

  RatioMapArgs ratio;
  CLI::App* sub_ratio = app.add_subcommand(
      "ratio-map", "embodied/operational ratio over a WSI grid");
  sub_ratio->fallthrough();
  sub_ratio->add_option("--inventory", ratio.inventory,
                        "hardware inventory JSON")
      ->required();
  sub_ratio->add_option("--energy-kwh", ratio.energy_kwh,
                        "lifetime IT energy in kWh")
      ->required();
  sub_ratio->add_option("--wue", ratio.wue, "on-site WUE in L/kWh")
      ->required();
  sub_ratio->add_option("--pue", ratio.pue, "facility PUE")
      ->capture_default_str();
  sub_ratio->add_option("--ewf", ratio.ewf, "grid EWF in L/kWh")
      ->capture_default_str();
  sub_ratio->add_option("--mfg-axis", ratio.mfg_axis,
                        "manufacturing WSI axis values (comma separated)")
      ->required()
      ->delimiter(',');
  sub_ratio->add_option("--op-axis", ratio.op_axis,
                        "operational WSI axis values (comma separated)")
      ->required()
      ->delimiter(',');

  ValidateArgs validate;
  CLI::App* sub_validate = app.add_subcommand(
      "validate", "check a parameter DB and optional input files");
  sub_validate->fallthrough();
  sub_validate->add_option("--inventory", validate.inventory,
                           "hardware inventory JSON to check");
  sub_validate->add_option("--weather", validate.weather,
                           "weather CSV to check");
  sub_validate->add_option("--mix", validate.mix, "energy mix CSV to check");
  sub_validate->add_option("--power", validate.power,
                           "power trace CSV to check");
  sub_validate->add_option("--jobs", validate.jobs,
                           "scheduler log CSV to check");
  sub_validate->add_option("--scenarios", validate.scenarios,
                           "scenario JSON to check");
  sub_validate->add_option("--candidates", validate.candidates,
                           "candidate start times CSV to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Normalize CLI11's exit codes onto the documented contract: anything
    // other than a clean --help/--version is an input validation failure.
    return code == 0 ? 0 : 2;
  }

  opts.params_path = resolve_params_path(params_flag);

  RunManifest manifest;
  manifest.command = "thirsty";
  for (int i = 1; i < argc; ++i)
    manifest.args.emplace_back(argv[i]);

  if (app.got_subcommand(sub_embodied))
    cmd_embodied(opts, embodied, std::move(manifest));
  else if (app.got_subcommand(sub_operate))
    cmd_operate(opts, operate, std::move(manifest));
  else if (app.got_subcommand(sub_scenario))
    cmd_scenario(opts, scenario, std::move(manifest));
  else if (app.got_subcommand(sub_rank))
    cmd_rank(opts, rank, std::move(manifest));
  else if (app.got_subcommand(sub_withdraw))
    cmd_withdraw(opts, withdraw, std::move(manifest));
  else if (app.got_subcommand(sub_ratio))
    cmd_ratio_map(opts, ratio, std::move(manifest));
  else if (app.got_subcommand(sub_validate))
    cmd_validate(opts, validate, std::move(manifest));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const thirsty::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const thirsty::ResolutionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const thirsty::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const thirsty::AlignmentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
