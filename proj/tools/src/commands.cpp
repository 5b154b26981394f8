#include "commands.hpp"

#include "thirsty/errors.hpp"
#include "thirsty/time.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

namespace thirsty::cli {
namespace {

/// Site-derived inputs every integrating command shares. The power trace is
/// separate because `rank` takes its profile from a different flag.
struct SiteInputs {
  const SiteProfile* site = nullptr;
  double pue = 1.0;
  std::string curve_name;
  WueCurve curve;
  WeatherSeries weather;
  EnergyMixSeries mix;
};

SiteInputs load_site_inputs(const ParameterDb& db, const BundleArgs& args,
                            RunManifest& manifest) {
  SiteInputs in;
  in.site = &site_profile(db, args.site);
  in.pue = args.pue_override > 0.0 ? args.pue_override : in.site->pue;
  if (in.pue < 1.0)
    throw ValidationError("--pue " + format_double(args.pue_override) +
                          ": PUE must be >= 1");
  in.curve_name = in.site->wue_curve;
  in.curve = curve_for_site(db, *in.site);

  const std::string weather_path = resolve_input_path(
      args.weather, in.site->weather_ref, db.path, "weather");
  manifest.add_input(weather_path);
  in.weather = load_weather_csv(weather_path);
  if (args.clamp_weather) {
    for (auto& s : in.weather.samples)
      s = clamp_to_wet_bulb_domain(s);
  }

  const std::string mix_path =
      resolve_input_path(args.mix, in.site->mix_ref, db.path, "mix");
  manifest.add_input(mix_path);
  in.mix = load_energy_mix_csv(mix_path);
  return in;
}

PowerTrace load_power_input(const BundleArgs& args, RunManifest& manifest) {
  if (!args.power.empty() && !args.jobs.empty())
    throw ValidationError("--power and --jobs are mutually exclusive");
  if (!args.power.empty()) {
    manifest.add_input(args.power);
    return load_power_csv(args.power);
  }
  if (!args.jobs.empty()) {
    if (args.total_nodes < 1)
      throw ValidationError(
          "--jobs needs --total-nodes (the machine's node count)");
    if (args.tdp_kw <= 0.0)
      throw ValidationError("--jobs needs --tdp-kw (per-node TDP, > 0)");
    manifest.add_input(args.jobs);
    const std::vector<JobRecord> jobs = load_jobs_csv(args.jobs);
    const NodePowerModel model{args.tdp_kw, args.idle_fraction};
    validate(model);
    return utilization_to_power(jobs, args.total_nodes, model, args.step_s);
  }
  throw ValidationError("no power input: pass --power <csv> or --jobs <csv>");
}

/// Scarcity weighting for an operational direct/indirect pair. `uniform`
/// applies the facility region's WSI to both buckets; `split` weights the
/// indirect bucket by the supply-share-averaged grid WSI instead.
void append_operational_scarcity(ordered_json& report,
                                 const GlobalOptions& opts,
                                 const ParameterDb& db,
                                 const SiteProfile& site, WaterVolume direct,
                                 WaterVolume indirect) {
  if (opts.wsi == WsiMode::none)
    return;
  const ScarcityIndex direct_idx = direct_wsi_for_site(db, site);
  const ScarcityIndex indirect_idx = opts.wsi == WsiMode::split
                                         ? indirect_wsi_for_site(db, site)
                                         : direct_idx;
  const WaterVolume wd = adjust_volume_uniform(direct, direct_idx);
  const WaterVolume wi = adjust_volume_uniform(indirect, indirect_idx);

  ordered_json block;
  block["mode"] = opts.wsi == WsiMode::split ? "split" : "uniform";
  block["wsi_direct"] = direct_idx.wsi;
  block["wsi_indirect"] = indirect_idx.wsi;
  put_volume(block, "direct_weighted", wd, opts);
  put_volume(block, "indirect_weighted", wi, opts);
  put_volume(block, "total_weighted", wd + wi, opts);
  report["scarcity"] = std::move(block);
}

ordered_json window_block(UnixSeconds first, UnixSeconds last,
                          std::int64_t step_s, std::size_t steps) {
  ordered_json w;
  w["start"] = format_utc(first);
  w["end"] = format_utc(last + step_s); // half-open
  w["step_s"] = step_s;
  w["steps"] = steps;
  return w;
}

double share_pct(double part, double whole) {
  return whole == 0.0 ? 0.0 : 100.0 * part / whole;
}

void finish(const ordered_json& report, const GlobalOptions& opts,
            const std::string& filename) {
  const std::string path = write_report(report, opts, filename);
  std::printf("wrote %s\n", path.c_str());
}

} // namespace

void cmd_embodied(const GlobalOptions& opts, const EmbodiedArgs& args,
                  RunManifest manifest) {
  if (opts.wsi == WsiMode::split)
    throw ValidationError(
        "--wsi split needs an operational direct/indirect pair; embodied "
        "reports support none or uniform");
  ParameterDb db = load_db(opts, manifest);
  manifest.add_input(args.inventory);
  const HardwareInventory inv = load_inventory(args.inventory, db);
  const EmbodiedBreakdown breakdown = embodied_footprint(inv);

  ordered_json report = make_envelope("embodied", opts, manifest);
  report["system_name"] = inv.system_name;
  std::int64_t units = 0;
  for (const auto& d : inv.devices)
    units += d.count;
  report["device_rows"] = inv.devices.size();
  report["device_units"] = units;

  ordered_json kinds = ordered_json::array();
  for (const auto& [kind, water] : breakdown.per_kind) {
    ordered_json row;
    row["kind"] = to_string(kind);
    put_volume(row, "packaging", water.packaging, opts);
    put_volume(row, "manufacturing", water.manufacturing, opts);
    put_volume(row, "total", water.total(), opts);
    row["share_pct"] =
        share_pct(water.total().liters(), breakdown.total.liters());
    kinds.push_back(std::move(row));
  }
  report["per_kind"] = std::move(kinds);
  put_volume(report, "packaging_total", breakdown.packaging_total, opts);
  put_volume(report, "manufacturing_total", breakdown.manufacturing_total,
             opts);
  put_volume(report, "total", breakdown.total, opts);

  if (opts.wsi == WsiMode::uniform) {
    // Each device is weighted by the scarcity of the region it was
    // fabricated in, so one inventory can span several fabs.
    WaterVolume weighted;
    for (std::size_t i = 0; i < inv.devices.size(); ++i) {
      HardwareInventory one{inv.system_name, {inv.devices[i]}, inv.params};
      const WaterVolume device_total = embodied_footprint(one).total;
      weighted = weighted + adjust_volume_uniform(
                                device_total,
                                wsi_for_region(db, inv.devices[i].fab_site));
    }
    ordered_json block;
    block["mode"] = "uniform";
    block["basis"] = "fab_site";
    put_volume(block, "total_weighted", weighted, opts);
    report["scarcity"] = std::move(block);
  }
  finish(report, opts, "embodied_report.json");
}

void cmd_operate(const GlobalOptions& opts, const OperateArgs& args,
                 RunManifest manifest) {
  ParameterDb db = load_db(opts, manifest);
  const SiteInputs in = load_site_inputs(db, args.bundle, manifest);
  const PowerTrace power = load_power_input(args.bundle, manifest);

  const IntensitySeries intensity = build_intensity_series(
      in.weather, in.mix, in.pue, in.curve, db.source_factors);
  const OperationalResult result = operational_footprint(power, intensity);

  const std::string intensity_csv = out_path(opts, "intensity.csv");
  write_intensity_csv(intensity_csv, intensity);
  const std::string steps_csv = out_path(opts, "operational_steps.csv");
  write_operational_csv(steps_csv, result);

  ordered_json report = make_envelope("operational", opts, manifest);
  report["site"] = in.site->name;
  report["pue"] = in.pue;
  report["wue_curve"] = in.curve_name;
  report["window"] =
      window_block(result.series.front().timestamp,
                   result.series.back().timestamp, result.step_s,
                   result.series.size());
  report["energy_kwh"] = result.energy_kwh;
  put_volume(report, "direct", result.direct, opts);
  put_volume(report, "indirect", result.indirect, opts);
  put_volume(report, "total", result.total, opts);
  report["direct_share_pct"] =
      share_pct(result.direct.liters(), result.total.liters());
  report["indirect_share_pct"] =
      share_pct(result.indirect.liters(), result.total.liters());
  report["carbon_g"] = result.carbon_g;
  ordered_json sidecars;
  sidecars["intensity_csv"] = "intensity.csv";
  sidecars["steps_csv"] = "operational_steps.csv";
  report["sidecars"] = std::move(sidecars);
  append_operational_scarcity(report, opts, db, *in.site, result.direct,
                              result.indirect);
  finish(report, opts, "operate_report.json");
}

void cmd_scenario(const GlobalOptions& opts, const ScenarioArgs& args,
                  RunManifest manifest) {
  ParameterDb db = load_db(opts, manifest);
  const SiteInputs in = load_site_inputs(db, args.bundle, manifest);
  PowerTrace power = load_power_input(args.bundle, manifest);
  manifest.add_input(args.scenarios);
  const std::vector<Scenario> scenarios = load_scenarios(args.scenarios);

  ScenarioBundle baseline;
  baseline.weather = in.weather;
  baseline.mix = in.mix;
  baseline.pue = in.pue;
  baseline.curve = in.curve;
  baseline.factors = db.source_factors;
  baseline.power = std::move(power);
  const std::vector<ScenarioOutcome> outcomes =
      run_scenarios(baseline, scenarios);

  ordered_json report = make_envelope("scenario", opts, manifest);
  report["site"] = in.site->name;
  report["pue"] = in.pue;
  report["baseline"] = outcomes.front().name;
  ordered_json rows = ordered_json::array();
  for (const auto& o : outcomes) {
    ordered_json row;
    row["name"] = o.name;
    row["energy_kwh"] = o.energy_kwh;
    put_volume(row, "direct", WaterVolume::from_liters(o.water_direct_l),
               opts);
    put_volume(row, "indirect", WaterVolume::from_liters(o.water_indirect_l),
               opts);
    put_volume(row, "total", WaterVolume::from_liters(o.water_total_l), opts);
    row["carbon_g"] = o.carbon_g;
    auto delta = [](const std::optional<double>& v) {
      return v ? ordered_json(*v) : ordered_json(nullptr);
    };
    row["delta_total_water_pct"] = delta(o.delta_water_total_pct);
    row["delta_direct_water_pct"] = delta(o.delta_water_direct_pct);
    row["delta_indirect_water_pct"] = delta(o.delta_water_indirect_pct);
    row["delta_carbon_pct"] = delta(o.delta_carbon_pct);
    rows.push_back(std::move(row));
  }
  report["rows"] = std::move(rows);
  finish(report, opts, "scenario_report.json");
}

void cmd_rank(const GlobalOptions& opts, const RankArgs& args,
              RunManifest manifest) {
  if (args.duration_hours <= 0.0)
    throw ValidationError("--duration-hours must be > 0");
  ParameterDb db = load_db(opts, manifest);
  const SiteInputs in = load_site_inputs(db, args.bundle, manifest);
  manifest.add_input(args.profile);
  const PowerTrace profile = load_power_csv(args.profile);
  manifest.add_input(args.candidates);
  const std::vector<UnixSeconds> candidates =
      load_candidates_csv(args.candidates);

  const IntensitySeries intensity = build_intensity_series(
      in.weather, in.mix, in.pue, in.curve, db.source_factors);
  const RankResult result =
      rank_start_times(candidates, args.duration_hours, profile, intensity);

  ordered_json report = make_envelope("rank", opts, manifest);
  report["site"] = in.site->name;
  report["duration_hours"] = args.duration_hours;
  report["candidates"] = result.costs.size();
  ordered_json costs = ordered_json::array();
  for (const auto& c : result.costs) {
    ordered_json row;
    row["start"] = format_utc(c.start);
    row["energy_kwh"] = c.energy_kwh;
    put_volume(row, "water", WaterVolume::from_liters(c.water_l), opts);
    row["carbon_g"] = c.carbon_g;
    costs.push_back(std::move(row));
  }
  report["costs"] = std::move(costs);
  auto order_to_json = [&](const std::vector<std::size_t>& order) {
    ordered_json arr = ordered_json::array();
    for (const std::size_t i : order)
      arr.push_back(format_utc(result.costs[i].start));
    return arr;
  };
  report["water_ranking"] = order_to_json(result.water_order);
  report["carbon_ranking"] = order_to_json(result.carbon_order);
  const bool agree = result.water_order == result.carbon_order;
  report["rankings_agree"] = agree;
  finish(report, opts, "rank_report.json");
}

void cmd_withdraw(const GlobalOptions& opts, const WithdrawArgs& args,
                  RunManifest manifest) {
  ParameterDb db = load_db(opts, manifest);
  double consumption_l = args.consumption_l;
  if (consumption_l >= 0.0 && !args.report.empty())
    throw ValidationError("--consumption-l and --report are mutually "
                          "exclusive");
  if (consumption_l < 0.0) {
    if (args.report.empty())
      throw ValidationError("no consumption input: pass --consumption-l "
                            "<liters> or --report <operational report>");
    manifest.add_input(args.report);
    std::ifstream f(args.report);
    if (!f)
      throw IoError(args.report + ": cannot open");
    ordered_json doc;
    try {
      doc = ordered_json::parse(f);
    } catch (const ordered_json::parse_error& e) {
      throw ValidationError(args.report + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("report_type", "") != "operational")
      throw ValidationError(args.report +
                            ": expected an operational report "
                            "(report_type \"operational\")");
    if (!doc.contains("total_l") || !doc["total_l"].is_number())
      throw ValidationError(args.report + ": missing numeric total_l");
    consumption_l = doc["total_l"].get<double>();
  }

  WithdrawalParams params = db.withdrawal;
  if (args.discharge_l >= 0.0)
    params.discharge_actual = WaterVolume::from_liters(args.discharge_l);
  validate(params);
  const WithdrawalResult result =
      withdrawal(WaterVolume::from_liters(consumption_l), params);

  ordered_json report = make_envelope("withdrawal", opts, manifest);
  put_volume(report, "consumption", WaterVolume::from_liters(consumption_l),
             opts);
  ordered_json p;
  put_volume(p, "discharge_actual", params.discharge_actual, opts);
  p["outfall_factor"] = params.outfall_factor;
  p["pollutant_factor"] = params.pollutant_factor;
  p["reuse_rate"] = params.reuse_rate;
  p["beta_potable"] = params.beta_potable;
  p["beta_nonpotable"] = params.beta_nonpotable;
  p["scarcity_potable"] = params.scarcity_potable;
  p["scarcity_nonpotable"] = params.scarcity_nonpotable;
  report["params"] = std::move(p);
  put_volume(report, "gross", result.gross, opts);
  put_volume(report, "net", result.net, opts);
  put_volume(report, "potable", result.potable, opts);
  put_volume(report, "nonpotable", result.nonpotable, opts);
  put_volume(report, "potable_weighted", result.potable_weighted, opts);
  put_volume(report, "nonpotable_weighted", result.nonpotable_weighted, opts);
  finish(report, opts, "withdraw_report.json");
}

void cmd_ratio_map(const GlobalOptions& opts, const RatioMapArgs& args,
                   RunManifest manifest) {
  ParameterDb db = load_db(opts, manifest);
  manifest.add_input(args.inventory);

  RatioMapSpec spec;
  spec.inventory = load_inventory(args.inventory, db);
  spec.energy_kwh = args.energy_kwh;
  spec.wue = args.wue;
  spec.pue = args.pue;
  spec.ewf = args.ewf;
  spec.mfg_wsi_axis = args.mfg_axis;
  spec.op_wsi_axis = args.op_axis;
  const RatioMap map = embodied_operational_ratio_map(spec);

  ordered_json report = make_envelope("ratio_map", opts, manifest);
  report["system_name"] = spec.inventory.system_name;
  put_volume(report, "embodied", WaterVolume::from_liters(map.embodied_l),
             opts);
  put_volume(report, "operational",
             WaterVolume::from_liters(map.operational_l), opts);
  report["energy_kwh"] = args.energy_kwh;
  report["wue_l_per_kwh"] = args.wue;
  report["pue"] = args.pue;
  report["ewf_l_per_kwh"] = args.ewf;
  report["mfg_wsi_axis"] = map.mfg_wsi_axis;
  report["op_wsi_axis"] = map.op_wsi_axis;
  report["ratios"] = map.ratios;
  ordered_json contour = ordered_json::array();
  for (const auto& [m, o] : map.unit_contour) {
    ordered_json pt;
    pt["mfg_wsi"] = m;
    pt["op_wsi"] = o;
    contour.push_back(std::move(pt));
  }
  report["unit_contour"] = std::move(contour);
  finish(report, opts, "ratio_map_report.json");
}

void cmd_validate(const GlobalOptions& opts, const ValidateArgs& args,
                  RunManifest manifest) {
  ParameterDb db = load_db(opts, manifest);
  check_cross_references(db);

  ordered_json checked;
  checked["process_params"] = db.process_params.size();
  checked["source_factors"] = db.source_factors.size();
  checked["wsi_regions"] = db.wsi.size();
  checked["wue_curves"] = db.wue_curves.size();
  checked["sites"] = db.sites.size();

  auto take = [&](const std::string& path, const std::string& key,
                  auto loader) {
    if (path.empty())
      return;
    manifest.add_input(path);
    checked[key] = loader(path);
  };
  take(args.inventory, "inventory_devices", [&](const std::string& p) {
    return load_inventory(p, db).devices.size();
  });
  take(args.weather, "weather_rows", [](const std::string& p) {
    return load_weather_csv(p).samples.size();
  });
  take(args.mix, "mix_rows", [](const std::string& p) {
    return load_energy_mix_csv(p).samples.size();
  });
  take(args.power, "power_rows", [](const std::string& p) {
    return load_power_csv(p).samples.size();
  });
  take(args.jobs, "job_rows", [](const std::string& p) {
    return load_jobs_csv(p).size();
  });
  take(args.scenarios, "scenarios", [](const std::string& p) {
    return load_scenarios(p).size();
  });
  take(args.candidates, "candidates", [](const std::string& p) {
    return load_candidates_csv(p).size();
  });

  ordered_json report = make_envelope("validate", opts, manifest);
  report["status"] = "ok";
  report["checked"] = std::move(checked);
  finish(report, opts, "validate_report.json");
}

} // namespace thirsty::cli
