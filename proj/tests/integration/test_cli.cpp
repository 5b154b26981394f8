#include <doctest.h>

#include "schema_check.hpp"
#include "test_support.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

// Black-box tests of the installed binary: spawn it, check exit codes, and
// validate every emitted report against the shipped schema.

namespace {

using nlohmann::json;
using testutil::TempDir;

std::string cli() { return testutil::env_dir("THIRSTY_CLI"); }
std::string data_dir() { return testutil::env_dir("THIRSTY_DATA"); }

const json& report_schema() {
  static const json schema =
      json::parse(testutil::read_text(testutil::env_dir("THIRSTY_SCHEMAS") +
                                      "/report.schema.json"));
  return schema;
}

struct CliRun {
  int exit_code = -1;
  std::string output; // stdout + stderr interleaved
};

/// Run the CLI with `args` appended; `env_prefix` may carry VAR=value
/// assignments. The output capture file lives in its own scratch dir so
/// parallel test cases cannot collide.
CliRun run_cli(const std::string& args, const std::string& env_prefix = "") {
  TempDir scratch;
  const std::string capture = scratch.file("output.txt");
  std::string cmd = "env ";
  if (!env_prefix.empty())
    cmd += env_prefix + " ";
  cmd += cli() + " " + args + " >" + capture + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.output = testutil::read_text(capture);
  return r;
}

json load_report(const std::string& path) {
  const json doc = json::parse(testutil::read_text(path));
  const auto violations = testutil::schema_violations(report_schema(), doc);
  for (const auto& v : violations)
    FAIL_CHECK("schema violation in ", path, ": ", v);
  return doc;
}

std::string default_args(const TempDir& out) {
  return "--params " + data_dir() + "/params_default.json --out " +
         out.file("");
}

} // namespace

TEST_CASE("embodied command emits a schema-valid report") {
  TempDir out;
  const CliRun r = run_cli(default_args(out) + " --gallons embodied --inventory " +
                           data_dir() + "/inventory_example.json");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(out.file("embodied_report.json"));
  CHECK(doc["report_type"] == "embodied");
  CHECK(doc["total_l"].get<double>() > 0.0);
  CHECK(doc["total_gal"].get<double>() ==
        doctest::Approx(doc["total_l"].get<double>() / 3.785411784)
            .epsilon(1e-15));

  double share_sum = 0.0;
  double kind_total = 0.0;
  for (const auto& row : doc["per_kind"]) {
    share_sum += row["share_pct"].get<double>();
    kind_total += row["total_l"].get<double>();
  }
  CHECK(share_sum == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(kind_total ==
        doctest::Approx(doc["total_l"].get<double>()).epsilon(1e-12));
  CHECK(doc["packaging_total_l"].get<double>() +
            doc["manufacturing_total_l"].get<double>() ==
        doc["total_l"].get<double>());
}

TEST_CASE("embodied respects the wsi flag") {
  TempDir out;
  const std::string tail =
      " embodied --inventory " + data_dir() + "/inventory_example.json";

  SUBCASE("uniform weighting adds a fab-site scarcity block") {
    const CliRun r = run_cli(default_args(out) + " --wsi uniform" + tail);
    REQUIRE(r.exit_code == 0);
    const json doc = load_report(out.file("embodied_report.json"));
    REQUIRE(doc.contains("scarcity"));
    CHECK(doc["scarcity"]["mode"] == "uniform");
    CHECK(doc["scarcity"]["total_weighted_l"].get<double>() > 0.0);
  }
  SUBCASE("split weighting is rejected: there is no indirect bucket") {
    const CliRun r = run_cli(default_args(out) + " --wsi split" + tail);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("embodied") != std::string::npos);
  }
}

TEST_CASE("embodied names the device when its process node is missing") {
  TempDir out;
  testutil::write_text(out.file("inv.json"), R"({
    "system_name": "mystery",
    "devices": [
      {"kind": "CPU", "name": "prototype_cpu", "count": 1, "n_ic": 1,
       "die_area_mm2": 300, "process_node_nm": 3,
       "fab_site": "tw_hsinchu"}
    ]
  })");
  const CliRun r = run_cli(default_args(out) + " embodied --inventory " +
                           out.file("inv.json"));
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("prototype_cpu") != std::string::npos);
}

TEST_CASE("operate command: full pipeline on the shipped example") {
  TempDir out;
  const CliRun r = run_cli(default_args(out) +
                           " operate --site example_dc --power " + data_dir() +
                           "/power_example.csv");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(out.file("operate_report.json"));
  CHECK(doc["report_type"] == "operational");
  CHECK(doc["site"] == "example_dc");
  CHECK(doc["window"]["steps"] == 48);

  const double direct = doc["direct_l"].get<double>();
  const double indirect = doc["indirect_l"].get<double>();
  CHECK(direct + indirect == doc["total_l"].get<double>());
  CHECK(doc["direct_share_pct"].get<double>() +
            doc["indirect_share_pct"].get<double>() ==
        doctest::Approx(100.0).epsilon(1e-12));

  // Sidecars are written next to the report and re-ingestable.
  const std::string intensity = testutil::read_text(out.file("intensity.csv"));
  CHECK(intensity.find("timestamp,wue_l_per_kwh,") != std::string::npos);
  const std::string steps = testutil::read_text(out.file("operational_steps.csv"));
  CHECK(steps.find("timestamp,energy_kwh,") != std::string::npos);
}

TEST_CASE("operate with constant inputs: direct share is wue over wi") {
  TempDir fixtures;
  // Flat single-knot WUE curve, constant mix and power: every step sees the
  // same intensities, so share algebra collapses to wue / wi.
  const double wue = 1.8;
  const double pue = 1.25;
  const char* mix_source = "coal"; // shipped EWF 1.0, CI 820
  const double ewf = 1.0;
  testutil::write_text(fixtures.file("db.json"), R"({
    "meta": {"area_basis": "L_per_cm2_die"},
    "source_factors": {"coal": {"ewf_l_per_kwh": 1.0, "ci_g_per_kwh": 820.0}},
    "wsi": {},
    "wue_curves": {"flat": {"knots": [[10.0, 1.8]]}},
    "sites": {"lab": {"pue": 1.25, "wue_curve": "flat"}}
  })");
  std::string weather = "timestamp,air_temp_c,rel_humidity_pct\n";
  std::string mix = "timestamp,source,share\n";
  std::string power = "timestamp,power_kw\n";
  for (int h = 0; h < 24; ++h) {
    char ts[32];
    std::snprintf(ts, sizeof ts, "2023-01-01T%02d:00:00Z", h);
    weather += std::string(ts) + ",20,50\n";
    mix += std::string(ts) + "," + mix_source + ",1\n";
    power += std::string(ts) + ",1000\n";
  }
  testutil::write_text(fixtures.file("weather.csv"), weather);
  testutil::write_text(fixtures.file("mix.csv"), mix);
  testutil::write_text(fixtures.file("power.csv"), power);

  TempDir out;
  const CliRun r = run_cli("--params " + fixtures.file("db.json") + " --out " +
                           out.file("") + " operate --site lab --weather " +
                           fixtures.file("weather.csv") + " --mix " +
                           fixtures.file("mix.csv") + " --power " +
                           fixtures.file("power.csv"));
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(out.file("operate_report.json"));
  // With pue*ewf in the same range as wue, the indirect bucket carries a
  // share of the same order as the direct one; both collapse to the
  // constant-series algebra.
  const double wi = wue + pue * ewf;
  CHECK(doc["direct_share_pct"].get<double>() ==
        doctest::Approx(100.0 * wue / wi).epsilon(1e-12));
  CHECK(doc["indirect_share_pct"].get<double>() ==
        doctest::Approx(100.0 * pue * ewf / wi).epsilon(1e-12));
  CHECK(doc["energy_kwh"].get<double>() == 24000.0);
}

TEST_CASE("scenario command reproduces baseline and orders deltas") {
  TempDir out;
  const CliRun r = run_cli(default_args(out) +
                           " scenario --site example_dc --power " + data_dir() +
                           "/power_example.csv --scenarios " + data_dir() +
                           "/scenarios_example.json");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(out.file("scenario_report.json"));
  REQUIRE(doc["rows"].size() == 6); // baseline + 5 scenarios

  const json& baseline = doc["rows"][0];
  CHECK(baseline["name"] == "baseline");
  CHECK(baseline["delta_total_water_pct"].get<double>() == 0.0);

  // "as-is" keeps the mix unchanged and must match bit-for-bit.
  const json& as_is = doc["rows"][1];
  CHECK(as_is["name"] == "as-is");
  CHECK(as_is["total_l"] == baseline["total_l"]);
  CHECK(as_is["carbon_g"] == baseline["carbon_g"]);
  CHECK(as_is["delta_carbon_pct"].get<double>() == 0.0);

  for (const auto& row : doc["rows"]) {
    const std::string name = row["name"].get<std::string>();
    if (name == "all-coal")
      CHECK(row["delta_carbon_pct"].get<double>() > 100.0);
    if (name == "all-nuclear")
      CHECK(row["delta_carbon_pct"].get<double>() < -80.0);
    if (name == "all-hydro")
      CHECK(row["delta_total_water_pct"].get<double>() > 60.0);
  }
}

TEST_CASE("rank command emits permutation rankings") {
  TempDir out;
  const CliRun r = run_cli(default_args(out) +
                           " rank --site example_dc --candidates " + data_dir() +
                           "/candidates_example.csv --profile " + data_dir() +
                           "/power_example.csv --duration-hours 12");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(out.file("rank_report.json"));
  REQUIRE(doc["candidates"] == 7);
  REQUIRE(doc["costs"].size() == 7);
  REQUIRE(doc["water_ranking"].size() == 7);
  REQUIRE(doc["carbon_ranking"].size() == 7);

  auto is_permutation = [&](const json& ranking) {
    std::vector<std::string> starts;
    for (const auto& c : doc["costs"])
      starts.push_back(c["start"].get<std::string>());
    std::vector<std::string> ranked;
    for (const auto& s : ranking)
      ranked.push_back(s.get<std::string>());
    std::sort(starts.begin(), starts.end());
    std::sort(ranked.begin(), ranked.end());
    return starts == ranked;
  };
  CHECK(is_permutation(doc["water_ranking"]));
  CHECK(is_permutation(doc["carbon_ranking"]));
  CHECK(doc["rankings_agree"].get<bool>() ==
        (doc["water_ranking"] == doc["carbon_ranking"]));
}

TEST_CASE("withdraw command") {
  TempDir out;

  SUBCASE("explicit consumption with discharge override") {
    const CliRun r = run_cli(default_args(out) +
                             " withdraw --consumption-l 1024 --discharge-l 256");
    CAPTURE(r.output);
    REQUIRE(r.exit_code == 0);
    const json doc = load_report(out.file("withdraw_report.json"));
    // Shipped defaults are neutral: gross = consumption + discharge,
    // nothing reused, everything potable.
    CHECK(doc["gross_l"].get<double>() == 1280.0);
    CHECK(doc["net_l"].get<double>() == 1280.0);
    CHECK(doc["potable_l"].get<double>() == 1280.0);
    CHECK(doc["nonpotable_l"].get<double>() == 0.0);
  }

  SUBCASE("chained from an operational report") {
    const CliRun op = run_cli(default_args(out) +
                              " operate --site example_dc --power " +
                              data_dir() + "/power_example.csv");
    REQUIRE(op.exit_code == 0);
    const json op_doc = load_report(out.file("operate_report.json"));

    const CliRun r = run_cli(default_args(out) + " withdraw --report " +
                             out.file("operate_report.json"));
    CAPTURE(r.output);
    REQUIRE(r.exit_code == 0);
    const json doc = load_report(out.file("withdraw_report.json"));
    CHECK(doc["consumption_l"] == op_doc["total_l"]);
  }

  SUBCASE("consumption and report are mutually exclusive") {
    const CliRun r = run_cli(default_args(out) +
                             " withdraw --consumption-l 1 --report x.json");
    CHECK(r.exit_code == 2);
  }

  SUBCASE("a non-operational report is rejected") {
    testutil::write_text(out.file("other.json"),
                         "{\"report_type\": \"rank\"}\n");
    const CliRun r = run_cli(default_args(out) + " withdraw --report " +
                             out.file("other.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("operational") != std::string::npos);
  }
}

TEST_CASE("ratio-map command") {
  TempDir out;
  const CliRun r = run_cli(
      default_args(out) + " ratio-map --inventory " + data_dir() +
      "/inventory_example.json --energy-kwh 100000 --wue 1.1 --pue 1.2 "
      "--ewf 0.55 --mfg-axis 0.5,1,2 --op-axis 1,2");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(out.file("ratio_map_report.json"));
  REQUIRE(doc["ratios"].size() == 3);
  REQUIRE(doc["ratios"][0].size() == 2);

  const double embodied = doc["embodied_l"].get<double>();
  const double operational = doc["operational_l"].get<double>();
  CHECK(operational ==
        doctest::Approx(100000 * (1.1 + 1.2 * 0.55)).epsilon(1e-12));
  CHECK(doc["ratios"][1][0].get<double>() ==
        doctest::Approx(embodied / operational).epsilon(1e-12));
  for (const auto& pt : doc["unit_contour"]) {
    const double m = pt["mfg_wsi"].get<double>();
    const double o = pt["op_wsi"].get<double>();
    CHECK(m * embodied == doctest::Approx(o * operational).epsilon(1e-12));
  }
}

TEST_CASE("validate command checks the DB and optional inputs") {
  TempDir out;
  const CliRun r = run_cli(default_args(out) + " validate --inventory " +
                           data_dir() + "/inventory_example.json --weather " +
                           data_dir() + "/weather_example.csv");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(out.file("validate_report.json"));
  CHECK(doc["status"] == "ok");
  CHECK(doc["checked"]["sites"].get<int>() >= 1);
  CHECK(doc["checked"]["inventory_devices"] == 5);
  CHECK(doc["checked"]["weather_rows"] == 48);
}

TEST_CASE("exit codes follow the documented contract") {
  TempDir out;

  SUBCASE("no parameter DB anywhere: 2") {
    const CliRun r = run_cli("--out " + out.file("") + " validate");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("THIRSTY_PARAMS") != std::string::npos);
  }
  SUBCASE("unknown site: 3") {
    const CliRun r = run_cli(default_args(out) +
                             " operate --site atlantis --power " + data_dir() +
                             "/power_example.csv");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("atlantis") != std::string::npos);
  }
  SUBCASE("missing input file: 4") {
    const CliRun r = run_cli(default_args(out) +
                             " operate --site example_dc --power " +
                             out.file("nope.csv"));
    CHECK(r.exit_code == 4);
  }
  SUBCASE("misaligned series: 5") {
    testutil::write_text(out.file("p.csv"),
                         "# step_seconds: 1800\ntimestamp,power_kw\n"
                         "2023-07-01T00:00:00Z,500\n");
    const CliRun r = run_cli(default_args(out) +
                             " operate --site example_dc --power " +
                             out.file("p.csv"));
    CHECK(r.exit_code == 5);
    CHECK(r.output.find("step") != std::string::npos);
  }
  SUBCASE("bad flag value: 2") {
    const CliRun r = run_cli(default_args(out) + " --wsi everywhere validate");
    CHECK(r.exit_code == 2);
  }
  SUBCASE("unknown subcommand: 2") {
    const CliRun r = run_cli(default_args(out) + " irrigate");
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("THIRSTY_PARAMS provides the default DB and --params overrides it") {
  TempDir out;
  const std::string env = "THIRSTY_PARAMS=" + data_dir() + "/params_default.json";

  const CliRun via_env = run_cli("--out " + out.file("") + " validate", env);
  CAPTURE(via_env.output);
  CHECK(via_env.exit_code == 0);

  // A broken env value must not shadow an explicit flag.
  const CliRun flag_wins =
      run_cli(default_args(out) + " validate", "THIRSTY_PARAMS=/nope.json");
  CHECK(flag_wins.exit_code == 0);
}

TEST_CASE("reproducible runs are byte-identical and undated") {
  TempDir out;
  const std::string args = default_args(out) +
                           " --reproducible operate --site example_dc --power " +
                           data_dir() + "/power_example.csv";
  REQUIRE(run_cli(args).exit_code == 0);
  const std::string first = testutil::read_text(out.file("operate_report.json"));
  REQUIRE(run_cli(args).exit_code == 0);
  const std::string second = testutil::read_text(out.file("operate_report.json"));
  CHECK(first == second);
  CHECK(first.find("generated_at") == std::string::npos);

  // Without the flag the report carries a timestamp.
  TempDir dated;
  const CliRun r = run_cli(default_args(dated) +
                           " operate --site example_dc --power " + data_dir() +
                           "/power_example.csv");
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(dated.file("operate_report.json"));
  CHECK(doc.contains("generated_at"));
}

TEST_CASE("wsi modes on operate") {
  TempDir out;
  const std::string tail = " operate --site example_dc --power " + data_dir() +
                           "/power_example.csv";

  REQUIRE(run_cli(default_args(out) + tail).exit_code == 0);
  const json plain = load_report(out.file("operate_report.json"));
  CHECK(!plain.contains("scarcity"));

  REQUIRE(run_cli(default_args(out) + " --wsi uniform" + tail).exit_code == 0);
  const json uniform = load_report(out.file("operate_report.json"));
  REQUIRE(uniform.contains("scarcity"));
  // example_dc sits in us_southeast (WSI 0.8): both buckets share the weight.
  CHECK(uniform["scarcity"]["wsi_direct"] == uniform["scarcity"]["wsi_indirect"]);
  CHECK(uniform["scarcity"]["direct_weighted_l"].get<double>() ==
        doctest::Approx(0.8 * plain["direct_l"].get<double>()).epsilon(1e-12));

  REQUIRE(run_cli(default_args(out) + " --wsi split" + tail).exit_code == 0);
  const json split = load_report(out.file("operate_report.json"));
  // The grid supply spans us_southeast (0.8) and us_midwest (1.1) at
  // 0.6/0.4, so the indirect weight differs from the facility's.
  CHECK(split["scarcity"]["wsi_direct"].get<double>() == 0.8);
  CHECK(split["scarcity"]["wsi_indirect"].get<double>() ==
        doctest::Approx(0.6 * 0.8 + 0.4 * 1.1).epsilon(1e-12));
}

TEST_CASE("operate derives power from job logs") {
  TempDir out;
  const CliRun r = run_cli(default_args(out) +
                           " operate --site example_dc --jobs " + data_dir() +
                           "/jobs_example.csv --total-nodes 256 --tdp-kw 0.7 "
                           "--idle-fraction 0.3");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json doc = load_report(out.file("operate_report.json"));
  CHECK(doc["energy_kwh"].get<double>() > 0.0);

  SUBCASE("power and jobs are mutually exclusive") {
    const CliRun both = run_cli(default_args(out) +
                                " operate --site example_dc --power " +
                                data_dir() + "/power_example.csv --jobs " +
                                data_dir() + "/jobs_example.csv "
                                "--total-nodes 256 --tdp-kw 0.7");
    CHECK(both.exit_code == 2);
  }
  SUBCASE("jobs without the power model are rejected") {
    const CliRun r2 = run_cli(default_args(out) +
                              " operate --site example_dc --jobs " +
                              data_dir() + "/jobs_example.csv");
    CHECK(r2.exit_code == 2);
    CHECK(r2.output.find("--total-nodes") != std::string::npos);
  }
}
