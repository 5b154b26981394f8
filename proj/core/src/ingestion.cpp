#include "thirsty/ingestion.hpp"

#include "thirsty/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>

namespace thirsty {

namespace {

namespace fs = std::filesystem;
using njson = nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw IoError("failed reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out)
    throw IoError("failed writing '" + path + "'");
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == text.size()) break;
    pos = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

std::string at_line(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

double parse_double_field(const std::string& field, const std::string& ctx) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  auto [end, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || end != last)
    throw ValidationError(ctx + ": '" + field + "' is not a number");
  return v;
}

std::int64_t parse_int_field(const std::string& field, const std::string& ctx) {
  std::int64_t v = 0;
  const char* first = field.data();
  const char* last = first + field.size();
  auto [end, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || end != last)
    throw ValidationError(ctx + ": '" + field + "' is not an integer");
  return v;
}

UnixSeconds parse_utc_field(const std::string& field, const std::string& ctx) {
  try {
    return parse_utc(field);
  } catch (const ValidationError& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
}

struct CsvRow {
  std::size_t line_no = 0;
  std::vector<std::string> fields;
};

struct CsvTable {
  std::optional<std::int64_t> declared_step;
  std::vector<CsvRow> rows;
};

constexpr const char* step_comment_prefix = "# step_seconds:";

/// Leading '#' comment lines (one may declare the step), an exact header,
/// then uniform-width rows.
CsvTable read_csv(const std::string& path, const std::string& expected_header,
                  std::size_t n_fields) {
  const auto lines = split_lines(read_file(path));
  CsvTable table;
  std::size_t i = 0;
  for (; i < lines.size() && !lines[i].empty() && lines[i][0] == '#'; ++i) {
    const std::string& line = lines[i];
    if (line.rfind(step_comment_prefix, 0) == 0) {
      const std::string value = line.substr(std::string(step_comment_prefix).size());
      std::size_t start = value.find_first_not_of(' ');
      if (start == std::string::npos)
        throw ValidationError(at_line(path, i + 1) + ": empty step declaration");
      const std::int64_t step =
          parse_int_field(value.substr(start), at_line(path, i + 1));
      if (step <= 0)
        throw ValidationError(at_line(path, i + 1) +
                              ": step_seconds must be > 0");
      table.declared_step = step;
    }
  }
  if (i >= lines.size())
    throw ValidationError(path + ": missing header line '" + expected_header + "'");
  if (lines[i] != expected_header)
    throw ValidationError(at_line(path, i + 1) + ": expected header '" +
                          expected_header + "', got '" + lines[i] + "'");
  for (++i; i < lines.size(); ++i) {
    if (lines[i].empty())
      throw ValidationError(at_line(path, i + 1) + ": empty row");
    CsvRow row{i + 1, split_csv(lines[i])};
    if (row.fields.size() != n_fields)
      throw ValidationError(at_line(path, i + 1) + ": expected " +
                            std::to_string(n_fields) + " fields, got " +
                            std::to_string(row.fields.size()));
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty())
    throw ValidationError(path + ": no data rows");
  return table;
}

/// Declared step wins; otherwise the smallest gap between consecutive rows.
/// The lattice-congruence check in the series validation rejects files whose
/// other gaps are not multiples of it.
std::int64_t resolve_step(const CsvTable& table,
                          const std::vector<UnixSeconds>& timestamps,
                          const std::string& path) {
  if (table.declared_step) return *table.declared_step;
  std::int64_t best = 0;
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    const std::int64_t gap = timestamps[i] - timestamps[i - 1];
    if (gap > 0 && (best == 0 || gap < best)) best = gap;
  }
  if (best == 0)
    throw ValidationError(path + ": cannot infer the step from a single row; "
                          "declare '# step_seconds: N' before the header");
  return best;
}

template <class Series>
void validate_loaded(const Series& series, const std::string& path) {
  try {
    validate(series);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

} // namespace

void validate(const JobRecord& job) {
  if (job.job_id.empty())
    throw ValidationError("job with empty job_id");
  if (job.end <= job.start)
    throw ValidationError("job '" + job.job_id + "': end must be after start");
  if (job.nodes_used < 1)
    throw ValidationError("job '" + job.job_id + "': nodes_used must be >= 1");
}

void validate(const NodePowerModel& model) {
  if (!std::isfinite(model.tdp_per_node_kw) || model.tdp_per_node_kw <= 0.0)
    throw ValidationError("tdp_per_node_kw must be > 0");
  if (!std::isfinite(model.idle_fraction) || model.idle_fraction < 0.0 ||
      model.idle_fraction > 1.0)
    throw ValidationError("idle_fraction outside [0, 1]");
}

void validate(const SiteProfile& site) {
  if (site.name.empty())
    throw ValidationError("site with empty name");
  if (!std::isfinite(site.pue) || site.pue < 1.0)
    throw ValidationError("site '" + site.name + "': pue " +
                          std::to_string(site.pue) + " must be >= 1");
  if (site.grid_supply.empty()) return;
  double sum = 0.0;
  for (const auto& [region, share] : site.grid_supply) {
    if (region.empty())
      throw ValidationError("site '" + site.name +
                            "': grid_supply entry with empty region");
    if (!std::isfinite(share) || share < 0.0 || share > 1.0)
      throw ValidationError("site '" + site.name + "': grid_supply share for '" +
                            region + "' outside [0, 1]");
    sum += share;
  }
  if (std::fabs(sum - 1.0) > mix_share_tolerance)
    throw ValidationError("site '" + site.name + "': grid_supply shares sum to " +
                          std::to_string(sum) + ", expected 1 within 1e-6");
}

WeatherSeries load_weather_csv(const std::string& path) {
  const CsvTable table =
      read_csv(path, "timestamp,air_temp_c,rel_humidity_pct", 3);
  WeatherSeries series;
  std::vector<UnixSeconds> ts;
  for (const auto& row : table.rows) {
    const std::string ctx = at_line(path, row.line_no);
    WeatherSample s;
    s.timestamp = parse_utc_field(row.fields[0], ctx);
    s.air_temp_c = parse_double_field(row.fields[1], ctx);
    s.rel_humidity_pct = parse_double_field(row.fields[2], ctx);
    series.samples.push_back(s);
    ts.push_back(s.timestamp);
  }
  series.step_s = resolve_step(table, ts, path);
  validate_loaded(series, path);
  return series;
}

EnergyMixSeries load_energy_mix_csv(const std::string& path) {
  const CsvTable table = read_csv(path, "timestamp,source,share", 3);
  EnergyMixSeries series;
  for (const auto& row : table.rows) {
    const std::string ctx = at_line(path, row.line_no);
    const UnixSeconds t = parse_utc_field(row.fields[0], ctx);
    const std::string& source = row.fields[1];
    if (source.empty())
      throw ValidationError(ctx + ": empty source name");
    const double share = parse_double_field(row.fields[2], ctx);
    if (series.samples.empty() || t > series.samples.back().timestamp) {
      series.samples.push_back(EnergyMixSample{t, {}});
    } else if (t < series.samples.back().timestamp) {
      throw ValidationError(ctx + ": rows must be grouped by timestamp in "
                            "increasing order");
    }
    auto& shares = series.samples.back().shares;
    if (!shares.emplace(source, share).second)
      throw ValidationError(ctx + ": duplicate source '" + source +
                            "' for this timestamp");
  }
  std::vector<UnixSeconds> ts;
  for (const auto& s : series.samples) ts.push_back(s.timestamp);
  series.step_s = resolve_step(table, ts, path);
  validate_loaded(series, path);
  return series;
}

PowerTrace load_power_csv(const std::string& path) {
  const CsvTable table = read_csv(path, "timestamp,power_kw", 2);
  PowerTrace trace;
  std::vector<UnixSeconds> ts;
  for (const auto& row : table.rows) {
    const std::string ctx = at_line(path, row.line_no);
    PowerSample s;
    s.timestamp = parse_utc_field(row.fields[0], ctx);
    s.power_kw = parse_double_field(row.fields[1], ctx);
    trace.samples.push_back(s);
    ts.push_back(s.timestamp);
  }
  trace.step_s = resolve_step(table, ts, path);
  validate_loaded(trace, path);
  return trace;
}

std::vector<JobRecord> load_jobs_csv(const std::string& path) {
  const CsvTable table = read_csv(path, "job_id,start,end,nodes", 4);
  std::vector<JobRecord> jobs;
  for (const auto& row : table.rows) {
    const std::string ctx = at_line(path, row.line_no);
    JobRecord job;
    job.job_id = row.fields[0];
    job.start = parse_utc_field(row.fields[1], ctx);
    job.end = parse_utc_field(row.fields[2], ctx);
    job.nodes_used = parse_int_field(row.fields[3], ctx);
    try {
      validate(job);
    } catch (const ValidationError& e) {
      throw ValidationError(ctx + ": " + e.what());
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

std::vector<ScarcityIndex> load_wsi_csv(const std::string& path) {
  const CsvTable table = read_csv(path, "region,wsi", 2);
  std::vector<ScarcityIndex> indices;
  for (const auto& row : table.rows) {
    const std::string ctx = at_line(path, row.line_no);
    ScarcityIndex idx;
    idx.region = row.fields[0];
    if (idx.region.empty())
      throw ValidationError(ctx + ": empty region name");
    for (const auto& existing : indices)
      if (existing.region == idx.region)
        throw ValidationError(ctx + ": duplicate region '" + idx.region + "'");
    idx.wsi = parse_double_field(row.fields[1], ctx);
    try {
      validate(idx);
    } catch (const ValidationError& e) {
      throw ValidationError(ctx + ": " + e.what());
    }
    indices.push_back(std::move(idx));
  }
  return indices;
}

std::vector<UnixSeconds> load_candidates_csv(const std::string& path) {
  const CsvTable table = read_csv(path, "start", 1);
  std::vector<UnixSeconds> starts;
  for (const auto& row : table.rows)
    starts.push_back(parse_utc_field(row.fields[0], at_line(path, row.line_no)));
  return starts;
}

AnySeries load_series(const std::string& path, SeriesKind kind) {
  switch (kind) {
    case SeriesKind::energy_mix: return load_energy_mix_csv(path);
    case SeriesKind::weather: return load_weather_csv(path);
    case SeriesKind::power: return load_power_csv(path);
  }
  throw ValidationError("unknown series kind");
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{})
    throw ValidationError("cannot format number");
  return std::string(buf, end);
}

namespace {

std::string step_header(std::int64_t step_s) {
  return std::string(step_comment_prefix) + " " + std::to_string(step_s) + "\n";
}

} // namespace

void write_weather_csv(const std::string& path, const WeatherSeries& series) {
  validate(series);
  std::string out = step_header(series.step_s);
  out += "timestamp,air_temp_c,rel_humidity_pct\n";
  for (const auto& s : series.samples)
    out += format_utc(s.timestamp) + "," + format_double(s.air_temp_c) + "," +
           format_double(s.rel_humidity_pct) + "\n";
  write_file(path, out);
}

void write_energy_mix_csv(const std::string& path, const EnergyMixSeries& series) {
  validate(series);
  std::string out = step_header(series.step_s);
  out += "timestamp,source,share\n";
  for (const auto& s : series.samples)
    for (const auto& [source, share] : s.shares)
      out += format_utc(s.timestamp) + "," + source + "," +
             format_double(share) + "\n";
  write_file(path, out);
}

void write_power_csv(const std::string& path, const PowerTrace& trace) {
  validate(trace);
  std::string out = step_header(trace.step_s);
  out += "timestamp,power_kw\n";
  for (const auto& s : trace.samples)
    out += format_utc(s.timestamp) + "," + format_double(s.power_kw) + "\n";
  write_file(path, out);
}

void write_intensity_csv(const std::string& path, const IntensitySeries& series) {
  validate(series);
  std::string out = step_header(series.step_s);
  out += "timestamp,wue_l_per_kwh,ewf_l_per_kwh,pue,wi_direct_l_per_kwh,"
         "wi_indirect_l_per_kwh,wi_l_per_kwh,ci_g_per_kwh\n";
  for (const auto& s : series.samples)
    out += format_utc(s.timestamp) + "," + format_double(s.wue) + "," +
           format_double(s.ewf) + "," + format_double(s.pue) + "," +
           format_double(s.wi_direct) + "," + format_double(s.wi_indirect) +
           "," + format_double(s.wi) + "," + format_double(s.ci) + "\n";
  write_file(path, out);
}

void write_operational_csv(const std::string& path,
                           const OperationalResult& result) {
  std::string out = step_header(result.step_s);
  out += "timestamp,energy_kwh,direct_l,indirect_l,carbon_g\n";
  for (const auto& s : result.series)
    out += format_utc(s.timestamp) + "," + format_double(s.energy_kwh) + "," +
           format_double(s.direct_l) + "," + format_double(s.indirect_l) + "," +
           format_double(s.carbon_g) + "\n";
  write_file(path, out);
}

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) {
  throw ValidationError(ctx + ": " + msg);
}

const njson& expect_object(const njson& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  return j;
}

const njson& expect_array(const njson& j, const std::string& ctx) {
  if (!j.is_array()) fail(ctx, "expected an array");
  return j;
}

void check_keys(const njson& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) fail(ctx, "unknown key '" + key + "'");
  }
}

double num_field(const njson& obj, const std::string& ctx, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ctx, std::string("missing required number '") + key + "'");
  if (!it->is_number()) fail(ctx, std::string("'") + key + "' must be a number");
  return it->get<double>();
}

double num_field_or(const njson& obj, const std::string& ctx, const char* key,
                    double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail(ctx, std::string("'") + key + "' must be a number");
  return it->get<double>();
}

std::int64_t int_field_or(const njson& obj, const std::string& ctx,
                          const char* key, std::int64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer())
    fail(ctx, std::string("'") + key + "' must be an integer");
  return it->get<std::int64_t>();
}

std::string str_field(const njson& obj, const std::string& ctx, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ctx, std::string("missing required string '") + key + "'");
  if (!it->is_string()) fail(ctx, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

std::string str_field_or(const njson& obj, const std::string& ctx,
                         const char* key, const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) fail(ctx, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

njson parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return njson::parse(text);
  } catch (const njson::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

template <class Fn>
void rethrow_with_path(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw ValidationError(path + ": " + what);
  }
}

} // namespace

ParameterDb load_parameter_db(const std::string& path) {
  const njson root = parse_json_file(path);
  expect_object(root, path);
  check_keys(root, path,
             {"meta", "process_params", "source_factors", "wsi", "wue_curves",
              "withdrawal", "sites", "scenarios"});

  ParameterDb db;
  db.path = fs::absolute(path).string();

  if (auto meta = root.find("meta"); meta != root.end()) {
    const std::string ctx = path + ": meta";
    expect_object(*meta, ctx);
    check_keys(*meta, ctx, {"area_basis", "version", "description"});
    db.area_basis = str_field_or(*meta, ctx, "area_basis", area_basis_l_per_cm2);
    if (db.area_basis != area_basis_l_per_cm2)
      fail(ctx, "unsupported area basis '" + db.area_basis +
               "'; rescale the area factors to " + area_basis_l_per_cm2);
  }

  if (auto section = root.find("process_params"); section != root.end()) {
    const std::string sctx = path + ": process_params";
    expect_array(*section, sctx);
    for (std::size_t i = 0; i < section->size(); ++i) {
      const std::string ctx = sctx + "[" + std::to_string(i) + "]";
      const njson& e = expect_object((*section)[i], ctx);
      check_keys(e, ctx,
                 {"node_nm", "site", "w_ic_l", "upw_l_per_cm2", "pcw_l_per_cm2",
                  "wpa_l_per_cm2", "wpc_dram_l_per_gb", "wpc_ssd_l_per_gb",
                  "wpc_hdd_l_per_gb"});
      ProcessParams p;
      p.node_nm = num_field(e, ctx, "node_nm");
      p.site = str_field(e, ctx, "site");
      p.w_ic_l = num_field(e, ctx, "w_ic_l");
      p.upw_l_per_cm2 = num_field(e, ctx, "upw_l_per_cm2");
      p.pcw_l_per_cm2 = num_field(e, ctx, "pcw_l_per_cm2");
      p.wpa_l_per_cm2 = num_field(e, ctx, "wpa_l_per_cm2");
      p.wpc_dram_l_per_gb = num_field(e, ctx, "wpc_dram_l_per_gb");
      p.wpc_ssd_l_per_gb = num_field(e, ctx, "wpc_ssd_l_per_gb");
      p.wpc_hdd_l_per_gb = num_field(e, ctx, "wpc_hdd_l_per_gb");
      rethrow_with_path(ctx, [&] { validate(p); });
      for (const auto& existing : db.process_params)
        if (existing.node_nm == p.node_nm && existing.site == p.site)
          fail(ctx, "duplicate entry for node " + format_double(p.node_nm) +
                   " nm at site '" + p.site + "'");
      db.process_params.push_back(std::move(p));
    }
  }

  if (auto section = root.find("source_factors"); section != root.end()) {
    const std::string sctx = path + ": source_factors";
    expect_object(*section, sctx);
    for (const auto& [name, e] : section->items()) {
      const std::string ctx = sctx + "." + name;
      expect_object(e, ctx);
      check_keys(e, ctx, {"ewf_l_per_kwh", "ci_g_per_kwh", "cooling"});
      SourceFactors f;
      f.source = name;
      f.ewf_l_per_kwh = num_field(e, ctx, "ewf_l_per_kwh");
      f.ci_g_per_kwh = num_field(e, ctx, "ci_g_per_kwh");
      f.cooling = str_field_or(e, ctx, "cooling", "");
      rethrow_with_path(ctx, [&] { validate(f); });
      db.source_factors.emplace(name, std::move(f));
    }
  }

  if (auto section = root.find("wsi"); section != root.end()) {
    const std::string sctx = path + ": wsi";
    expect_object(*section, sctx);
    for (const auto& [region, value] : section->items()) {
      const std::string ctx = sctx + "." + region;
      if (!value.is_number()) fail(ctx, "WSI must be a number");
      ScarcityIndex idx{region, value.get<double>()};
      rethrow_with_path(ctx, [&] { validate(idx); });
      db.wsi.emplace(region, std::move(idx));
    }
  }

  if (auto section = root.find("wue_curves"); section != root.end()) {
    const std::string sctx = path + ": wue_curves";
    expect_object(*section, sctx);
    for (const auto& [name, e] : section->items()) {
      const std::string ctx = sctx + "." + name;
      expect_object(e, ctx);
      check_keys(e, ctx, {"knots"});
      WueCurve curve;
      curve.name = name;
      auto knots = e.find("knots");
      if (knots == e.end()) fail(ctx, "missing 'knots'");
      expect_array(*knots, ctx + ".knots");
      for (const auto& knot : *knots) {
        if (!knot.is_array() || knot.size() != 2 || !knot[0].is_number() ||
            !knot[1].is_number())
          fail(ctx, "each knot must be [wet_bulb_c, wue_l_per_kwh]");
        curve.knots.emplace_back(knot[0].get<double>(), knot[1].get<double>());
      }
      rethrow_with_path(ctx, [&] { validate(curve); });
      db.wue_curves.emplace(name, std::move(curve));
    }
  }

  if (auto section = root.find("withdrawal"); section != root.end()) {
    const std::string ctx = path + ": withdrawal";
    expect_object(*section, ctx);
    check_keys(*section, ctx,
               {"discharge_actual_l", "outfall_factor", "pollutant_factor",
                "reuse_rate", "beta_potable", "beta_nonpotable",
                "scarcity_potable", "scarcity_nonpotable"});
    WithdrawalParams w;
    const double discharge = num_field_or(*section, ctx, "discharge_actual_l", 0.0);
    rethrow_with_path(ctx, [&] {
      w.discharge_actual = WaterVolume::from_liters(discharge);
    });
    w.outfall_factor = num_field_or(*section, ctx, "outfall_factor", 1.0);
    w.pollutant_factor = num_field_or(*section, ctx, "pollutant_factor", 1.0);
    w.reuse_rate = num_field_or(*section, ctx, "reuse_rate", 0.0);
    w.beta_potable = num_field_or(*section, ctx, "beta_potable", 1.0);
    w.beta_nonpotable = num_field_or(*section, ctx, "beta_nonpotable", 0.0);
    w.scarcity_potable = num_field_or(*section, ctx, "scarcity_potable", 1.0);
    w.scarcity_nonpotable = num_field_or(*section, ctx, "scarcity_nonpotable", 1.0);
    rethrow_with_path(ctx, [&] { validate(w); });
    db.withdrawal = w;
  }

  if (auto section = root.find("sites"); section != root.end()) {
    const std::string sctx = path + ": sites";
    expect_object(*section, sctx);
    for (const auto& [name, e] : section->items()) {
      const std::string ctx = sctx + "." + name;
      expect_object(e, ctx);
      check_keys(e, ctx,
                 {"pue", "wue_curve", "region", "grid_supply", "weather", "mix"});
      SiteProfile site;
      site.name = name;
      site.pue = num_field(e, ctx, "pue");
      site.wue_curve = str_field_or(e, ctx, "wue_curve", "default");
      site.region = str_field_or(e, ctx, "region", "");
      site.weather_ref = str_field_or(e, ctx, "weather", "");
      site.mix_ref = str_field_or(e, ctx, "mix", "");
      if (auto supply = e.find("grid_supply"); supply != e.end()) {
        expect_array(*supply, ctx + ".grid_supply");
        for (const auto& entry : *supply) {
          const std::string ectx = ctx + ".grid_supply";
          expect_object(entry, ectx);
          check_keys(entry, ectx, {"region", "share"});
          site.grid_supply.emplace_back(str_field(entry, ectx, "region"),
                                        num_field(entry, ectx, "share"));
        }
      }
      rethrow_with_path(ctx, [&] { validate(site); });
      db.sites.emplace(name, std::move(site));
    }
  }

  return db;
}

const SiteProfile& site_profile(const ParameterDb& db, const std::string& name) {
  auto it = db.sites.find(name);
  if (it == db.sites.end())
    throw ResolutionError("unknown site '" + name + "' in parameter DB " + db.path);
  return it->second;
}

const WueCurve& curve_for_site(const ParameterDb& db, const SiteProfile& site) {
  auto it = db.wue_curves.find(site.wue_curve);
  if (it == db.wue_curves.end())
    throw ResolutionError("site '" + site.name + "' references WUE curve '" +
                          site.wue_curve + "', which the parameter DB lacks");
  return it->second;
}

ScarcityIndex wsi_for_region(const ParameterDb& db, const std::string& region) {
  auto it = db.wsi.find(region);
  if (it == db.wsi.end())
    throw ResolutionError("no WSI entry for region '" + region + "'");
  return it->second;
}

ScarcityIndex direct_wsi_for_site(const ParameterDb& db, const SiteProfile& site) {
  if (site.region.empty())
    throw ResolutionError("site '" + site.name +
                          "' declares no region; cannot apply scarcity weighting");
  return wsi_for_region(db, site.region);
}

ScarcityIndex indirect_wsi_for_site(const ParameterDb& db,
                                    const SiteProfile& site) {
  std::vector<GridSupplyShare> supplies;
  if (site.grid_supply.empty()) {
    supplies.push_back(GridSupplyShare{site.region, 1.0,
                                       direct_wsi_for_site(db, site)});
  } else {
    for (const auto& [region, share] : site.grid_supply)
      supplies.push_back(GridSupplyShare{region, share, wsi_for_region(db, region)});
  }
  return ScarcityIndex{site.name + " grid supply",
                       effective_indirect_wsi(supplies)};
}

void check_cross_references(const ParameterDb& db) {
  for (const auto& [name, site] : db.sites) {
    (void)name;
    curve_for_site(db, site);
    if (!site.region.empty()) wsi_for_region(db, site.region);
    for (const auto& [region, share] : site.grid_supply) {
      (void)share;
      wsi_for_region(db, region);
    }
  }
}

HardwareInventory load_inventory(const std::string& path, const ParameterDb& db) {
  const njson root = parse_json_file(path);
  expect_object(root, path);
  check_keys(root, path, {"system_name", "devices"});
  HardwareInventory inv;
  inv.system_name = str_field(root, path, "system_name");
  inv.params = db.process_params;
  auto devices = root.find("devices");
  if (devices == root.end()) fail(path, "missing 'devices'");
  expect_array(*devices, path + ": devices");
  for (std::size_t i = 0; i < devices->size(); ++i) {
    const std::string ctx = path + ": devices[" + std::to_string(i) + "]";
    const njson& e = expect_object((*devices)[i], ctx);
    check_keys(e, ctx,
               {"kind", "name", "count", "n_ic", "die_area_mm2",
                "process_node_nm", "capacity_gb", "yield_rate", "fab_site",
                "transport_disposal_l"});
    DeviceSpec spec;
    rethrow_with_path(ctx, [&] {
      spec.kind = device_kind_from_string(str_field(e, ctx, "kind"));
    });
    spec.name = str_field_or(e, ctx, "name", "");
    spec.count = int_field_or(e, ctx, "count", 1);
    spec.n_ic = int_field_or(e, ctx, "n_ic", 1);
    spec.die_area_mm2 = num_field_or(e, ctx, "die_area_mm2", 0.0);
    spec.process_node_nm = num_field_or(e, ctx, "process_node_nm", 0.0);
    spec.capacity_gb = num_field_or(e, ctx, "capacity_gb", 0.0);
    spec.yield_rate = num_field_or(e, ctx, "yield_rate", 0.875);
    spec.fab_site = str_field(e, ctx, "fab_site");
    spec.transport_disposal_l = num_field_or(e, ctx, "transport_disposal_l", 0.0);
    rethrow_with_path(ctx, [&] { validate(spec, i); });
    inv.devices.push_back(std::move(spec));
  }
  return inv;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
  const njson root = parse_json_file(path);
  expect_object(root, path);
  auto section = root.find("scenarios");
  if (section == root.end())
    fail(path, "missing 'scenarios' section");
  expect_array(*section, path + ": scenarios");
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < section->size(); ++i) {
    const std::string ctx = path + ": scenarios[" + std::to_string(i) + "]";
    const njson& e = expect_object((*section)[i], ctx);
    check_keys(e, ctx, {"name", "mix"});
    Scenario s;
    s.name = str_field(e, ctx, "name");
    auto mix = e.find("mix");
    if (mix == e.end()) fail(ctx, "missing 'mix' ('unchanged' or a shares map)");
    if (mix->is_string()) {
      if (mix->get<std::string>() != "unchanged")
        fail(ctx, "mix must be 'unchanged' or a shares map");
    } else if (mix->is_object()) {
      std::map<std::string, double> shares;
      for (const auto& [source, share] : mix->items()) {
        if (!share.is_number()) fail(ctx, "share for '" + source + "' must be a number");
        shares.emplace(source, share.get<double>());
      }
      s.mix_override = std::move(shares);
    } else {
      fail(ctx, "mix must be 'unchanged' or a shares map");
    }
    rethrow_with_path(ctx, [&] { validate(s); });
    out.push_back(std::move(s));
  }
  if (out.empty()) fail(path, "no scenarios defined");
  return out;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && (a < 0) != (b < 0)) --q;
  return q;
}

} // namespace

PowerTrace utilization_to_power(const std::vector<JobRecord>& jobs,
                                std::int64_t total_nodes,
                                const NodePowerModel& model, std::int64_t step_s,
                                UnixSeconds window_start, UnixSeconds window_end) {
  if (step_s <= 0)
    throw ValidationError("step must be a positive number of seconds");
  if (total_nodes < 1)
    throw ValidationError("total_nodes must be >= 1");
  validate(model);
  if (window_end <= window_start)
    throw ValidationError("power window is empty");
  if (window_start % step_s != 0 || window_end % step_s != 0)
    throw ValidationError("power window must be aligned to the step lattice");
  for (const auto& job : jobs) {
    validate(job);
    if (job.nodes_used > total_nodes)
      throw ValidationError("job '" + job.job_id + "' uses " +
                            std::to_string(job.nodes_used) + " nodes of " +
                            std::to_string(total_nodes));
  }

  const std::size_t n = static_cast<std::size_t>((window_end - window_start) / step_s);
  std::vector<double> busy(n, 0.0);
  for (const auto& job : jobs) {
    const UnixSeconds cs = std::max(job.start, window_start);
    const UnixSeconds ce = std::min(job.end, window_end);
    if (ce <= cs) continue;
    const auto k0 = static_cast<std::size_t>((cs - window_start) / step_s);
    const auto k1 = static_cast<std::size_t>((ce - 1 - window_start) / step_s);
    for (std::size_t k = k0; k <= k1; ++k) {
      const UnixSeconds lo = window_start + static_cast<UnixSeconds>(k) * step_s;
      const UnixSeconds hi = lo + step_s;
      const auto overlap = static_cast<double>(std::min(ce, hi) - std::max(cs, lo));
      busy[k] += static_cast<double>(job.nodes_used) * overlap /
                 static_cast<double>(step_s);
    }
  }

  PowerTrace trace;
  trace.step_s = step_s;
  trace.samples.reserve(n);
  const auto total = static_cast<double>(total_nodes);
  for (std::size_t k = 0; k < n; ++k) {
    if (busy[k] > total * (1.0 + 1e-9))
      throw ValidationError("node occupancy " + format_double(busy[k]) +
                            " exceeds total_nodes at " +
                            format_utc(window_start +
                                       static_cast<UnixSeconds>(k) * step_s));
    const double b = std::min(busy[k], total);
    const double power = b * model.tdp_per_node_kw +
                         (total - b) * model.idle_fraction * model.tdp_per_node_kw;
    trace.samples.push_back(PowerSample{
        window_start + static_cast<UnixSeconds>(k) * step_s, power});
  }
  return trace;
}

PowerTrace utilization_to_power(const std::vector<JobRecord>& jobs,
                                std::int64_t total_nodes,
                                const NodePowerModel& model, std::int64_t step_s) {
  if (jobs.empty())
    throw ValidationError("cannot derive a power window from an empty job list; "
                          "give the window explicitly");
  if (step_s <= 0)
    throw ValidationError("step must be a positive number of seconds");
  UnixSeconds lo = jobs.front().start;
  UnixSeconds hi = jobs.front().end;
  for (const auto& job : jobs) {
    lo = std::min(lo, job.start);
    hi = std::max(hi, job.end);
  }
  const UnixSeconds window_start = floor_div(lo, step_s) * step_s;
  const UnixSeconds window_end = -floor_div(-hi, step_s) * step_s;
  return utilization_to_power(jobs, total_nodes, model, step_s, window_start,
                              window_end);
}

} // namespace thirsty
