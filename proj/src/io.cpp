#include "io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <system_error>

#include "error.hpp"

namespace powertail {

using nlohmann::ordered_json;

const char* const kVersionString = "0.1.0";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Days <-> Gregorian date (days since 1970-01-01).
int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

std::string iso_date(int64_t days_since_epoch) {
  int y;
  unsigned m, d;
  civil_from_days(days_since_epoch, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
  return buf;
}

bool valid_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  const int m = (s[5] - '0') * 10 + (s[6] - '0');
  const int d = (s[8] - '0') * 10 + (s[9] - '0');
  return m >= 1 && m <= 12 && d >= 1 && d <= 31;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& field, std::size_t row, const std::string& col) {
  if (field.empty())
    fail(ErrorCode::data,
         "csv: missing value at row " + std::to_string(row) + ", column " + col);
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    fail(ErrorCode::data, "csv: cannot parse numeric value '" + field + "' at row " +
                              std::to_string(row) + ", column " + col);
  return v;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::data, "cannot create output directory " + dir);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // \n only, platform-independent bytes
  if (!f) fail(ErrorCode::data, "cannot open " + path + " for writing");
  return f;
}

}  // namespace

Panel read_returns_csv(const std::string& path, DataMode mode) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::data, "cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) fail(ErrorCode::data, "csv: " + path + " is empty");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "date")
    fail(ErrorCode::data, "csv: header must be 'date,NAME[,NAME...]'");
  Panel panel;
  panel.names.assign(header.begin() + 1, header.end());
  for (std::size_t i = 0; i < panel.names.size(); ++i) {
    if (panel.names[i].empty()) fail(ErrorCode::data, "csv: empty instrument name in header");
    for (std::size_t j = i + 1; j < panel.names.size(); ++j)
      if (panel.names[i] == panel.names[j])
        fail(ErrorCode::data, "csv: duplicate instrument name " + panel.names[i]);
  }
  panel.series.resize(panel.names.size());

  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      fail(ErrorCode::data, "csv: row " + std::to_string(row) + " has " +
                                std::to_string(cells.size()) + " fields, expected " +
                                std::to_string(header.size()));
    if (!valid_iso_date(cells[0]))
      fail(ErrorCode::data, "csv: row " + std::to_string(row) + ": date '" + cells[0] +
                                "' is not ISO-8601 (YYYY-MM-DD)");
    if (!panel.dates.empty() && cells[0] <= panel.dates.back())
      fail(ErrorCode::data,
           "csv: row " + std::to_string(row) + ": dates must be strictly increasing");
    panel.dates.push_back(cells[0]);
    for (std::size_t c = 0; c < panel.names.size(); ++c)
      panel.series[c].push_back(parse_cell(cells[c + 1], row, panel.names[c]));
  }
  if (panel.dates.size() < 2) fail(ErrorCode::data, "csv: need at least 2 data rows");

  if (mode == DataMode::prices) {
    Panel ret;
    ret.names = panel.names;
    ret.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    ret.series.resize(panel.series.size());
    for (std::size_t c = 0; c < panel.series.size(); ++c) {
      const auto& p = panel.series[c];
      for (double v : p)
        if (!(v > 0.0))
          fail(ErrorCode::data, "csv: non-positive price in column " + panel.names[c] +
                                    " prevents return conversion");
      ret.series[c].resize(p.size() - 1);
      for (std::size_t t = 1; t < p.size(); ++t)
        ret.series[c][t - 1] = 100.0 * (p[t] / p[t - 1] - 1.0);
    }
    return ret;
  }
  return panel;
}

void write_panel_csv(const Panel& panel, const std::string& path) {
  if (panel.names.size() != panel.series.size())
    fail(ErrorCode::invalid, "panel: names/series mismatch");
  for (const auto& s : panel.series)
    if (s.size() != panel.dates.size())
      fail(ErrorCode::invalid, "panel: series length does not match dates");
  std::ofstream f = open_out(path);
  f << "date";
  for (const auto& n : panel.names) f << ',' << n;
  f << '\n';
  for (std::size_t t = 0; t < panel.dates.size(); ++t) {
    f << panel.dates[t];
    for (const auto& s : panel.series) f << ',' << format_double(s[t]);
    f << '\n';
  }
}

Panel panel_from_series(const std::vector<double>& x, const std::string& name) {
  Panel p;
  p.names = {name.empty() ? "SIM" : name};
  p.series = {x};
  const int64_t start = days_from_civil(2000, 1, 1);
  p.dates.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    p.dates[i] = iso_date(start + static_cast<int64_t>(i));
  return p;
}

void write_mc_csv(const McSummary& summary, const std::string& path) {
  std::ofstream f = open_out(path);
  f << "grid,method,frequency,mc_se,n_rep\n";
  for (const auto& r : summary.rows)
    f << format_double(r.grid) << ',' << r.method << ',' << format_double(r.frequency) << ','
      << format_double(r.mc_se) << ',' << r.n_rep << '\n';
}

// ---- presets ---------------------------------------------------------------

namespace {

struct PresetContext {
  std::string preset;
  std::string scale = "desk";
  std::size_t replications = 2000;
  uint64_t seed = 20240801;
  int threads = 0;
  std::size_t T = 5000;
  std::string out_dir = ".";
};

InnovationDist normal_innovation() { return {InnovationKind::standard_normal, 0.0, 0.0}; }
InnovationDist skewt_innovation(double eta, double lambda) {
  return {InnovationKind::skewed_t, eta, lambda};
}

// The three simulation cases: ARCH(1) with tail index 3 under the normal, and
// the same alpha under mildly and strongly heavy skewed-t innovations.
const double kAlphaZeta3 = std::pow(3.14159265358979323846, 1.0 / 3.0) / 2.0;

DgpSpec case_dgp(char label, const PresetContext& ctx) {
  DgpSpec d;
  d.phi = 0.0;
  d.omega = 0.1;
  d.alpha = kAlphaZeta3;
  d.beta = 0.0;
  d.length = ctx.T;
  d.burn_in = 1000;
  d.seed = ctx.seed;
  switch (label) {
    case 'a': d.innovation = normal_innovation(); break;
    case 'b': d.innovation = skewt_innovation(50.0, 0.5); break;
    case 'c': d.innovation = skewt_innovation(3.0, 0.5); break;
    default: fail(ErrorCode::invalid, "unknown case label");
  }
  return d;
}

std::vector<MethodSpec> all_methods() {
  return {{true, 0}, {false, 4}, {false, 8}, {false, 12}, {false, 16}};
}

DependenceSpec signed_corr(double s, int lag = 1) {
  return {Measure::signed_power_crosscorr, s, lag};
}

PresetContext parse_context(const std::string& config_json) {
  ordered_json j;
  try {
    j = ordered_json::parse(config_json.empty() ? "{}" : config_json);
  } catch (const std::exception& e) {
    fail(ErrorCode::invalid, std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::invalid, "config: top level must be an object");
  PresetContext ctx;
  ctx.preset = j.value("preset", std::string());
  ctx.scale = j.value("scale", std::string("desk"));
  if (ctx.scale != "desk" && ctx.scale != "full")
    fail(ErrorCode::invalid, "config: scale must be 'desk' or 'full'");
  ctx.replications = j.value("replications", ctx.scale == "full" ? std::size_t(10000)
                                                                 : std::size_t(2000));
  ctx.seed = j.value("seed", uint64_t(20240801));
  ctx.threads = j.value("threads", 0);
  ctx.T = j.value("T", std::size_t(5000));
  ctx.out_dir = j.value("out_dir", std::string("."));
  return ctx;
}

ordered_json manifest_base(const PresetContext& ctx) {
  ordered_json m;
  m["preset"] = ctx.preset;
  m["scale"] = ctx.scale;
  m["replications"] = ctx.replications;
  m["seed"] = ctx.seed;
  m["threads_configured"] = ctx.threads;
  m["T"] = ctx.T;
  m["version"] = kVersionString;
  return m;
}

void append_notes(ordered_json& m, const McSummary& s, const std::string& prefix) {
  for (const auto& [k, v] : s.notes) m["notes"][prefix.empty() ? k : prefix + "_" + k] = v;
}

void write_manifest(const ordered_json& m, const std::string& path) {
  std::ofstream f = open_out(path);
  f << m.dump(2) << '\n';
}

McConfig base_config(const DgpSpec& dgp, const DependenceSpec& spec,
                     std::vector<MethodSpec> methods, const PresetContext& ctx) {
  McConfig c;
  c.dgp = dgp;
  c.spec = spec;
  c.methods = std::move(methods);
  c.replications = ctx.replications;
  c.nominal_level = 0.05;
  c.threads = ctx.threads;
  return c;
}

void run_table1(const PresetContext& ctx) {
  const std::vector<double> exponents = {1.0, 0.5, 0.25, 0.1};
  std::vector<DependenceSpec> specs;
  for (double s : exponents) specs.push_back(signed_corr(s));
  ordered_json manifest = manifest_base(ctx);
  manifest["cases"] = ordered_json::object();
  manifest["exponents"] = exponents;
  {
    ordered_json methods = ordered_json::array();
    for (const auto& m : all_methods()) methods.push_back(m.id());
    manifest["methods"] = methods;
  }

  // case label -> (exponent, method) -> frequency; drives the wide summary.
  std::map<char, std::map<std::pair<double, std::string>, double>> wide;
  for (char label : {'a', 'b', 'c'}) {
    const DgpSpec dgp = case_dgp(label, ctx);
    McConfig config = base_config(dgp, specs.front(), all_methods(), ctx);
    const McSummary summary = mc_size_multi(config, specs);
    const std::string file =
        ctx.out_dir + "/table1_case_" + std::string(1, label) + ".csv";
    write_mc_csv(summary, file);
    manifest["files"].push_back(file);
    ordered_json cj;
    cj["innovation"] = (label == 'a') ? "normal" : (label == 'b') ? "skewed_t(50,0.5)"
                                                                  : "skewed_t(3,0.5)";
    cj["alpha"] = dgp.alpha;
    cj["omega"] = dgp.omega;
    cj["phi"] = dgp.phi;
    manifest["cases"][std::string(1, label)] = cj;
    for (const auto& row : summary.rows) wide[label][{row.exponent, row.method}] = row.frequency;
  }

  // Wide convenience table: one row per case, method x exponent columns.
  {
    std::ofstream f = open_out(ctx.out_dir + "/table1_summary.csv");
    f << "case";
    for (double s : exponents)
      for (const auto& m : all_methods()) f << ',' << m.id() << "_s" << format_short(s);
    f << '\n';
    for (char label : {'a', 'b', 'c'}) {
      f << label;
      for (double s : exponents)
        for (const auto& m : all_methods())
          f << ',' << format_double(wide[label][{s, m.id()}]);
      f << '\n';
    }
    manifest["files"].push_back(ctx.out_dir + "/table1_summary.csv");
  }
  write_manifest(manifest, ctx.out_dir + "/table1_manifest.json");
}

void run_fig1(const PresetContext& ctx) {
  const std::vector<double> exponents = {1.0, 0.5, 0.25, 0.1};
  const std::vector<double> phi_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  ordered_json manifest = manifest_base(ctx);
  manifest["phi_grid"] = phi_grid;
  for (char label : {'a', 'c'}) {
    for (double s : exponents) {
      McConfig config =
          base_config(case_dgp(label, ctx), signed_corr(s), {{true, 0}, {false, 8}}, ctx);
      const McSummary summary = mc_power_curve(config, phi_grid);
      const std::string file = ctx.out_dir + "/fig1_case_" + std::string(1, label) + "_s" +
                               format_short(s) + ".csv";
      write_mc_csv(summary, file);
      manifest["files"].push_back(file);
      append_notes(manifest, summary,
                   "case_" + std::string(1, label) + "_s" + format_short(s));
    }
  }
  write_manifest(manifest, ctx.out_dir + "/fig1_manifest.json");
}

void run_fig2(const PresetContext& ctx) {
  const std::vector<double> phi_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  ordered_json manifest = manifest_base(ctx);
  manifest["phi_grid"] = phi_grid;
  McConfig config = base_config(case_dgp('a', ctx), signed_corr(1.0), all_methods(), ctx);
  const McSummary summary = mc_power_curve(config, phi_grid);
  const std::string file = ctx.out_dir + "/fig2.csv";
  write_mc_csv(summary, file);
  manifest["files"].push_back(file);
  append_notes(manifest, summary, "");
  write_manifest(manifest, ctx.out_dir + "/fig2_manifest.json");
}

void run_fig3(const PresetContext& ctx) {
  const std::vector<double> powers = {0.1, 0.25, 1.0, 2.0};
  const std::vector<double> alpha_grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  ordered_json manifest = manifest_base(ctx);
  manifest["alpha_grid"] = alpha_grid;
  manifest["powers"] = powers;
  DgpSpec dgp = case_dgp('a', ctx);  // alpha is swept by mc_coverage
  McConfig config =
      base_config(dgp, {Measure::abs_power_autocorr, 1.0, 1}, all_methods(), ctx);
  const McSummary summary = mc_coverage(config, alpha_grid, powers);
  for (double p : powers) {
    McSummary part;
    for (const auto& row : summary.rows)
      if (row.exponent == p) part.rows.push_back(row);
    const std::string file = ctx.out_dir + "/fig3_p" + format_short(p) + ".csv";
    write_mc_csv(part, file);
    manifest["files"].push_back(file);
  }
  append_notes(manifest, summary, "");
  write_manifest(manifest, ctx.out_dir + "/fig3_manifest.json");
}

}  // namespace

void run_mc_preset(const std::string& config_json, const std::string& out_dir) {
  PresetContext ctx = parse_context(config_json);
  if (!out_dir.empty()) ctx.out_dir = out_dir;
  ensure_dir(ctx.out_dir);
  if (ctx.preset == "table1")
    run_table1(ctx);
  else if (ctx.preset == "fig1")
    run_fig1(ctx);
  else if (ctx.preset == "fig2")
    run_fig2(ctx);
  else if (ctx.preset == "fig3")
    run_fig3(ctx);
  else
    fail(ErrorCode::invalid,
         "config: unknown preset '" + ctx.preset +
             "'; available presets: table1, fig1, fig2, fig3 (the empirical pipeline runs "
             "through the empirical command)");
}

// ---- empirical pipeline -----------------------------------------------------

std::string significance_stars(double p_value) {
  // Table legend: *** at the 10% level, ** at 5%, * at 1%.
  if (p_value <= 0.01) return "*";
  if (p_value <= 0.05) return "**";
  if (p_value <= 0.10) return "***";
  return "";
}

EmpiricalConfig empirical_config_from_json(const std::string& config_json) {
  ordered_json j;
  try {
    j = ordered_json::parse(config_json.empty() ? "{}" : config_json);
  } catch (const std::exception& e) {
    fail(ErrorCode::invalid, std::string("config: invalid JSON: ") + e.what());
  }
  EmpiricalConfig c;
  c.tail_fraction = j.value("tail_fraction", c.tail_fraction);
  c.q = j.value("q", c.q);
  c.efficiency_lag = j.value("efficiency_lag", c.efficiency_lag);
  c.clustering_lag = j.value("clustering_lag", c.clustering_lag);
  c.mac_lags = j.value("mac_lags", c.mac_lags);
  c.variance_ratio_weights = j.value("variance_ratio_weights", c.variance_ratio_weights);
  if (j.contains("clustering_powers"))
    c.clustering_powers = j["clustering_powers"].get<std::vector<double>>();
  c.level = j.value("level", c.level);
  return c;
}

namespace {

void validate_empirical_config(const EmpiricalConfig& c) {
  if (!(c.tail_fraction > 0.0 && c.tail_fraction <= 0.5))
    fail(ErrorCode::invalid, "empirical: tail_fraction must lie in (0, 0.5]");
  if (c.q < 2) fail(ErrorCode::invalid, "empirical: q must be >= 2");
  if (c.efficiency_lag < 1 || c.clustering_lag < 1 || c.mac_lags < 1)
    fail(ErrorCode::invalid, "empirical: lags must be >= 1");
  if (!(c.level > 0.0 && c.level < 1.0))
    fail(ErrorCode::invalid, "empirical: level must lie in (0,1)");
  for (double p : c.clustering_powers)
    if (!(p > 0.0)) fail(ErrorCode::invalid, "empirical: clustering powers must be positive");
}

EfficiencyTest efficiency_test(std::span<const double> x, double s, bool selected,
                               const EmpiricalConfig& cfg, double zeta_lo) {
  EfficiencyTest t;
  t.s = s;
  t.selected = selected;
  const DependenceSpec spec{Measure::signed_power_crosscorr, s, cfg.efficiency_lag};
  t.estimate = estimate_dependence(x, spec);
  t.hac = hac_test(x, spec, 0.0, Kernel::quadratic_spectral, 0.0, 1.0 - cfg.level);
  t.group = run_group_test(x, spec, cfg.q, 0.0, cfg.level);
  t.group_valid = 2.0 * (1.0 + s) < zeta_lo;
  t.hac_valid = 4.0 * std::max(1.0, s) < zeta_lo;
  return t;
}

InstrumentReport analyze_instrument(const std::string& name, std::span<const double> x,
                                    const EmpiricalConfig& cfg) {
  InstrumentReport rep;
  rep.name = name;
  rep.length = x.size();
  try {
    rep.tail = rank_size_zeta(x, cfg.tail_fraction);
    rep.selected_power = select_power(rep.tail.ci_lower);
    if (rep.selected_power) {
      rep.selection_note = "selected s = " + format_short(*rep.selected_power);
    } else {
      rep.selection_note =
          "refused: tail CI lower bound " + format_short(rep.tail.ci_lower) +
          " <= 2.2 leaves no admissible signed power";
    }
    rep.efficiency.push_back(efficiency_test(x, 1.0, false, cfg, rep.tail.ci_lower));
    if (rep.selected_power && *rep.selected_power != 1.0)
      rep.efficiency.push_back(
          efficiency_test(x, *rep.selected_power, true, cfg, rep.tail.ci_lower));

    const double mac_s = rep.selected_power ? *rep.selected_power : 1.0;
    std::vector<double> w;
    if (cfg.variance_ratio_weights) {
      w = variance_ratio_weights(cfg.mac_lags);
    } else {
      w.assign(static_cast<std::size_t>(cfg.mac_lags), 1.0 / cfg.mac_lags);
    }
    rep.mac = mac_statistic(x, cfg.mac_lags, w, mac_s);
    rep.mac_group = mac_group_test(x, cfg.mac_lags, w, mac_s, cfg.q, 0.0, cfg.level);

    for (double p : cfg.clustering_powers) {
      ClusteringInterval ci;
      ci.p = p;
      const DependenceSpec spec{Measure::abs_power_autocorr, p, cfg.clustering_lag};
      ci.estimate = estimate_dependence(x, spec);
      ci.hac = hac_test(x, spec, 0.0, Kernel::quadratic_spectral, 0.0, 1.0 - cfg.level);
      ci.group = run_group_test(x, spec, cfg.q, 0.0, cfg.level);
      ci.group_valid = 4.0 * p < rep.tail.ci_lower;
      ci.hac_valid = 8.0 * p < rep.tail.ci_lower;
      rep.clustering.push_back(ci);
    }
    rep.ok = true;
  } catch (const Error& e) {
    rep.ok = false;
    rep.error = e.what();
  }
  return rep;
}

ordered_json group_to_json(const GroupTestResult& g) {
  ordered_json j;
  j["q"] = g.q;
  j["estimates"] = g.estimates;
  j["pooled"] = g.pooled;
  j["s_beta"] = g.s_beta;
  j["t_stat"] = g.t_stat;
  j["p_value"] = g.p_value;
  j["ci_lower"] = g.ci_lower;
  j["ci_upper"] = g.ci_upper;
  j["level"] = g.level;
  j["degenerate"] = g.degenerate;
  j["reject"] = g.reject;
  j["stars"] = significance_stars(g.p_value);
  return j;
}

ordered_json hac_to_json(const HacResult& h) {
  ordered_json j;
  j["estimate"] = h.estimate;
  j["std_err"] = h.std_err;
  j["t_stat"] = h.t_stat;
  j["p_value"] = h.p_value;
  j["ci_lower"] = h.ci_lower;
  j["ci_upper"] = h.ci_upper;
  j["bandwidth"] = h.bandwidth;
  j["lrv_floored"] = h.lrv_floored;
  j["stars"] = significance_stars(h.p_value);
  return j;
}

}  // namespace

EmpiricalReport run_empirical(const Panel& panel, const EmpiricalConfig& config) {
  validate_empirical_config(config);
  EmpiricalReport report;
  report.config = config;
  for (std::size_t i = 0; i < panel.names.size(); ++i)
    report.instruments.push_back(
        analyze_instrument(panel.names[i], panel.series[i], config));
  return report;
}

void write_empirical_outputs(const EmpiricalReport& report, const std::string& out_dir) {
  ensure_dir(out_dir);
  const EmpiricalConfig& cfg = report.config;

  ordered_json j;
  j["version"] = kVersionString;
  j["config"] = {{"tail_fraction", cfg.tail_fraction},
                 {"q", cfg.q},
                 {"efficiency_lag", cfg.efficiency_lag},
                 {"clustering_lag", cfg.clustering_lag},
                 {"mac_lags", cfg.mac_lags},
                 {"variance_ratio_weights", cfg.variance_ratio_weights},
                 {"clustering_powers", cfg.clustering_powers},
                 {"level", cfg.level}};
  j["stars_legend"] = "*** 10%, ** 5%, * 1% (conservative p-values)";
  j["instruments"] = ordered_json::array();
  for (const auto& r : report.instruments) {
    ordered_json ij;
    ij["name"] = r.name;
    ij["T"] = r.length;
    ij["ok"] = r.ok;
    if (!r.ok) {
      ij["error"] = r.error;
      j["instruments"].push_back(ij);
      continue;
    }
    ij["tail"] = {{"zeta", r.tail.zeta},
                  {"ci_lower", r.tail.ci_lower},
                  {"ci_upper", r.tail.ci_upper},
                  {"k", r.tail.k}};
    if (r.selected_power)
      ij["selected_power"] = *r.selected_power;
    else
      ij["selected_power"] = nullptr;
    ij["selection_note"] = r.selection_note;
    ij["efficiency"] = ordered_json::array();
    for (const auto& t : r.efficiency) {
      ordered_json tj;
      tj["s"] = t.s;
      tj["selected"] = t.selected;
      tj["estimate"] = t.estimate;
      tj["hac"] = hac_to_json(t.hac);
      tj["group"] = group_to_json(t.group);
      tj["hac_valid"] = t.hac_valid;
      tj["group_valid"] = t.group_valid;
      ij["efficiency"].push_back(tj);
    }
    ij["mac"] = {{"statistic", r.mac}, {"group", group_to_json(r.mac_group)}};
    ij["clustering"] = ordered_json::array();
    for (const auto& c : r.clustering) {
      ordered_json cj;
      cj["p"] = c.p;
      cj["estimate"] = c.estimate;
      cj["hac"] = hac_to_json(c.hac);
      cj["group"] = group_to_json(c.group);
      cj["hac_valid"] = c.hac_valid;
      cj["group_valid"] = c.group_valid;
      ij["clustering"].push_back(cj);
    }
    j["instruments"].push_back(ij);
  }
  {
    std::ofstream f = open_out(out_dir + "/empirical_report.json");
    f << j.dump(2) << '\n';
  }

  // Efficiency table: one row per instrument and signed power.
  {
    std::ofstream f = open_out(out_dir + "/empirical_efficiency.csv");
    f << "instrument,T,zeta,zeta_ci_lower,zeta_ci_upper,s,selected,estimate,"
         "hac_t,hac_p,hac_stars,hac_valid,group_t,group_p,group_stars,group_valid,"
         "mac,mac_group_t,mac_group_p,mac_group_stars\n";
    for (const auto& r : report.instruments) {
      if (!r.ok) {
        f << r.name << ",,,,,,,,,,,,,,,,,,," << '\n';
        continue;
      }
      for (const auto& t : r.efficiency) {
        f << r.name << ',' << r.length << ',' << format_double(r.tail.zeta) << ','
          << format_double(r.tail.ci_lower) << ',' << format_double(r.tail.ci_upper) << ','
          << format_short(t.s) << ',' << (t.selected ? 1 : 0) << ','
          << format_double(t.estimate) << ',' << format_double(t.hac.t_stat) << ','
          << format_double(t.hac.p_value) << ',' << significance_stars(t.hac.p_value) << ','
          << (t.hac_valid ? 1 : 0) << ',' << format_double(t.group.t_stat) << ','
          << format_double(t.group.p_value) << ',' << significance_stars(t.group.p_value)
          << ',' << (t.group_valid ? 1 : 0) << ',' << format_double(r.mac) << ','
          << format_double(r.mac_group.t_stat) << ',' << format_double(r.mac_group.p_value)
          << ',' << significance_stars(r.mac_group.p_value) << '\n';
      }
    }
  }

  // Clustering table: one row per instrument and absolute power; the star
  // column marks intervals that exclude 0 (a 5%-level statement).
  {
    std::ofstream f = open_out(out_dir + "/empirical_clustering.csv");
    f << "instrument,p,estimate,hac_ci_lower,hac_ci_upper,hac_excludes_zero,hac_valid,"
         "group_ci_lower,group_ci_upper,group_excludes_zero,group_valid\n";
    for (const auto& r : report.instruments) {
      if (!r.ok) continue;
      for (const auto& c : r.clustering) {
        const bool hac_ex = c.hac.ci_lower > 0.0 || c.hac.ci_upper < 0.0;
        const bool grp_ex = c.group.ci_lower > 0.0 || c.group.ci_upper < 0.0;
        f << r.name << ',' << format_short(c.p) << ',' << format_double(c.estimate) << ','
          << format_double(c.hac.ci_lower) << ',' << format_double(c.hac.ci_upper) << ','
          << (hac_ex ? "*" : "") << ',' << (c.hac_valid ? 1 : 0) << ','
          << format_double(c.group.ci_lower) << ',' << format_double(c.group.ci_upper) << ','
          << (grp_ex ? "*" : "") << ',' << (c.group_valid ? 1 : 0) << '\n';
      }
    }
  }
}

}  // namespace powertail
