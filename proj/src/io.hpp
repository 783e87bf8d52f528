#pragma once

#include <optional>
#include <string>
#include <vector>

#include "group.hpp"
#include "hac.hpp"
#include "mc.hpp"
#include "tail.hpp"

// File formats, study presets, and the empirical pipeline.
//
// Returns CSV: header "date,NAME1,NAME2,..."; ISO-8601 dates, strictly
// increasing; every cell a finite real.  mode "prices" converts each column to
// simple percentage returns r_t = 100 (P_t/P_{t-1} - 1).
//
// All floats are emitted with 17 significant digits, so emit -> ingest is an
// exact round trip and reruns are byte-comparable.

namespace powertail {

extern const char* const kVersionString;

enum class DataMode { returns, prices };

struct Panel {
  std::vector<std::string> dates;
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;  // one vector per name
};

Panel read_returns_csv(const std::string& path, DataMode mode);
void write_panel_csv(const Panel& panel, const std::string& path);
// Single simulated series as a one-instrument panel with synthetic dates.
Panel panel_from_series(const std::vector<double>& x, const std::string& name);

std::string format_double(double v);  // %.17g

// ---- Monte Carlo presets -------------------------------------------------

// config_json keys (all optional except preset): preset, scale ("desk"|"full"),
// replications, seed, threads, T, out_dir.  Flags parsed by the CLI are merged
// into the same JSON before reaching here.
void run_mc_preset(const std::string& config_json, const std::string& out_dir);

void write_mc_csv(const McSummary& summary, const std::string& path);

// ---- Empirical pipeline ---------------------------------------------------

struct EmpiricalConfig {
  double tail_fraction = 0.05;
  int q = 8;
  int efficiency_lag = 1;   // h for the signed-power tests
  int clustering_lag = 5;   // h for the absolute-power CIs
  int mac_lags = 5;         // H
  bool variance_ratio_weights = false;  // default equal weights 1/H
  std::vector<double> clustering_powers = {0.1, 0.5, 1.0, 2.0};
  double level = 0.05;      // test size; intervals use 1 - level
};

struct EfficiencyTest {
  double s = 0.0;             // signed power used
  bool selected = false;      // true when s came from the tail rule
  double estimate = 0.0;      // rho'(h)
  HacResult hac;
  GroupTestResult group;
  bool hac_valid = false;     // moment condition 4*max(1,s) < zeta_lo
  bool group_valid = false;   // moment condition 2(1+s) < zeta_lo
};

struct ClusteringInterval {
  double p = 0.0;  // absolute power
  double estimate = 0.0;
  HacResult hac;
  GroupTestResult group;
  bool hac_valid = false;    // 8p < zeta_lo
  bool group_valid = false;  // 4p < zeta_lo
};

struct InstrumentReport {
  std::string name;
  std::size_t length = 0;
  bool ok = false;
  std::string error;  // set when ok == false (other instruments proceed)
  TailEstimate tail;
  std::optional<double> selected_power;  // nullopt = rule refused
  std::string selection_note;
  std::vector<EfficiencyTest> efficiency;  // s = 1 plus the selected s
  double mac = 0.0;                        // weighted MAC statistic
  GroupTestResult mac_group;
  std::vector<ClusteringInterval> clustering;
};

struct EmpiricalReport {
  EmpiricalConfig config;
  std::vector<InstrumentReport> instruments;
};

EmpiricalReport run_empirical(const Panel& panel, const EmpiricalConfig& config);
// Emits empirical_report.json, empirical_efficiency.csv, empirical_clustering.csv.
void write_empirical_outputs(const EmpiricalReport& report, const std::string& out_dir);

// Significance stars from a p-value; the legend is *** at 10%, ** at 5%,
// * at 1% (the footnote convention of the tables this mirrors).
std::string significance_stars(double p_value);

EmpiricalConfig empirical_config_from_json(const std::string& config_json);

}  // namespace powertail
