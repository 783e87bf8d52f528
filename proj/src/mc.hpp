#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dgp.hpp"
#include "group.hpp"
#include "hac.hpp"
#include "series.hpp"

// Monte Carlo harness.  Replication r always simulates with RNG stream r, and
// per-replication results land in preallocated slots reduced in index order,
// so output is byte-identical for any worker count.

namespace powertail {

struct MethodSpec {
  bool is_hac = false;
  int q = 0;  // group count when !is_hac
  std::string id() const;
};

struct McConfig {
  DgpSpec dgp;  // dgp.length is T; dgp.seed is the base seed
  DependenceSpec spec;
  std::vector<MethodSpec> methods;
  std::size_t replications = 2000;
  double nominal_level = 0.05;
  int threads = 1;  // <= 0 picks hardware concurrency

  void validate() const;
};

struct McRow {
  double grid = 0.0;       // swept parameter value (s, phi, or alpha)
  std::string method;      // "hac_qs", "t_q4", ...
  double frequency = 0.0;  // rejection or coverage frequency
  double mc_se = 0.0;      // sqrt(f(1-f)/n)
  std::size_t n_rep = 0;
  double exponent = 0.0;   // measure power/exponent the row belongs to
};

struct McSummary {
  std::vector<McRow> rows;
  // Extra reproducibility notes for the manifest (size-adjusted critical
  // values, pilot truths), as label -> value.
  std::vector<std::pair<std::string, double>> notes;
};

// Runs body(0..n-1) on the requested number of workers; rethrows the first
// worker exception.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

// |t| statistics for every spec x method pair (spec-major order) on one series.
// beta0 = 0 (the null of no dependence).
std::vector<double> abs_t_statistics(std::span<const double> x,
                                     const std::vector<DependenceSpec>& specs,
                                     const std::vector<MethodSpec>& methods);

// Equal-tailed confidence intervals at the given coverage for every
// spec x method pair (group: robust t interval; hac: normal interval).
std::vector<std::pair<double, double>> confidence_intervals_all(
    std::span<const double> x, const std::vector<DependenceSpec>& specs,
    const std::vector<MethodSpec>& methods, double coverage);

// Rejection frequencies under the null (requires phi = 0).  Multi-spec variant
// shares the simulated replications across all measures.
McSummary mc_size(const McConfig& config);
McSummary mc_size_multi(const McConfig& config, const std::vector<DependenceSpec>& specs);

// Size-adjusted power over an AR coefficient grid (must contain 0).  Critical
// values are the empirical (1-level) |t| quantiles at phi = 0, nearest-rank,
// with common random numbers across grid points.
McSummary mc_power_curve(const McConfig& config, std::span<const double> phi_grid);

// Coverage of nominal 95% intervals over an ARCH alpha grid, for each power in
// `powers` applied to the config's measure.  The true dependence value per
// (alpha, power) comes from a large pilot simulation (deterministic stream).
McSummary mc_coverage(const McConfig& config, std::span<const double> alpha_grid,
                      std::span<const double> powers);

// Pilot-based truth for one DGP and measure.
double pilot_truth(const DgpSpec& dgp, const DependenceSpec& spec, std::size_t pilot_length,
                   uint64_t stream);

// Weighted sum of signed-power autocorrelations over lags 1..H.
double mac_statistic(std::span<const double> x, int H, std::span<const double> weights,
                     double s);
// Variance-ratio style weights w_h = 2(1 - h/(H+1)).
std::vector<double> variance_ratio_weights(int H);
// Group test where each group contributes its own weighted MAC estimate.
GroupTestResult mac_group_test(std::span<const double> x, int H,
                               std::span<const double> weights, double s, int q, double beta0,
                               double level);

}  // namespace powertail
