#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "series.hpp"

// Group-based robust t inference: split the sample into q consecutive equal
// groups, estimate the dependence measure on each group with group-local
// means, and treat the q estimates as approximately independent Gaussians.
// The t statistic is sqrt(q)(mean - beta0)/s with the usual 1/(q-1) variance.
//
// Student-t critical values are valid for levels <= 2*Phi(-sqrt(3)) ~ 0.0833
// at any q, and for levels <= 0.1 when 2 <= q <= 14; outside that region the
// conservative tail bound below is inverted instead.

namespace powertail {

struct GroupPartition {
  int q = 0;
  std::size_t group_size = 0;  // floor(T/q)
  std::size_t discarded = 0;   // trailing observations dropped
};

// max_lag is the largest lag evaluated inside a group: every group must keep
// at least two usable products, so group_size >= max_lag + 2 is required.
GroupPartition make_partition(std::size_t T, int q, int max_lag);

// One dependence estimate per group (group-local means and divisor).
std::vector<double> group_estimates(std::span<const double> x, const DependenceSpec& spec,
                                    int q);
// Same, on already-transformed series.
std::vector<double> group_estimates_transformed(std::span<const double> fv,
                                                std::span<const double> gv,
                                                const DependenceSpec& spec, int q);

double t_statistic(std::span<const double> estimates, double beta0);

// P(|t_q| > x) bound: max over k in {max(2, floor(R)+1), ..., q} of the
// two-sided t_{k-1} tail at sqrt(R(k-1)/(k-R)), R = q x^2/(x^2+q-1).  The k=q
// term equals the plain t_{q-1} tail at x, so the bound always dominates it;
// at q = 2 the bound collapses to the exact two-sided t_1 tail.
double p_value_bound(int q, double x);

// Two-sided critical value at significance level alpha: the Student-t quantile
// where that is justified, otherwise the inverted conservative bound.
double critical_value(int q, double alpha);

// Equal-tailed interval mean +/- cv * s / sqrt(q) at coverage C.
std::pair<double, double> confidence_interval(std::span<const double> estimates, double coverage);

// Map a group t statistic to the self-normalized sum scale: t / sqrt(1 + (t^2-1)/q).
double sn_from_t(int q, double t);

// Edelman's Gaussian tail bound G(x) = 1 - Phi(x/d - 1.5 d/x), d = sqrt(1+(x^2-1)/q).
double edelman_p(int q, double x);

struct GroupTestResult {
  std::vector<double> estimates;
  double pooled = 0.0;  // mean of the group estimates
  double s_beta = 0.0;  // sd of the group estimates (1/(q-1))
  double t_stat = 0.0;
  double p_value = 1.0;  // conservative bound
  double ci_lower = 0.0, ci_upper = 0.0;
  int q = 0;
  double beta0 = 0.0;
  double level = 0.05;
  bool degenerate = false;  // all group estimates equal
  bool reject = false;
};

// Assembles the full test from precomputed group estimates.
GroupTestResult assemble_group_test(std::vector<double> estimates, int q, double beta0,
                                    double level);
GroupTestResult run_group_test(std::span<const double> x, const DependenceSpec& spec, int q,
                               double beta0, double level);

}  // namespace powertail
