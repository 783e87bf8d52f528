#pragma once

#include <span>
#include <vector>

#include "series.hpp"

// Kernel long-run variance estimation (quadratic spectral and Bartlett) with
// the Andrews AR(1) plug-in bandwidth, and the resulting "textbook" tests for
// power-transformed covariances/correlations.  p-values and intervals use the
// standard normal limit by construction; under heavy tails that limit is the
// wrong one, which is exactly the behaviour this baseline exists to exhibit.

namespace powertail {

enum class Kernel { quadratic_spectral, bartlett };

double kernel_weight(Kernel kernel, double x);

// AR(1) lag-one OLS coefficient of the demeaned series.
double ar1_coefficient(std::span<const double> y);
// Plug-in bandwidth given the AR(1) coefficient; floored at 1e-3.
double bandwidth_from_rho(double rho, std::size_t T, Kernel kernel);
// The two combined; requires T >= 10.
double andrews_bandwidth(std::span<const double> y, Kernel kernel);

struct LrvResult {
  double value = 0.0;
  bool floored = false;  // non-positive estimate floored at 1e-12
};

// Scalar long-run variance: gamma(0) + 2 sum w(k/S) gamma(k), 1/T divisor,
// demeaned internally.  QS sums to lag min(T-1, ceil(10 S)); Bartlett to its
// natural support.
LrvResult long_run_variance(std::span<const double> y, Kernel kernel, double bandwidth);

// Matrix version for d stacked series (equal lengths); symmetrised cross lags
// Gamma(k) + Gamma(k)'.  Row-major d x d result.  Sums run over every lag when
// T <= 2048 (the estimate is then exactly psd for these kernels); longer
// inputs truncate like the scalar path.
std::vector<double> long_run_variance_matrix(const std::vector<std::vector<double>>& ys,
                                             Kernel kernel, double bandwidth);

// Multivariate Andrews plug-in with unit weights across components.
double andrews_bandwidth_multi(const std::vector<std::vector<double>>& ys, Kernel kernel);

struct HacResult {
  double estimate = 0.0;
  double std_err = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  double ci_lower = 0.0, ci_upper = 0.0;
  double bandwidth = 0.0;
  bool lrv_floored = false;
};

// Covariance measures: t = (gamma_hat - beta0)/sqrt(LRV/T) on the summand
// (f_t - mf)(g_{t-h} - mg) - gamma_hat.  Correlation measures: delta method on
// the stacked (cross moment, two variances) summand with a 3x3 LRV.
// bandwidth <= 0 selects the Andrews plug-in.  ci_level is the two-sided
// confidence level for the reported interval.
HacResult hac_test(std::span<const double> x, const DependenceSpec& spec, double beta0,
                   Kernel kernel = Kernel::quadratic_spectral, double bandwidth = 0.0,
                   double ci_level = 0.95);

// Same test on already-transformed series (fv = f(x), gv = g(x)); the Monte
// Carlo harness computes those once per replication.
HacResult hac_test_transformed(std::span<const double> fv, std::span<const double> gv,
                               const DependenceSpec& spec, double beta0, Kernel kernel,
                               double bandwidth, double ci_level);

}  // namespace powertail
