#include "hac.hpp"

#include <cmath>

#include "error.hpp"
#include "special.hpp"

namespace powertail {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLrvFloor = 1e-12;
constexpr std::size_t kFullLagLimit = 2048;  // below this the matrix path keeps all lags

std::vector<double> demean(std::span<const double> y) {
  const double m = sample_mean(y);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] - m;
  return out;
}

// Autocovariance of a demeaned series at lag k, divisor 1/T.
double acov(const std::vector<double>& yd, std::size_t k) {
  NeumaierSum s;
  for (std::size_t t = k; t < yd.size(); ++t) s.add(yd[t] * yd[t - k]);
  return s.value() / static_cast<double>(yd.size());
}

// Cross covariance (1/T) sum_t a_t b_{t-k} for demeaned a, b.
double xcov(const std::vector<double>& a, const std::vector<double>& b, std::size_t k) {
  NeumaierSum s;
  for (std::size_t t = k; t < a.size(); ++t) s.add(a[t] * b[t - k]);
  return s.value() / static_cast<double>(a.size());
}

std::size_t kernel_max_lag(Kernel kernel, double bandwidth, std::size_t T) {
  std::size_t lim = T - 1;
  const double cap = (kernel == Kernel::quadratic_spectral) ? std::ceil(10.0 * bandwidth)
                                                            : std::ceil(bandwidth);
  if (cap < static_cast<double>(lim)) lim = static_cast<std::size_t>(cap);
  return lim;
}

}  // namespace

double kernel_weight(Kernel kernel, double x) {
  if (kernel == Kernel::bartlett) {
    const double a = std::fabs(x);
    return a >= 1.0 ? 0.0 : 1.0 - a;
  }
  const double d = 6.0 * kPi * x / 5.0;
  if (std::fabs(d) < 1e-4) return 1.0 - d * d / 10.0;  // series around 0
  return 25.0 / (12.0 * kPi * kPi * x * x) * (std::sin(d) / d - std::cos(d));
}

double ar1_coefficient(std::span<const double> y) {
  if (y.size() < 2) fail(ErrorCode::invalid, "ar1_coefficient: need at least 2 observations");
  const std::vector<double> yd = demean(y);
  NeumaierSum num, den;
  for (std::size_t t = 1; t < yd.size(); ++t) {
    num.add(yd[t] * yd[t - 1]);
    den.add(yd[t - 1] * yd[t - 1]);
  }
  const double d = den.value();
  if (d <= 0.0) fail(ErrorCode::degenerate, "ar1_coefficient: series is constant");
  const double rho = num.value() / d;
  if (std::fabs(rho) >= 1.0 - 1e-6)
    fail(ErrorCode::numeric, "ar1_coefficient: |rho| >= 1 - 1e-6, plug-in bandwidth undefined");
  return rho;
}

double bandwidth_from_rho(double rho, std::size_t T, Kernel kernel) {
  if (std::fabs(rho) >= 1.0 - 1e-6)
    fail(ErrorCode::numeric, "bandwidth_from_rho: |rho| too close to 1");
  const double Td = static_cast<double>(T);
  double S;
  if (kernel == Kernel::quadratic_spectral) {
    const double one = 1.0 - rho;
    const double a2 = 4.0 * rho * rho / (one * one * one * one);
    S = 1.3221 * std::pow(a2 * Td, 0.2);
  } else {
    const double a1 = 4.0 * rho * rho / ((1.0 - rho) * (1.0 - rho) * (1.0 + rho) * (1.0 + rho));
    S = 1.1447 * std::pow(a1 * Td, 1.0 / 3.0);
  }
  return std::max(S, 1e-3);
}

double andrews_bandwidth(std::span<const double> y, Kernel kernel) {
  if (y.size() < 10) fail(ErrorCode::invalid, "andrews_bandwidth: need T >= 10");
  return bandwidth_from_rho(ar1_coefficient(y), y.size(), kernel);
}

LrvResult long_run_variance(std::span<const double> y, Kernel kernel, double bandwidth) {
  if (y.size() < 2) fail(ErrorCode::invalid, "long_run_variance: need T >= 2");
  if (!(bandwidth > 0.0)) fail(ErrorCode::invalid, "long_run_variance: bandwidth must be positive");
  const std::vector<double> yd = demean(y);
  const std::size_t L = kernel_max_lag(kernel, bandwidth, yd.size());
  NeumaierSum acc;
  acc.add(acov(yd, 0));
  for (std::size_t k = 1; k <= L; ++k) {
    const double w = kernel_weight(kernel, static_cast<double>(k) / bandwidth);
    if (w == 0.0) continue;
    acc.add(2.0 * w * acov(yd, k));
  }
  LrvResult r;
  r.value = acc.value();
  if (r.value <= 0.0) {
    r.value = kLrvFloor;
    r.floored = true;
  }
  return r;
}

double andrews_bandwidth_multi(const std::vector<std::vector<double>>& ys, Kernel kernel) {
  if (ys.empty()) fail(ErrorCode::invalid, "andrews_bandwidth_multi: no series");
  const std::size_t T = ys.front().size();
  if (T < 10) fail(ErrorCode::invalid, "andrews_bandwidth_multi: need T >= 10");
  // Andrews AR(1) plug-in with unit weights: alpha(j) built from per-series
  // (rho_a, sigma_a^2) of the AR(1) fit.
  double num = 0.0, den = 0.0;
  const bool qs = kernel == Kernel::quadratic_spectral;
  for (const auto& y : ys) {
    if (y.size() != T) fail(ErrorCode::invalid, "andrews_bandwidth_multi: length mismatch");
    const double rho = ar1_coefficient(y);
    const std::vector<double> yd = demean(y);
    NeumaierSum rss;
    for (std::size_t t = 1; t < yd.size(); ++t) {
      const double e = yd[t] - rho * yd[t - 1];
      rss.add(e * e);
    }
    const double s2 = rss.value() / static_cast<double>(yd.size() - 1);
    const double one = 1.0 - rho;
    const double s4 = s2 * s2;
    if (qs) {
      num += 4.0 * rho * rho * s4 / std::pow(one, 8.0);
      den += s4 / std::pow(one, 4.0);
    } else {
      num += 4.0 * rho * rho * s4 / (std::pow(one, 6.0) * std::pow(1.0 + rho, 2.0));
      den += s4 / std::pow(one, 4.0);
    }
  }
  if (den <= 0.0) fail(ErrorCode::degenerate, "andrews_bandwidth_multi: zero variance");
  const double alpha = num / den;
  const double Td = static_cast<double>(T);
  const double S = qs ? 1.3221 * std::pow(alpha * Td, 0.2)
                      : 1.1447 * std::pow(alpha * Td, 1.0 / 3.0);
  return std::max(S, 1e-3);
}

std::vector<double> long_run_variance_matrix(const std::vector<std::vector<double>>& ys,
                                             Kernel kernel, double bandwidth) {
  const std::size_t d = ys.size();
  if (d == 0) fail(ErrorCode::invalid, "long_run_variance_matrix: no series");
  const std::size_t T = ys.front().size();
  if (T < 2) fail(ErrorCode::invalid, "long_run_variance_matrix: need T >= 2");
  if (!(bandwidth > 0.0))
    fail(ErrorCode::invalid, "long_run_variance_matrix: bandwidth must be positive");
  std::vector<std::vector<double>> yd(d);
  for (std::size_t a = 0; a < d; ++a) {
    if (ys[a].size() != T) fail(ErrorCode::invalid, "long_run_variance_matrix: length mismatch");
    yd[a] = demean(ys[a]);
  }
  // Keeping every lag preserves exact psd-ness (the kernel-smoothed periodogram
  // identity needs all T-1 lags); truncation is a cost cut for long inputs.
  const std::size_t L =
      (T <= kFullLagLimit) ? T - 1 : kernel_max_lag(kernel, bandwidth, T);
  std::vector<double> out(d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      NeumaierSum acc;
      acc.add(xcov(yd[a], yd[b], 0));
      for (std::size_t k = 1; k <= L; ++k) {
        const double w = kernel_weight(kernel, static_cast<double>(k) / bandwidth);
        if (w == 0.0) continue;
        acc.add(w * (xcov(yd[a], yd[b], k) + xcov(yd[b], yd[a], k)));
      }
      out[a * d + b] = out[b * d + a] = acc.value();
    }
  return out;
}

HacResult hac_test(std::span<const double> x, const DependenceSpec& spec, double beta0,
                   Kernel kernel, double bandwidth, double ci_level) {
  spec.validate();
  const std::vector<double> fv = transform(x, spec.f());
  const std::vector<double> gv = transform(x, spec.g());
  return hac_test_transformed(fv, gv, spec, beta0, kernel, bandwidth, ci_level);
}

HacResult hac_test_transformed(std::span<const double> fv, std::span<const double> gv,
                               const DependenceSpec& spec, double beta0, Kernel kernel,
                               double bandwidth, double ci_level) {
  spec.validate();
  if (!(ci_level > 0.0 && ci_level < 1.0))
    fail(ErrorCode::invalid, "hac_test: ci_level must lie in (0,1)");
  const std::size_t T = fv.size();
  if (gv.size() != T) fail(ErrorCode::invalid, "hac_test: transformed length mismatch");
  const int h = spec.lag;
  if (T < static_cast<std::size_t>(h) + 2)
    fail(ErrorCode::invalid, "hac_test: series too short for the requested lag");

  const double mf = sample_mean(fv), mg = sample_mean(gv);
  const double Td = static_cast<double>(T);
  const double gamma_h = centered_lag_sum(fv, gv, h, mf, mg) / Td;

  HacResult r;
  double variance;  // asymptotic variance of sqrt(T) (estimate - truth)
  if (!spec.is_correlation()) {
    r.estimate = gamma_h;
    std::vector<double> y(T - static_cast<std::size_t>(h));
    for (std::size_t t = static_cast<std::size_t>(h); t < T; ++t)
      y[t - h] = (fv[t] - mf) * (gv[t - h] - mg) - gamma_h;
    if (bandwidth > 0.0) {
      r.bandwidth = bandwidth;
    } else {
      try {
        r.bandwidth = andrews_bandwidth(y, kernel);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::invalid) throw;
        // Explosive (|rho| ~ 1) or constant AR(1) plug-in fit: use the widest
        // kernel window, the conservative limit of the rule as |rho| -> 1.
        r.bandwidth = static_cast<double>(y.size());
      }
    }
    const LrvResult lrv = long_run_variance(y, kernel, r.bandwidth);
    variance = lrv.value;
    r.lrv_floored = lrv.floored;
  } else {
    const double gf0 = centered_lag_sum(fv, fv, 0, mf, mf) / Td;
    const double gg0 = centered_lag_sum(gv, gv, 0, mg, mg) / Td;
    if (gf0 <= 0.0 || gg0 <= 0.0)
      fail(ErrorCode::degenerate, "hac_test: a transformed series is constant");
    const double rho = gamma_h / std::sqrt(gf0 * gg0);
    r.estimate = rho;
    const std::size_t n = T - static_cast<std::size_t>(h);
    std::vector<std::vector<double>> ys(3, std::vector<double>(n));
    for (std::size_t t = static_cast<std::size_t>(h); t < T; ++t) {
      const std::size_t i = t - h;
      ys[0][i] = (fv[t] - mf) * (gv[t - h] - mg) - gamma_h;
      ys[1][i] = (fv[t] - mf) * (fv[t] - mf) - gf0;
      ys[2][i] = (gv[t] - mg) * (gv[t] - mg) - gg0;
    }
    if (bandwidth > 0.0) {
      r.bandwidth = bandwidth;
    } else {
      try {
        r.bandwidth = andrews_bandwidth_multi(ys, kernel);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::invalid) throw;
        // Same widest-window fallback as the covariance branch.
        r.bandwidth = static_cast<double>(n);
      }
    }
    const std::vector<double> S = long_run_variance_matrix(ys, kernel, r.bandwidth);
    // Delta method for (c, vf, vg) -> c / sqrt(vf vg).
    const double A0 = 1.0 / std::sqrt(gf0 * gg0);
    const double A1 = -0.5 * rho / gf0;
    const double A2 = -0.5 * rho / gg0;
    const double A[3] = {A0, A1, A2};
    double v = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) v += A[a] * S[static_cast<std::size_t>(a) * 3 + b] * A[b];
    if (v <= 0.0) {
      v = kLrvFloor;
      r.lrv_floored = true;
    }
    variance = v;
  }

  r.std_err = std::sqrt(variance / Td);
  if (r.std_err <= 0.0) fail(ErrorCode::degenerate, "hac_test: zero standard error");
  r.t_stat = (r.estimate - beta0) / r.std_err;
  r.p_value = std::erfc(std::fabs(r.t_stat) * 0.70710678118654752440);  // 2(1-Phi(|t|))
  const double z = norm_quantile(0.5 + 0.5 * ci_level);
  r.ci_lower = r.estimate - z * r.std_err;
  r.ci_upper = r.estimate + z * r.std_err;
  return r;
}

}  // namespace powertail
