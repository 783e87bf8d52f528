#include "group.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "special.hpp"

namespace powertail {

namespace {
// 2 * Phi(-sqrt(3)): below this level the Student-t quantile is valid for every q.
const double kAnyQLevel = 2.0 * norm_cdf(-std::sqrt(3.0));

struct MeanSd {
  double mean, sd;
};

MeanSd mean_sd(std::span<const double> v) {
  const double m = sample_mean(v);
  NeumaierSum ss;
  for (double e : v) ss.add((e - m) * (e - m));
  const double var = ss.value() / static_cast<double>(v.size() - 1);
  return {m, std::sqrt(var)};
}

}  // namespace

GroupPartition make_partition(std::size_t T, int q, int max_lag) {
  if (q < 2) fail(ErrorCode::invalid, "partition: q must be >= 2");
  if (max_lag < 0) fail(ErrorCode::invalid, "partition: max_lag must be >= 0");
  const std::size_t m = T / static_cast<std::size_t>(q);
  if (m < static_cast<std::size_t>(max_lag) + 2)
    fail(ErrorCode::invalid,
         "partition: group size floor(T/q) = " + std::to_string(m) +
             " is too small; need at least max_lag + 2 = " + std::to_string(max_lag + 2));
  return {q, m, T - m * static_cast<std::size_t>(q)};
}

std::vector<double> group_estimates_transformed(std::span<const double> fv,
                                                std::span<const double> gv,
                                                const DependenceSpec& spec, int q) {
  if (fv.size() != gv.size()) fail(ErrorCode::invalid, "group_estimates: length mismatch");
  const GroupPartition part = make_partition(fv.size(), q, spec.lag);
  std::vector<double> est(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * part.group_size;
    const std::span<const double> fj = fv.subspan(off, part.group_size);
    const std::span<const double> gj = gv.subspan(off, part.group_size);
    try {
      est[static_cast<std::size_t>(j)] =
          spec.is_correlation() ? corr_from_transformed(fj, gj, spec.lag)
                                : cov_from_transformed(fj, gj, spec.lag);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate)
        fail(ErrorCode::degenerate, "group " + std::to_string(j + 1) + ": " + e.what());
      throw;
    }
  }
  return est;
}

std::vector<double> group_estimates(std::span<const double> x, const DependenceSpec& spec,
                                    int q) {
  spec.validate();
  const std::vector<double> fv = transform(x, spec.f());
  const std::vector<double> gv = transform(x, spec.g());
  return group_estimates_transformed(fv, gv, spec, q);
}

double t_statistic(std::span<const double> estimates, double beta0) {
  if (estimates.size() < 2) fail(ErrorCode::invalid, "t_statistic: need at least 2 estimates");
  const auto [m, s] = mean_sd(estimates);
  if (s <= 0.0)
    fail(ErrorCode::degenerate, "t_statistic: all group estimates are equal (zero variance)");
  return std::sqrt(static_cast<double>(estimates.size())) * (m - beta0) / s;
}

double p_value_bound(int q, double x) {
  if (q < 2) fail(ErrorCode::invalid, "p_value_bound: q must be >= 2");
  if (!(x >= 0.0)) fail(ErrorCode::invalid, "p_value_bound: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double qd = static_cast<double>(q);
  const double R = qd * x * x / (x * x + qd - 1.0);  // in [0, q)
  int k_min = static_cast<int>(std::floor(R)) + 1;   // strict k > R
  if (k_min < 2) k_min = 2;
  if (k_min > q) return std::min(1.0, student_t_two_sided_tail(x, qd - 1.0));
  double best = 0.0;
  for (int k = k_min; k <= q; ++k) {
    const double kd = static_cast<double>(k);
    const double arg = std::sqrt(R * (kd - 1.0) / (kd - R));
    const double tail = student_t_two_sided_tail(arg, kd - 1.0);
    if (tail > best) best = tail;
  }
  return std::min(1.0, best);
}

double critical_value(int q, double alpha) {
  if (q < 2) fail(ErrorCode::invalid, "critical_value: q must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorCode::invalid, "critical_value: alpha must lie in (0,1)");
  if (alpha <= kAnyQLevel || (q <= 14 && alpha <= 0.1))
    return student_t_quantile(1.0 - 0.5 * alpha, static_cast<double>(q - 1));
  // Invert the conservative bound: smallest x with bound <= alpha.  The bound
  // is continuous and non-increasing in x, so bisection applies.
  double lo = 0.0, hi = 1.0;
  while (p_value_bound(q, hi) > alpha) {
    hi *= 2.0;
    if (hi > 1e12) fail(ErrorCode::numeric, "critical_value: bound inversion failed to bracket");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (p_value_bound(q, mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

std::pair<double, double> confidence_interval(std::span<const double> estimates,
                                              double coverage) {
  if (estimates.size() < 2)
    fail(ErrorCode::invalid, "confidence_interval: need at least 2 estimates");
  if (!(coverage > 0.0 && coverage < 1.0))
    fail(ErrorCode::invalid, "confidence_interval: coverage must lie in (0,1)");
  const int q = static_cast<int>(estimates.size());
  const auto [m, s] = mean_sd(estimates);
  const double cv = critical_value(q, 1.0 - coverage);
  const double half = cv * s / std::sqrt(static_cast<double>(q));
  return {m - half, m + half};
}

double sn_from_t(int q, double t) {
  if (q < 2) fail(ErrorCode::invalid, "sn_from_t: q must be >= 2");
  const double qd = static_cast<double>(q);
  return t / std::sqrt(1.0 + (t * t - 1.0) / qd);
}

double edelman_p(int q, double x) {
  if (q < 2) fail(ErrorCode::invalid, "edelman_p: q must be >= 2");
  if (!(x > 0.0)) fail(ErrorCode::invalid, "edelman_p: x must be positive");
  const double qd = static_cast<double>(q);
  const double d = std::sqrt(1.0 + (x * x - 1.0) / qd);
  const double arg = x / d - 1.5 * d / x;
  const double p = 1.0 - norm_cdf(arg);
  return std::min(1.0, std::max(0.0, p));
}

GroupTestResult assemble_group_test(std::vector<double> estimates, int q, double beta0,
                                    double level) {
  if (static_cast<int>(estimates.size()) != q || q < 2)
    fail(ErrorCode::invalid, "group test: estimate count must equal q >= 2");
  if (!(level > 0.0 && level < 1.0))
    fail(ErrorCode::invalid, "group test: level must lie in (0,1)");
  GroupTestResult r;
  r.q = q;
  r.beta0 = beta0;
  r.level = level;
  const auto [m, s] = mean_sd(estimates);
  r.pooled = m;
  r.s_beta = s;
  const double cv = critical_value(q, level);
  if (s <= 0.0) {
    // All group estimates equal: the test degenerates to a point.  Batch runs
    // need an answer rather than an exception here.
    r.degenerate = true;
    if (m == beta0) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
      r.reject = false;
    } else {
      r.t_stat = (m > beta0 ? 1.0 : -1.0) * std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
      r.reject = true;
    }
    r.ci_lower = r.ci_upper = m;
  } else {
    r.t_stat = std::sqrt(static_cast<double>(q)) * (m - beta0) / s;
    r.p_value = p_value_bound(q, std::fabs(r.t_stat));
    const double half = cv * s / std::sqrt(static_cast<double>(q));
    r.ci_lower = m - half;
    r.ci_upper = m + half;
    r.reject = std::fabs(r.t_stat) > cv;
  }
  r.estimates = std::move(estimates);
  return r;
}

GroupTestResult run_group_test(std::span<const double> x, const DependenceSpec& spec, int q,
                               double beta0, double level) {
  return assemble_group_test(group_estimates(x, spec, q), q, beta0, level);
}

}  // namespace powertail
