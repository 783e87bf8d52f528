#include "special.hpp"

#include <cmath>
#include <algorithm>
#include <limits>

#include "error.hpp"

namespace powertail {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2Pi = 2.50662827463100050242;

double lgamma_ts(double x) {
#ifdef __unix__
  int sign = 0;
  return ::lgamma_r(x, &sign);  // avoids the signgam global; args here are > 0
#else
  return std::lgamma(x);
#endif
}

}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::invalid, "norm_quantile: p must lie in (0,1)");
  // Acklam's rational approximation, then one Halley step against erfc.
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double e = norm_cdf(x) - p;
  double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

double lbeta(double a, double b) { return lgamma_ts(a) + lgamma_ts(b) - lgamma_ts(a + b); }

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  fail(ErrorCode::numeric, "inc_beta: continued fraction did not converge");
}

}  // namespace

double inc_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) fail(ErrorCode::invalid, "inc_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::invalid, "inc_beta: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lfront = a * std::log(x) + b * std::log1p(-x) - lbeta(a, b);
  const double front = std::exp(lfront);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double inc_beta_inv(double a, double b, double y) {
  if (!(a > 0.0 && b > 0.0)) fail(ErrorCode::invalid, "inc_beta_inv: a and b must be positive");
  if (!(y >= 0.0 && y <= 1.0)) fail(ErrorCode::invalid, "inc_beta_inv: y must lie in [0,1]");
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 1.0;

  // Initial guess: Abramowitz-Stegun 26.5.22 when both parameters exceed 1,
  // otherwise the crude two-piece power approximation.
  double x;
  const double a1 = a - 1.0, b1 = b - 1.0;
  if (a >= 1.0 && b >= 1.0) {
    const double pp = (y < 0.5) ? y : 1.0 - y;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double xn = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (y < 0.5) xn = -xn;
    const double al = (xn * xn - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = (xn * std::sqrt(al + h) / h) -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b)), lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (y < t / w)
      x = std::pow(a * w * y, 1.0 / a);
    else
      x = 1.0 - std::pow(b * w * (1.0 - y), 1.0 / b);
  }
  if (x <= 0.0) x = 1e-12;
  if (x >= 1.0) x = 1.0 - 1e-12;

  // Bracketed Halley iteration; bisection whenever a step leaves the bracket.
  const double afac = -lbeta(a, b);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double err = inc_beta(a, b, x) - y;
    if (err > 0.0)
      hi = x;
    else
      lo = x;
    if (x <= 1e-300 || x >= 1.0 - 1e-16) break;
    const double lpdf = a1 * std::log(x) + b1 * std::log1p(-x) + afac;
    double step = err * std::exp(-lpdf);
    const double corr = 1.0 - 0.5 * std::min(1.0, std::fabs(step) * std::fabs(a1 / x - b1 / (1.0 - x)));
    if (corr > 0.5) step /= corr;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::fabs(xn - x) <= 1e-16 * x) {
      x = xn;
      break;
    }
    x = xn;
    if (hi - lo < 1e-300) break;
  }
  return x;
}

double student_t_pdf(double x, double df) {
  if (!(df > 0.0)) fail(ErrorCode::invalid, "student_t_pdf: df must be positive");
  const double lg = lgamma_ts(0.5 * (df + 1.0)) - lgamma_ts(0.5 * df);
  return std::exp(lg - 0.5 * std::log(df * kPi) - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double student_t_two_sided_tail(double x, double df) {
  if (!(df > 0.0)) fail(ErrorCode::invalid, "student_t_two_sided_tail: df must be positive");
  x = std::fabs(x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return inc_beta(0.5 * df, 0.5, df / (df + x * x));
}

double student_t_cdf(double x, double df) {
  if (!(df > 0.0)) fail(ErrorCode::invalid, "student_t_cdf: df must be positive");
  if (x == 0.0) return 0.5;
  const double tail = 0.5 * student_t_two_sided_tail(x, df);
  return (x > 0.0) ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  if (!(df > 0.0)) fail(ErrorCode::invalid, "student_t_quantile: df must be positive");
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::invalid, "student_t_quantile: p must lie in (0,1)");
  if (p == 0.5) return 0.0;
  const bool upper = p > 0.5;
  const double tail2 = 2.0 * (upper ? 1.0 - p : p);  // two-sided tail mass at |x|
  const double w = inc_beta_inv(0.5 * df, 0.5, tail2);
  double x;
  if (w <= 0.0) {
    x = std::numeric_limits<double>::infinity();
  } else {
    x = std::sqrt(df * (1.0 - w) / w);
  }
  return upper ? x : -x;
}

}  // namespace powertail
