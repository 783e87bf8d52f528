#include "series.hpp"

#include <cmath>
#include <cstdio>

#include "error.hpp"

namespace powertail {

void TransformSpec::validate() const {
  if (kind == Transform::identity) return;
  if (!(exponent > 0.0)) fail(ErrorCode::invalid, "transform: exponent must be positive");
  if (!std::isfinite(exponent)) fail(ErrorCode::invalid, "transform: exponent must be finite");
}

TransformSpec DependenceSpec::f() const {
  if (is_abs_power()) return {Transform::abs_power, exponent};
  return {Transform::identity, 1.0};
}

TransformSpec DependenceSpec::g() const {
  if (is_abs_power()) return {Transform::abs_power, exponent};
  return {Transform::signed_power, exponent};
}

void DependenceSpec::validate() const {
  if (!(exponent > 0.0) || !std::isfinite(exponent))
    fail(ErrorCode::invalid, "dependence spec: exponent must be positive and finite");
  const int min_lag = is_correlation() ? 1 : 0;
  if (lag < min_lag)
    fail(ErrorCode::invalid, is_correlation()
                                 ? "dependence spec: correlation measures need lag >= 1"
                                 : "dependence spec: lag must be >= 0");
}

std::string DependenceSpec::label() const {
  std::string base;
  switch (measure) {
    case Measure::abs_power_autocov: base = "abs_power_autocov"; break;
    case Measure::abs_power_autocorr: base = "abs_power_autocorr"; break;
    case Measure::signed_power_crosscov: base = "signed_power_crosscov"; break;
    case Measure::signed_power_crosscorr: base = "signed_power_crosscorr"; break;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%c=%g,h=%d)", is_abs_power() ? 'p' : 's', exponent,
                lag);
  return base + buf;
}

double apply_transform(double v, const TransformSpec& spec) {
  switch (spec.kind) {
    case Transform::identity:
      return v;
    case Transform::abs_power: {
      const double a = std::fabs(v);
      if (spec.exponent == 1.0) return a;
      if (spec.exponent == 2.0) return a * a;
      if (spec.exponent == 0.5) return std::sqrt(a);
      return std::pow(a, spec.exponent);
    }
    case Transform::signed_power: {
      if (v == 0.0) return 0.0;  // sign(0) = 0
      const double a = std::fabs(v);
      double p;
      if (spec.exponent == 1.0)
        p = a;
      else if (spec.exponent == 2.0)
        p = a * a;
      else if (spec.exponent == 0.5)
        p = std::sqrt(a);
      else
        p = std::pow(a, spec.exponent);
      return v > 0.0 ? p : -p;
    }
  }
  fail(ErrorCode::invalid, "transform: unknown kind");
}

void validate_series(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      fail(ErrorCode::data,
           "series: non-finite value at index " + std::to_string(i));
}

std::vector<double> transform(std::span<const double> x, const TransformSpec& spec) {
  spec.validate();
  validate_series(x);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = apply_transform(x[i], spec);
  return out;
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::invalid, "sample_mean: empty series");
  NeumaierSum s;
  for (double v : x) s.add(v);
  return s.value() / static_cast<double>(x.size());
}

double centered_lag_sum(std::span<const double> fv, std::span<const double> gv, int h,
                        double mean_f, double mean_g) {
  NeumaierSum s;
  const std::size_t n = fv.size();
  for (std::size_t t = static_cast<std::size_t>(h); t < n; ++t)
    s.add((fv[t] - mean_f) * (gv[t - h] - mean_g));
  return s.value();
}

double cov_from_transformed(std::span<const double> fv, std::span<const double> gv, int h) {
  const std::size_t n = fv.size();
  if (gv.size() != n) fail(ErrorCode::invalid, "cov: transformed series length mismatch");
  if (h < 0) fail(ErrorCode::invalid, "cov: lag must be >= 0");
  if (n <= static_cast<std::size_t>(h))
    fail(ErrorCode::invalid, "cov: need series length T > lag");
  const double mf = sample_mean(fv), mg = sample_mean(gv);
  return centered_lag_sum(fv, gv, h, mf, mg) / static_cast<double>(n);
}

double corr_from_transformed(std::span<const double> fv, std::span<const double> gv, int h) {
  if (h < 1) fail(ErrorCode::invalid, "corr: lag must be >= 1");
  const double vf = cov_from_transformed(fv, fv, 0);
  const double vg = cov_from_transformed(gv, gv, 0);
  if (vf <= 0.0 || vg <= 0.0)
    fail(ErrorCode::degenerate, "corr: a transformed series is constant (zero variance)");
  const double c = cov_from_transformed(fv, gv, h);
  double r = c / std::sqrt(vf * vg);
  if (std::fabs(r) > 1.0) {
    if (std::fabs(r) <= 1.0 + 1e-9)
      r = (r > 0.0) ? 1.0 : -1.0;
    else
      fail(ErrorCode::numeric, "corr: |estimate| exceeds 1 beyond rounding tolerance");
  }
  return r;
}

double sample_cov_fg(std::span<const double> x, const TransformSpec& f,
                     const TransformSpec& g, int h) {
  const std::vector<double> fv = transform(x, f);
  const std::vector<double> gv = transform(x, g);
  return cov_from_transformed(fv, gv, h);
}

double sample_corr_fg(std::span<const double> x, const TransformSpec& f,
                      const TransformSpec& g, int h) {
  const std::vector<double> fv = transform(x, f);
  const std::vector<double> gv = transform(x, g);
  return corr_from_transformed(fv, gv, h);
}

double estimate_dependence(std::span<const double> x, const DependenceSpec& spec) {
  spec.validate();
  if (spec.is_correlation()) return sample_corr_fg(x, spec.f(), spec.g(), spec.lag);
  return sample_cov_fg(x, spec.f(), spec.g(), spec.lag);
}

}  // namespace powertail
