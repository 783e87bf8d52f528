#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

// Power-transformed dependence estimators.  All sample moments use the 1/T
// divisor with full-sample plug-in means, summing products from t = h+1; sums
// are compensated (Neumaier) so results do not depend on summation order noise.

namespace powertail {

struct NeumaierSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

enum class Transform { identity, abs_power, signed_power };

struct TransformSpec {
  Transform kind = Transform::identity;
  double exponent = 1.0;  // ignored for identity; must be > 0 otherwise

  void validate() const;
};

enum class Measure {
  abs_power_autocov,     // gamma_{|R|^p}(h)
  abs_power_autocorr,    // rho_{|R|^p}(h)
  signed_power_crosscov,  // gamma'_{R,|R|^s sign(R)}(h)
  signed_power_crosscorr  // rho'_{R,|R|^s sign(R)}(h)
};

struct DependenceSpec {
  Measure measure = Measure::abs_power_autocorr;
  double exponent = 1.0;
  int lag = 1;

  bool is_correlation() const {
    return measure == Measure::abs_power_autocorr || measure == Measure::signed_power_crosscorr;
  }
  bool is_abs_power() const {
    return measure == Measure::abs_power_autocov || measure == Measure::abs_power_autocorr;
  }
  // The (f, g) pair the measure specializes: abs-power uses f = g = |x|^p,
  // signed-power uses f = identity, g = |x|^s sign(x).
  TransformSpec f() const;
  TransformSpec g() const;
  void validate() const;
  std::string label() const;
};

double apply_transform(double v, const TransformSpec& spec);

// Errors on non-finite input, naming the offending index.
void validate_series(std::span<const double> x);
std::vector<double> transform(std::span<const double> x, const TransformSpec& spec);

double sample_mean(std::span<const double> x);

// (1/T) sum_{t=h+1..T} (f(x_t)-mean_f)(g(x_{t-h})-mean_g); h >= 0, T > h.
double sample_cov_fg(std::span<const double> x, const TransformSpec& f,
                     const TransformSpec& g, int h);
// Correlation version; h >= 1.
double sample_corr_fg(std::span<const double> x, const TransformSpec& f,
                      const TransformSpec& g, int h);

double estimate_dependence(std::span<const double> x, const DependenceSpec& spec);

// Hot-path pieces working on already-transformed values (series of equal
// length); used by the group estimators and the Monte Carlo harness.
double centered_lag_sum(std::span<const double> fv, std::span<const double> gv, int h,
                        double mean_f, double mean_g);
double cov_from_transformed(std::span<const double> fv, std::span<const double> gv, int h);
double corr_from_transformed(std::span<const double> fv, std::span<const double> gv, int h);

}  // namespace powertail
