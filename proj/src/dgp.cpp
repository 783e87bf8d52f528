#include "dgp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "error.hpp"
#include "quadrature.hpp"

namespace powertail {

namespace {

// Integrand evaluation stays in log space: (alpha z^2 + beta)^{zeta/2} can
// overflow long before the density underflows, but their product cannot.
std::function<double(double)> kesten_integrand(double alpha, double beta,
                                               const InnovationDist& dist, double zeta) {
  if (dist.kind == InnovationKind::standard_normal) {
    return [alpha, beta, zeta](double z) {
      if (!std::isfinite(z)) return 0.0;
      const double l = 0.5 * zeta * std::log(alpha * z * z + beta) - 0.5 * z * z -
                       0.91893853320467274178;  // log sqrt(2 pi)
      return std::exp(l);
    };
  }
  const SkewedT st(dist.eta, dist.lambda);
  return [alpha, beta, zeta, st](double z) {
    if (!std::isfinite(z)) return 0.0;
    const double l = 0.5 * zeta * std::log(alpha * z * z + beta) + st.log_pdf(z);
    return std::exp(l);
  };
}

std::vector<double> integrand_breakpoints(double /*alpha*/, double beta,
                                          const InnovationDist& dist) {
  std::vector<double> bp = innovation_breakpoints(dist);
  bp.push_back(0.0);  // log singularity (beta = 0) and symmetry point
  (void)beta;
  return bp;
}

}  // namespace

double log_moment(double alpha, double beta, const InnovationDist& dist) {
  dist.validate();
  if (alpha < 0.0 || beta < 0.0) fail(ErrorCode::invalid, "log_moment: alpha, beta must be >= 0");
  if (alpha == 0.0) {
    if (beta == 0.0) fail(ErrorCode::invalid, "log_moment: alpha = beta = 0 has no recursion");
    return std::log(beta);
  }
  std::function<double(double)> f;
  if (dist.kind == InnovationKind::standard_normal) {
    f = [alpha, beta](double z) {
      if (!std::isfinite(z)) return 0.0;
      const double d = std::exp(-0.5 * z * z - 0.91893853320467274178);
      if (d == 0.0) return 0.0;
      return std::log(alpha * z * z + beta) * d;
    };
  } else {
    const SkewedT st(dist.eta, dist.lambda);
    f = [alpha, beta, st](double z) {
      if (!std::isfinite(z)) return 0.0;
      const double d = std::exp(st.log_pdf(z));
      if (d == 0.0) return 0.0;
      return std::log(alpha * z * z + beta) * d;
    };
  }
  return integrate_real_line(f, integrand_breakpoints(alpha, beta, dist), 1e-11, 1e-11);
}

double kesten_moment(double alpha, double beta, const InnovationDist& dist, double zeta) {
  dist.validate();
  if (!(alpha >= 0.0 && beta >= 0.0)) fail(ErrorCode::invalid, "kesten_moment: alpha, beta must be >= 0");
  if (!(zeta > 0.0)) fail(ErrorCode::invalid, "kesten_moment: zeta must be positive");
  return integrate_real_line(kesten_integrand(alpha, beta, dist, zeta),
                             integrand_breakpoints(alpha, beta, dist), 1e-11, 1e-11);
}

double kesten_zeta(double alpha, double beta, const InnovationDist& dist) {
  dist.validate();
  if (!(alpha > 0.0)) fail(ErrorCode::invalid, "kesten_zeta: alpha must be positive");
  if (beta < 0.0) fail(ErrorCode::invalid, "kesten_zeta: beta must be >= 0");
  if (!(log_moment(alpha, beta, dist) < 0.0))
    fail(ErrorCode::invalid, "kesten_zeta: recursion is not strictly stationary (E log >= 0)");

  // Moments of order zeta need E|Z|^zeta < inf; for the skewed-t that fails at
  // zeta = eta, so the bracket must stay strictly below it.
  const double zeta_cap = (dist.kind == InnovationKind::skewed_t)
                              ? dist.eta * (1.0 - 1e-9)
                              : 64.0;
  auto g = [&](double zeta) { return kesten_moment(alpha, beta, dist, zeta) - 1.0; };

  const double lo0 = 1e-3;
  if (g(lo0) >= 0.0)
    fail(ErrorCode::numeric, "kesten_zeta: moment already >= 1 at zeta = 1e-3");
  double hi = 1.0;
  while (hi < zeta_cap && g(std::min(hi, zeta_cap)) < 0.0) hi *= 2.0;
  hi = std::min(hi, zeta_cap);
  if (g(hi) < 0.0)
    fail(ErrorCode::numeric,
         "kesten_zeta: no sign change up to zeta = " + std::to_string(hi) +
             " (root at or beyond the moment boundary)");
  double lo = lo0;
  // Bisection; the integrand is smooth in zeta so 60 halvings reach ~1e-15.
  for (int it = 0; it < 100 && (hi - lo) > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void DgpSpec::validate() const {
  innovation.validate();
  if (!(omega > 0.0)) fail(ErrorCode::invalid, "dgp: omega must be positive");
  if (alpha < 0.0 || beta < 0.0) fail(ErrorCode::invalid, "dgp: alpha, beta must be >= 0");
  if (!(phi >= 0.0 && phi < 1.0)) fail(ErrorCode::invalid, "dgp: phi must lie in [0,1)");
  if (length == 0) fail(ErrorCode::invalid, "dgp: length must be positive");
  if (alpha == 0.0) {
    if (beta >= 1.0) fail(ErrorCode::invalid, "dgp: beta >= 1 with alpha = 0 is non-stationary");
  } else if (beta > 0.0 || alpha > 0.0) {
    if (!(log_moment(alpha, beta, innovation) < 0.0))
      fail(ErrorCode::invalid, "dgp: variance recursion is not strictly stationary (E log >= 0)");
  }
}

std::vector<double> simulate_prevalidated(const DgpSpec& spec, uint64_t stream) {
  Philox gen(spec.seed, stream);

  const double denom = 1.0 - spec.alpha - spec.beta;
  double s2 = (denom > 0.0) ? spec.omega / denom : spec.omega;
  double r = 0.0;

  const std::size_t total = spec.burn_in + spec.length;
  std::vector<double> z = sample_innovations(spec.innovation, gen, total);
  std::vector<double> out;
  out.reserve(spec.length);
  for (std::size_t t = 0; t < total; ++t) {
    const double eps = std::sqrt(s2) * z[t];
    r = spec.phi * r + eps;
    if (t >= spec.burn_in) out.push_back(r);
    s2 = spec.omega + spec.alpha * eps * eps + spec.beta * s2;
  }
  return out;
}

std::vector<double> simulate_ar_arch(const DgpSpec& spec, uint64_t stream) {
  spec.validate();
  return simulate_prevalidated(spec, stream);
}

}  // namespace powertail
