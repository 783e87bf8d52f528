#include "innovation.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"
#include "special.hpp"

namespace powertail {

namespace {
constexpr double kPi = 3.14159265358979323846;

double lgamma_ts(double x) {
#ifdef __unix__
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}
}  // namespace

void InnovationDist::validate() const {
  if (kind == InnovationKind::standard_normal) return;
  if (!(eta > 2.0)) fail(ErrorCode::invalid, "skewed_t: eta must exceed 2 (unit variance requires it)");
  if (!(lambda > -1.0 && lambda < 1.0)) fail(ErrorCode::invalid, "skewed_t: lambda must lie in (-1,1)");
}

SkewedT::SkewedT(double eta, double lambda) : eta_(eta), lambda_(lambda) {
  if (!(eta > 2.0)) fail(ErrorCode::invalid, "skewed_t: eta must exceed 2");
  if (!(lambda > -1.0 && lambda < 1.0)) fail(ErrorCode::invalid, "skewed_t: lambda must lie in (-1,1)");
  c_ = std::exp(lgamma_ts(0.5 * (eta + 1.0)) - lgamma_ts(0.5 * eta) - 0.5 * std::log(kPi * (eta - 2.0)));
  a_ = 4.0 * lambda * c_ * (eta - 2.0) / (eta - 1.0);
  const double b2 = 1.0 + 3.0 * lambda * lambda - a_ * a_;
  b_ = std::sqrt(b2);
  log_bc_ = std::log(b_ * c_);
  scale_ = std::sqrt(eta / (eta - 2.0));
}

double SkewedT::log_pdf(double z) const {
  if (!std::isfinite(z)) return -std::numeric_limits<double>::infinity();
  const double t = b_ * z + a_;
  const double side = (z < knot()) ? (1.0 - lambda_) : (1.0 + lambda_);
  const double w = t / side;
  return log_bc_ - 0.5 * (eta_ + 1.0) * std::log1p(w * w / (eta_ - 2.0));
}

double SkewedT::pdf(double z) const { return std::exp(log_pdf(z)); }

double SkewedT::cdf(double z) const {
  if (!std::isfinite(z)) return z > 0.0 ? 1.0 : 0.0;
  const double t = b_ * z + a_;
  if (z < knot()) {
    return (1.0 - lambda_) * student_t_cdf(scale_ * t / (1.0 - lambda_), eta_);
  }
  return 0.5 * (1.0 - lambda_) +
         (1.0 + lambda_) * (student_t_cdf(scale_ * t / (1.0 + lambda_), eta_) - 0.5);
}

double SkewedT::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) fail(ErrorCode::invalid, "skewed_t quantile: u must lie in (0,1)");
  const double thr = 0.5 * (1.0 - lambda_);
  double z;
  if (u < thr) {
    const double q = student_t_quantile(u / (1.0 - lambda_), eta_);
    z = ((1.0 - lambda_) * q / scale_ - a_) / b_;
  } else {
    const double q = student_t_quantile(0.5 + (u - thr) / (1.0 + lambda_), eta_);
    z = ((1.0 + lambda_) * q / scale_ - a_) / b_;
  }
  return z;
}

double sample_innovation(const InnovationDist& dist, Philox& gen) {
  if (dist.kind == InnovationKind::standard_normal) return gen.next_normal();
  const SkewedT st(dist.eta, dist.lambda);
  return st.quantile(gen.next_uniform());
}

std::vector<double> sample_innovations(const InnovationDist& dist, Philox& gen, std::size_t n) {
  std::vector<double> out(n);
  if (dist.kind == InnovationKind::standard_normal) {
    for (auto& v : out) v = gen.next_normal();
  } else {
    const SkewedT st(dist.eta, dist.lambda);
    for (auto& v : out) v = st.quantile(gen.next_uniform());
  }
  return out;
}

double innovation_pdf(const InnovationDist& dist, double z) {
  return std::exp(innovation_log_pdf(dist, z));
}

double innovation_log_pdf(const InnovationDist& dist, double z) {
  if (!std::isfinite(z)) return -std::numeric_limits<double>::infinity();
  if (dist.kind == InnovationKind::standard_normal) {
    return -0.5 * z * z - 0.5 * std::log(2.0 * kPi);
  }
  const SkewedT st(dist.eta, dist.lambda);
  return st.log_pdf(z);
}

std::vector<double> innovation_breakpoints(const InnovationDist& dist) {
  if (dist.kind == InnovationKind::standard_normal) return {};
  const SkewedT st(dist.eta, dist.lambda);
  return {st.knot()};
}

}  // namespace powertail
