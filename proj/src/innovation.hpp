#pragma once

#include <vector>

#include "rng.hpp"

// Innovation laws for the AR(1)+ARCH/GARCH generator: standard normal, or the
// standardized skewed Student-t of Hansen (1994).  Both have mean 0, variance 1.
// The skewed-t with skewness 0 reduces to the variance-standardized Student-t.

namespace powertail {

enum class InnovationKind { standard_normal, skewed_t };

struct InnovationDist {
  InnovationKind kind = InnovationKind::standard_normal;
  double eta = 0.0;     // tail parameter, > 2
  double lambda = 0.0;  // skewness, in (-1, 1)

  void validate() const;
};

// Precomputed constants for one skewed-t law.
class SkewedT {
 public:
  SkewedT(double eta, double lambda);

  double pdf(double z) const;
  double log_pdf(double z) const;  // -inf for non-finite z
  double cdf(double z) const;
  double quantile(double u) const;
  // Density kink: the junction of the two pieces.
  double knot() const { return -a_ / b_; }

 private:
  double eta_, lambda_;
  double a_, b_, c_, log_bc_;
  double scale_;  // sqrt(eta/(eta-2)): maps z-space to t-space
};

double sample_innovation(const InnovationDist& dist, Philox& gen);
std::vector<double> sample_innovations(const InnovationDist& dist, Philox& gen, std::size_t n);

// Density of the innovation law, for quadrature; returns 0 for non-finite z.
double innovation_pdf(const InnovationDist& dist, double z);
double innovation_log_pdf(const InnovationDist& dist, double z);
// Points where the density is not smooth (skewed-t junction); empty for normal.
std::vector<double> innovation_breakpoints(const InnovationDist& dist);

}  // namespace powertail
