#pragma once

#include <cstdint>
#include <vector>

#include "innovation.hpp"

// AR(1) in the mean, ARCH/GARCH(1,1) in the variance:
//   R_t = phi R_{t-1} + eps_t,  eps_t = sigma_t Z_t,
//   sigma_t^2 = omega + alpha eps_{t-1}^2 + beta sigma_{t-1}^2.
// Strict stationarity of the variance recursion requires E log(alpha Z^2 + beta) < 0,
// which is checked numerically at validation.  The tail index of |R| is the
// root zeta of the Kesten equation E[(alpha Z^2 + beta)^{zeta/2}] = 1.

namespace powertail {

struct DgpSpec {
  double phi = 0.0;
  double omega = 0.1;
  double alpha = 0.0;
  double beta = 0.0;
  InnovationDist innovation;
  std::size_t length = 0;
  std::size_t burn_in = 1000;
  uint64_t seed = 0;

  void validate() const;
};

// E[log(alpha Z^2 + beta)] under the given innovation law (quadrature).
double log_moment(double alpha, double beta, const InnovationDist& dist);

// E[(alpha Z^2 + beta)^{zeta/2}] under the given innovation law (quadrature).
double kesten_moment(double alpha, double beta, const InnovationDist& dist, double zeta);

// Unique positive root of the Kesten equation.  Requires alpha > 0 and a
// strictly stationary recursion; for the skewed-t the root must stay below eta.
double kesten_zeta(double alpha, double beta, const InnovationDist& dist);

// Simulate; stream selects an independent replication under the same seed.
std::vector<double> simulate_ar_arch(const DgpSpec& spec, uint64_t stream = 0);
// Skips the (quadrature-backed) validation; for harness loops that validated
// the spec once up front.
std::vector<double> simulate_prevalidated(const DgpSpec& spec, uint64_t stream);

}  // namespace powertail
