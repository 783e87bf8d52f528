#pragma once

#include <optional>
#include <span>

// Rank-size tail index regression: sort |x| descending, keep the top
// k = ceil(frac*T), regress log(rank - 1/2) on log(size).  The estimate is
// minus the slope, with standard error zeta*sqrt(2/k).

namespace powertail {

struct TailEstimate {
  double zeta = 0.0;
  double ci_lower = 0.0, ci_upper = 0.0;  // 95%, normal approximation
  std::size_t k = 0;                      // tail observations used
  double residual_ss = 0.0;               // regression residual sum of squares
};

TailEstimate rank_size_zeta(std::span<const double> x, double tail_fraction);

// Power selection for the market-efficiency tests, driven by the lower CI
// endpoint: the chosen s keeps the group test's moment requirement 2(1+s)
// strictly below ci_lower.  nullopt = refusal (tails too heavy for any rule).
std::optional<double> select_power(double ci_lower);

}  // namespace powertail
