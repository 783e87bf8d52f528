#include "tail.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"
#include "series.hpp"

namespace powertail {

TailEstimate rank_size_zeta(std::span<const double> x, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 0.5))
    fail(ErrorCode::invalid, "rank_size_zeta: tail_fraction must lie in (0, 0.5]");
  validate_series(x);
  const std::size_t T = x.size();
  const std::size_t k =
      static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(T)));
  if (k < 10)
    fail(ErrorCode::invalid, "rank_size_zeta: need at least 10 tail observations, got " +
                                 std::to_string(k));
  std::vector<double> sizes(T);
  for (std::size_t i = 0; i < T; ++i) sizes[i] = std::fabs(x[i]);
  std::nth_element(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(k) - 1,
                   sizes.end(), std::greater<double>());
  sizes.resize(k);
  std::sort(sizes.begin(), sizes.end(), std::greater<double>());
  if (!(sizes.back() > 0.0))
    fail(ErrorCode::data, "rank_size_zeta: tail contains zero magnitudes");

  // OLS of log(rank - 1/2) on log(size) over the k tail points.
  std::vector<double> lx(k), ly(k);
  for (std::size_t r = 0; r < k; ++r) {
    lx[r] = std::log(sizes[r]);
    ly[r] = std::log(static_cast<double>(r + 1) - 0.5);
  }
  const double mx = sample_mean(lx), my = sample_mean(ly);
  NeumaierSum sxy, sxx;
  for (std::size_t r = 0; r < k; ++r) {
    sxy.add((lx[r] - mx) * (ly[r] - my));
    sxx.add((lx[r] - mx) * (lx[r] - mx));
  }
  if (sxx.value() <= 0.0)
    fail(ErrorCode::degenerate, "rank_size_zeta: tail magnitudes are all equal");
  const double slope = sxy.value() / sxx.value();
  TailEstimate est;
  est.zeta = -slope;
  if (!(est.zeta > 0.0))
    fail(ErrorCode::numeric, "rank_size_zeta: non-positive tail index estimate");
  NeumaierSum rss;
  for (std::size_t r = 0; r < k; ++r) {
    const double resid = (ly[r] - my) - slope * (lx[r] - mx);
    rss.add(resid * resid);
  }
  est.residual_ss = rss.value();
  est.k = k;
  const double se = est.zeta * std::sqrt(2.0 / static_cast<double>(k));
  est.ci_lower = est.zeta - 1.96 * se;
  est.ci_upper = est.zeta + 1.96 * se;
  return est;
}

std::optional<double> select_power(double ci_lower) {
  if (!(ci_lower > 0.0)) fail(ErrorCode::invalid, "select_power: ci_lower must be positive");
  if (ci_lower > 3.0) return 0.5;
  if (ci_lower > 2.5) return 0.25;
  if (ci_lower > 2.2) return 0.1;
  return std::nullopt;
}

}  // namespace powertail
