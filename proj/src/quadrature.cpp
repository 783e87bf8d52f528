#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "error.hpp"

namespace powertail {

namespace {

// QUADPACK dqk15 nodes and weights on [-1,1].
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct Piece {
  double a, b;
  double value;  // K15 estimate
  double err;    // |K15 - G7|
};

Piece eval_gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = kWgk[7] * f(c);
  double resg = kWg[3] * f(c);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  Piece p;
  p.a = a;
  p.b = b;
  p.value = resk * h;
  p.err = std::fabs((resk - resg) * h);
  return p;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_intervals) {
  if (!(a < b)) {
    if (a == b) return 0.0;
    fail(ErrorCode::invalid, "integrate_adaptive: interval endpoints out of order");
  }
  auto cmp = [](const Piece& x, const Piece& y) { return x.err < y.err; };
  std::priority_queue<Piece, std::vector<Piece>, decltype(cmp)> heap(cmp);
  Piece whole = eval_gk15(f, a, b);
  double total = whole.value, total_err = whole.err;
  heap.push(whole);
  int n = 1;
  while (n < max_intervals) {
    const double scale = std::max(abs_tol, rel_tol * std::fabs(total));
    if (total_err <= scale) break;
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // interval at double resolution
      total_err -= worst.err;
      continue;
    }
    Piece left = eval_gk15(f, worst.a, mid);
    Piece right = eval_gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  if (!std::isfinite(total)) fail(ErrorCode::numeric, "integrate_adaptive: non-finite integral");
  return total;
}

double integrate_real_line(const std::function<double(double)>& f,
                           std::vector<double> breakpoints, double abs_tol,
                           double rel_tol) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  if (breakpoints.empty()) breakpoints.push_back(0.0);

  constexpr double kHalfPi = 1.57079632679489661923;
  double total = 0.0;
  // Finite middle pieces.
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    total += integrate_adaptive(f, breakpoints[i], breakpoints[i + 1], abs_tol, rel_tol);
  // Tails via z = edge +/- tan(u); sec^2 weight, u in (0, pi/2).
  const double left = breakpoints.front(), right = breakpoints.back();
  auto right_tail = [&f, right](double u) {
    const double t = std::tan(u);
    const double w = 1.0 + t * t;
    const double v = f(right + t);
    return (v == 0.0) ? 0.0 : v * w;
  };
  auto left_tail = [&f, left](double u) {
    const double t = std::tan(u);
    const double w = 1.0 + t * t;
    const double v = f(left - t);
    return (v == 0.0) ? 0.0 : v * w;
  };
  total += integrate_adaptive(right_tail, 0.0, kHalfPi, abs_tol, rel_tol);
  total += integrate_adaptive(left_tail, 0.0, kHalfPi, abs_tol, rel_tol);
  return total;
}

}  // namespace powertail
