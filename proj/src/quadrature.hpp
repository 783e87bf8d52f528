#pragma once

#include <functional>
#include <vector>

// Adaptive Gauss-Kronrod (15 point) quadrature.  Finite intervals are refined
// by bisecting the interval with the largest |K15-G7| discrepancy; unbounded
// tails are mapped through z = edge +/- tan(u).  Endpoint singularities that
// are integrable are handled by the refinement (GK nodes are interior).

namespace powertail {

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-10, double rel_tol = 1e-10,
                          int max_intervals = 20000);

// Integral of f over the whole real line, split at the given (sorted or not)
// breakpoints plus the two tails.
double integrate_real_line(const std::function<double(double)>& f,
                           std::vector<double> breakpoints, double abs_tol = 1e-10,
                           double rel_tol = 1e-10);

}  // namespace powertail
