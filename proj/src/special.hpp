#pragma once

// Scalar special functions used by the estimators: standard normal cdf/quantile,
// regularized incomplete beta, and Student-t cdf/pdf/quantile.  All routines are
// plain double precision and thread-safe.

namespace powertail {

double norm_pdf(double x);
double norm_cdf(double x);
// p in (0,1) required.
double norm_quantile(double p);

double lbeta(double a, double b);
// Regularized incomplete beta I_x(a,b), a,b > 0, x in [0,1].
double inc_beta(double a, double b, double x);
// Inverse of inc_beta in x for fixed (a,b); y in [0,1].
double inc_beta_inv(double a, double b, double y);

double student_t_pdf(double x, double df);
double student_t_cdf(double x, double df);
// P(|T_df| > x). Computed directly from the incomplete beta, so small tails
// keep full relative precision (no 1-cdf cancellation).
double student_t_two_sided_tail(double x, double df);
double student_t_quantile(double p, double df);

}  // namespace powertail
