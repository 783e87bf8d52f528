#ifndef POWERTAIL_H
#define POWERTAIL_H

/* C API for the powertail library.
 *
 * Conventions:
 *   - every fallible call returns a pt_status; PT_OK is 0
 *   - on failure, pt_last_error() returns a thread-local message describing
 *     the most recent failing call on this thread
 *   - opaque handles are created by pt_*_create/pt_* factories and released
 *     with the matching pt_*_free; freeing NULL is a no-op
 *   - output parameters are written only on PT_OK (except where noted)
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pt_status {
  PT_OK = 0,
  PT_ERR_INVALID = 1,    /* bad argument or configuration */
  PT_ERR_DATA = 2,       /* input data unusable (file, parse, non-finite, too short) */
  PT_ERR_NUMERIC = 3,    /* computation failed to produce a reliable number */
  PT_ERR_DEGENERATE = 4, /* estimator degenerate on this input (e.g. zero variance) */
  PT_REFUSED = 5         /* request declined by a rule (e.g. no admissible power) */
} pt_status;

const char* pt_version(void);
/* Message for the last failing call on the calling thread; never NULL. */
const char* pt_last_error(void);

/* ---- series ------------------------------------------------------------- */

typedef struct pt_series pt_series;

pt_status pt_series_create(const double* data, size_t length, pt_series** out);
void pt_series_free(pt_series* s);
size_t pt_series_length(const pt_series* s);
/* Copies the observations into out (capacity >= length). */
pt_status pt_series_copy(const pt_series* s, double* out, size_t capacity);

/* ---- simulation ----------------------------------------------------------
 * AR(1) returns with GARCH(1,1) errors:
 *   R_t = phi R_{t-1} + eps_t,  eps_t = sigma_t Z_t,
 *   sigma_t^2 = omega + alpha eps_{t-1}^2 + beta sigma_{t-1}^2.
 * innovation: 0 = standard normal, 1 = skewed t (eta > 2, |lambda| < 1),
 * standardized to mean 0 variance 1.  Simulation refuses non-stationary
 * volatility parameterizations. */

typedef struct pt_dgp_spec {
  double phi;
  double omega;
  double alpha;
  double beta;
  int innovation;
  double eta;
  double lambda;
  size_t length;
  size_t burn_in;
  uint64_t seed;
  uint64_t stream; /* independent replication index for one seed */
} pt_dgp_spec;

/* Fills spec with the documented defaults (omega 0.1, burn_in 1000, ...). */
void pt_dgp_spec_init(pt_dgp_spec* spec);
pt_status pt_simulate(const pt_dgp_spec* spec, pt_series** out);
/* Tail index of |R_t| implied by the volatility recursion (Kesten root). */
pt_status pt_dgp_tail_index(const pt_dgp_spec* spec, double* zeta);

/* ---- dependence measures --------------------------------------------------
 * measure: 0 = absolute-power autocovariance  gamma_{|R|^p}(h)
 *          1 = absolute-power autocorrelation rho_{|R|^p}(h)
 *          2 = signed-power cross-covariance  gamma'(h), g(x) = |x|^s sign(x)
 *          3 = signed-power cross-correlation rho'(h)
 * Correlations require lag >= 1, covariances lag >= 0; exponent > 0. */

pt_status pt_estimate(const pt_series* s, int measure, double exponent, int lag,
                      double* out);

/* ---- group-based robust t test ------------------------------------------ */

typedef struct pt_group_result pt_group_result;

pt_status pt_group_test(const pt_series* s, int measure, double exponent, int lag, int q,
                        double beta0, double level, pt_group_result** out);
void pt_group_result_free(pt_group_result* r);
double pt_group_result_t_stat(const pt_group_result* r);
double pt_group_result_p_value(const pt_group_result* r);
double pt_group_result_pooled(const pt_group_result* r);
double pt_group_result_s_beta(const pt_group_result* r);
void pt_group_result_ci(const pt_group_result* r, double* lower, double* upper);
int pt_group_result_q(const pt_group_result* r);
int pt_group_result_reject(const pt_group_result* r);
int pt_group_result_degenerate(const pt_group_result* r);
/* Copies the q per-group estimates into out (capacity >= q). */
pt_status pt_group_result_estimates(const pt_group_result* r, double* out, size_t capacity);

/* Conservative critical value / p-value bound for the group t statistic.
 * Valid for alpha <= 2 Phi(-sqrt(3)) at any q >= 2, and up to 0.1 for
 * 2 <= q <= 14. */
pt_status pt_group_critical_value(int q, double alpha, double* cv);
pt_status pt_group_p_bound(int q, double t, double* p);

/* ---- HAC baseline --------------------------------------------------------
 * kernel: 0 = quadratic spectral, 1 = Bartlett.
 * bandwidth <= 0 selects the Andrews AR(1) plug-in. */

typedef struct pt_hac_result {
  double estimate;
  double std_err;
  double t_stat;
  double p_value;
  double ci_lower;
  double ci_upper;
  double bandwidth;
  int lrv_floored; /* 1 when the long-run variance hit the numeric floor */
} pt_hac_result;

pt_status pt_hac_test(const pt_series* s, int measure, double exponent, int lag,
                      double beta0, int kernel, double bandwidth, double ci_level,
                      pt_hac_result* out);

/* ---- tail index ----------------------------------------------------------- */

typedef struct pt_tail_estimate {
  double zeta;
  double ci_lower;
  double ci_upper;
  size_t k;           /* order statistics used */
  double residual_ss; /* rank-size regression residual sum of squares */
} pt_tail_estimate;

pt_status pt_tail_index(const pt_series* s, double tail_fraction, pt_tail_estimate* out);
/* Signed-power choice from the tail CI lower bound; PT_REFUSED (out untouched)
 * when no admissible power exists. */
pt_status pt_select_power(double zeta_ci_lower, double* s_out);

/* ---- dependence aggregates ------------------------------------------------ */

/* Weighted mean of signed-power autocorrelations over lags 1..lags.
 * weight_scheme: 0 = equal 1/H, 1 = variance-ratio 2(1 - h/(H+1)). */
pt_status pt_mac(const pt_series* s, int lags, int weight_scheme, double exponent,
                 double* out);
pt_status pt_mac_group_test(const pt_series* s, int lags, int weight_scheme,
                            double exponent, int q, double beta0, double level,
                            pt_group_result** out);

/* ---- panels and batch drivers --------------------------------------------- */

typedef struct pt_panel pt_panel;

/* CSV with header date,NAME[,NAME...], strictly increasing ISO dates, finite
 * cells.  prices_mode != 0 converts columns to 100 (P_t/P_{t-1} - 1). */
pt_status pt_panel_read_csv(const char* path, int prices_mode, pt_panel** out);
void pt_panel_free(pt_panel* p);
size_t pt_panel_count(const pt_panel* p);
/* Instrument name; NULL when i is out of range. */
const char* pt_panel_name(const pt_panel* p, size_t i);
pt_status pt_panel_series(const pt_panel* p, size_t i, pt_series** out);

/* Writes one series as a single-column panel CSV with synthetic dates. */
pt_status pt_write_series_csv(const pt_series* s, const char* name, const char* path);

/* Monte Carlo study presets (table1, fig1, fig2, fig3); config_json holds
 * preset/scale/replications/seed/threads/T.  Writes CSVs and a JSON manifest
 * into out_dir. */
pt_status pt_run_mc_preset(const char* config_json, const char* out_dir);

/* Full empirical pipeline on a panel CSV; writes empirical_report.json and
 * companion CSV tables into out_dir. */
pt_status pt_run_empirical(const char* csv_path, int prices_mode, const char* config_json,
                           const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* POWERTAIL_H */
