#include "powertail/powertail.h"

#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "dgp.hpp"
#include "error.hpp"
#include "group.hpp"
#include "hac.hpp"
#include "io.hpp"
#include "mc.hpp"
#include "series.hpp"
#include "tail.hpp"

using namespace powertail;

struct pt_series {
  std::vector<double> data;
};

struct pt_group_result {
  GroupTestResult r;
};

struct pt_panel {
  Panel p;
};

namespace {

thread_local std::string g_last_error;

pt_status set_error(pt_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

pt_status status_from_current_exception() {
  try {
    throw;
  } catch (const Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
      case ErrorCode::invalid: return PT_ERR_INVALID;
      case ErrorCode::data: return PT_ERR_DATA;
      case ErrorCode::numeric: return PT_ERR_NUMERIC;
      case ErrorCode::degenerate: return PT_ERR_DEGENERATE;
    }
    return PT_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PT_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PT_ERR_NUMERIC;
  } catch (...) {
    g_last_error = "unknown error";
    return PT_ERR_NUMERIC;
  }
}

template <typename F>
pt_status guarded(F&& f) {
  try {
    return f();
  } catch (...) {
    return status_from_current_exception();
  }
}

pt_status require(bool ok, const char* what) {
  return ok ? PT_OK : set_error(PT_ERR_INVALID, what);
}

Measure measure_from_int(int m) {
  switch (m) {
    case 0: return Measure::abs_power_autocov;
    case 1: return Measure::abs_power_autocorr;
    case 2: return Measure::signed_power_crosscov;
    case 3: return Measure::signed_power_crosscorr;
  }
  fail(ErrorCode::invalid, "measure code must be 0..3");
}

DependenceSpec make_spec(int measure, double exponent, int lag) {
  DependenceSpec spec{measure_from_int(measure), exponent, lag};
  spec.validate();
  return spec;
}

DgpSpec convert_dgp(const pt_dgp_spec* c) {
  if (!c) fail(ErrorCode::invalid, "null dgp spec");
  DgpSpec d;
  d.phi = c->phi;
  d.omega = c->omega;
  d.alpha = c->alpha;
  d.beta = c->beta;
  switch (c->innovation) {
    case 0: d.innovation = {InnovationKind::standard_normal, 0.0, 0.0}; break;
    case 1: d.innovation = {InnovationKind::skewed_t, c->eta, c->lambda}; break;
    default: fail(ErrorCode::invalid, "innovation code must be 0 (normal) or 1 (skewed t)");
  }
  d.length = c->length;
  d.burn_in = c->burn_in;
  d.seed = c->seed;
  return d;
}

Kernel kernel_from_int(int k) {
  if (k == 0) return Kernel::quadratic_spectral;
  if (k == 1) return Kernel::bartlett;
  fail(ErrorCode::invalid, "kernel code must be 0 (quadratic spectral) or 1 (Bartlett)");
}

std::vector<double> mac_weights(int lags, int weight_scheme) {
  if (lags < 1) fail(ErrorCode::invalid, "lags must be >= 1");
  if (weight_scheme == 0)
    return std::vector<double>(static_cast<std::size_t>(lags), 1.0 / lags);
  if (weight_scheme == 1) return variance_ratio_weights(lags);
  fail(ErrorCode::invalid, "weight_scheme must be 0 (equal) or 1 (variance ratio)");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* pt_version(void) { return kVersionString; }

const char* pt_last_error(void) { return g_last_error.c_str(); }

/* ---- series ---- */

pt_status pt_series_create(const double* data, size_t length, pt_series** out) {
  if (pt_status s = require(out != nullptr, "null output handle")) return s;
  if (pt_status s = require(data != nullptr || length == 0, "null data pointer")) return s;
  return guarded([&] {
    auto h = std::make_unique<pt_series>();
    h->data.assign(data, data + length);
    validate_series(h->data);
    *out = h.release();
    return PT_OK;
  });
}

void pt_series_free(pt_series* s) { delete s; }

size_t pt_series_length(const pt_series* s) { return s ? s->data.size() : 0; }

pt_status pt_series_copy(const pt_series* s, double* out, size_t capacity) {
  if (pt_status st = require(s != nullptr && out != nullptr, "null argument")) return st;
  if (capacity < s->data.size())
    return set_error(PT_ERR_INVALID, "capacity smaller than series length");
  std::memcpy(out, s->data.data(), s->data.size() * sizeof(double));
  return PT_OK;
}

/* ---- simulation ---- */

void pt_dgp_spec_init(pt_dgp_spec* spec) {
  if (!spec) return;
  spec->phi = 0.0;
  spec->omega = 0.1;
  spec->alpha = 0.0;
  spec->beta = 0.0;
  spec->innovation = 0;
  spec->eta = 0.0;
  spec->lambda = 0.0;
  spec->length = 0;
  spec->burn_in = 1000;
  spec->seed = 0;
  spec->stream = 0;
}

pt_status pt_simulate(const pt_dgp_spec* spec, pt_series** out) {
  if (pt_status s = require(out != nullptr, "null output handle")) return s;
  return guarded([&] {
    const DgpSpec d = convert_dgp(spec);
    auto h = std::make_unique<pt_series>();
    h->data = simulate_ar_arch(d, spec->stream);
    *out = h.release();
    return PT_OK;
  });
}

pt_status pt_dgp_tail_index(const pt_dgp_spec* spec, double* zeta) {
  if (pt_status s = require(zeta != nullptr, "null output")) return s;
  return guarded([&] {
    const DgpSpec d = convert_dgp(spec);
    *zeta = kesten_zeta(d.alpha, d.beta, d.innovation);
    return PT_OK;
  });
}

/* ---- dependence measures ---- */

pt_status pt_estimate(const pt_series* s, int measure, double exponent, int lag,
                      double* out) {
  if (pt_status st = require(s != nullptr && out != nullptr, "null argument")) return st;
  return guarded([&] {
    *out = estimate_dependence(s->data, make_spec(measure, exponent, lag));
    return PT_OK;
  });
}

/* ---- group test ---- */

pt_status pt_group_test(const pt_series* s, int measure, double exponent, int lag, int q,
                        double beta0, double level, pt_group_result** out) {
  if (pt_status st = require(s != nullptr && out != nullptr, "null argument")) return st;
  return guarded([&] {
    auto h = std::make_unique<pt_group_result>();
    h->r = run_group_test(s->data, make_spec(measure, exponent, lag), q, beta0, level);
    *out = h.release();
    return PT_OK;
  });
}

void pt_group_result_free(pt_group_result* r) { delete r; }

double pt_group_result_t_stat(const pt_group_result* r) { return r ? r->r.t_stat : kNaN; }
double pt_group_result_p_value(const pt_group_result* r) { return r ? r->r.p_value : kNaN; }
double pt_group_result_pooled(const pt_group_result* r) { return r ? r->r.pooled : kNaN; }
double pt_group_result_s_beta(const pt_group_result* r) { return r ? r->r.s_beta : kNaN; }

void pt_group_result_ci(const pt_group_result* r, double* lower, double* upper) {
  if (lower) *lower = r ? r->r.ci_lower : kNaN;
  if (upper) *upper = r ? r->r.ci_upper : kNaN;
}

int pt_group_result_q(const pt_group_result* r) { return r ? r->r.q : 0; }
int pt_group_result_reject(const pt_group_result* r) { return r && r->r.reject ? 1 : 0; }
int pt_group_result_degenerate(const pt_group_result* r) {
  return r && r->r.degenerate ? 1 : 0;
}

pt_status pt_group_result_estimates(const pt_group_result* r, double* out,
                                    size_t capacity) {
  if (pt_status st = require(r != nullptr && out != nullptr, "null argument")) return st;
  if (capacity < r->r.estimates.size())
    return set_error(PT_ERR_INVALID, "capacity smaller than group count");
  std::memcpy(out, r->r.estimates.data(), r->r.estimates.size() * sizeof(double));
  return PT_OK;
}

pt_status pt_group_critical_value(int q, double alpha, double* cv) {
  if (pt_status st = require(cv != nullptr, "null output")) return st;
  return guarded([&] {
    *cv = critical_value(q, alpha);
    return PT_OK;
  });
}

pt_status pt_group_p_bound(int q, double t, double* p) {
  if (pt_status st = require(p != nullptr, "null output")) return st;
  return guarded([&] {
    *p = p_value_bound(q, t);
    return PT_OK;
  });
}

/* ---- HAC ---- */

pt_status pt_hac_test(const pt_series* s, int measure, double exponent, int lag,
                      double beta0, int kernel, double bandwidth, double ci_level,
                      pt_hac_result* out) {
  if (pt_status st = require(s != nullptr && out != nullptr, "null argument")) return st;
  return guarded([&] {
    const HacResult r = hac_test(s->data, make_spec(measure, exponent, lag), beta0,
                                 kernel_from_int(kernel), bandwidth, ci_level);
    out->estimate = r.estimate;
    out->std_err = r.std_err;
    out->t_stat = r.t_stat;
    out->p_value = r.p_value;
    out->ci_lower = r.ci_lower;
    out->ci_upper = r.ci_upper;
    out->bandwidth = r.bandwidth;
    out->lrv_floored = r.lrv_floored ? 1 : 0;
    return PT_OK;
  });
}

/* ---- tail ---- */

pt_status pt_tail_index(const pt_series* s, double tail_fraction, pt_tail_estimate* out) {
  if (pt_status st = require(s != nullptr && out != nullptr, "null argument")) return st;
  return guarded([&] {
    const TailEstimate t = rank_size_zeta(s->data, tail_fraction);
    out->zeta = t.zeta;
    out->ci_lower = t.ci_lower;
    out->ci_upper = t.ci_upper;
    out->k = t.k;
    out->residual_ss = t.residual_ss;
    return PT_OK;
  });
}

pt_status pt_select_power(double zeta_ci_lower, double* s_out) {
  if (pt_status st = require(s_out != nullptr, "null output")) return st;
  return guarded([&]() -> pt_status {
    const auto s = select_power(zeta_ci_lower);
    if (!s)
      return set_error(PT_REFUSED,
                       "no admissible signed power: tail CI lower bound <= 2.2");
    *s_out = *s;
    return PT_OK;
  });
}

/* ---- aggregates ---- */

pt_status pt_mac(const pt_series* s, int lags, int weight_scheme, double exponent,
                 double* out) {
  if (pt_status st = require(s != nullptr && out != nullptr, "null argument")) return st;
  return guarded([&] {
    const std::vector<double> w = mac_weights(lags, weight_scheme);
    *out = mac_statistic(s->data, lags, w, exponent);
    return PT_OK;
  });
}

pt_status pt_mac_group_test(const pt_series* s, int lags, int weight_scheme,
                            double exponent, int q, double beta0, double level,
                            pt_group_result** out) {
  if (pt_status st = require(s != nullptr && out != nullptr, "null argument")) return st;
  return guarded([&] {
    const std::vector<double> w = mac_weights(lags, weight_scheme);
    auto h = std::make_unique<pt_group_result>();
    h->r = mac_group_test(s->data, lags, w, exponent, q, beta0, level);
    *out = h.release();
    return PT_OK;
  });
}

/* ---- panels and batch drivers ---- */

pt_status pt_panel_read_csv(const char* path, int prices_mode, pt_panel** out) {
  if (pt_status st = require(path != nullptr && out != nullptr, "null argument")) return st;
  return guarded([&] {
    auto h = std::make_unique<pt_panel>();
    h->p = read_returns_csv(path, prices_mode ? DataMode::prices : DataMode::returns);
    *out = h.release();
    return PT_OK;
  });
}

void pt_panel_free(pt_panel* p) { delete p; }

size_t pt_panel_count(const pt_panel* p) { return p ? p->p.names.size() : 0; }

const char* pt_panel_name(const pt_panel* p, size_t i) {
  if (!p || i >= p->p.names.size()) return nullptr;
  return p->p.names[i].c_str();
}

pt_status pt_panel_series(const pt_panel* p, size_t i, pt_series** out) {
  if (pt_status st = require(p != nullptr && out != nullptr, "null argument")) return st;
  if (i >= p->p.series.size()) return set_error(PT_ERR_INVALID, "column index out of range");
  return guarded([&] {
    auto h = std::make_unique<pt_series>();
    h->data = p->p.series[i];
    *out = h.release();
    return PT_OK;
  });
}

pt_status pt_write_series_csv(const pt_series* s, const char* name, const char* path) {
  if (pt_status st = require(s != nullptr && path != nullptr, "null argument")) return st;
  return guarded([&] {
    write_panel_csv(panel_from_series(s->data, name ? name : "SIM"), path);
    return PT_OK;
  });
}

pt_status pt_run_mc_preset(const char* config_json, const char* out_dir) {
  return guarded([&] {
    run_mc_preset(config_json ? config_json : "{}", out_dir ? out_dir : "");
    return PT_OK;
  });
}

pt_status pt_run_empirical(const char* csv_path, int prices_mode, const char* config_json,
                           const char* out_dir) {
  if (pt_status st = require(csv_path != nullptr, "null csv path")) return st;
  return guarded([&] {
    const Panel panel =
        read_returns_csv(csv_path, prices_mode ? DataMode::prices : DataMode::returns);
    const EmpiricalConfig cfg =
        empirical_config_from_json(config_json ? config_json : "{}");
    const EmpiricalReport report = run_empirical(panel, cfg);
    write_empirical_outputs(report, out_dir && *out_dir ? out_dir : ".");
    return PT_OK;
  });
}

}  // extern "C"
