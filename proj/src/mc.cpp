#include "mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "error.hpp"
#include "special.hpp"

namespace powertail {

namespace {

constexpr uint64_t kPilotStreamBase = 1ull << 62;  // keeps pilots off replication streams
constexpr std::size_t kPilotLength = 10'000'000;

struct MeanSd {
  double mean, sd;
};

MeanSd mean_sd(std::span<const double> v) {
  const double m = sample_mean(v);
  NeumaierSum ss;
  for (double e : v) ss.add((e - m) * (e - m));
  return {m, std::sqrt(ss.value() / static_cast<double>(v.size() - 1))};
}

double freq_se(double f, std::size_t n) {
  return std::sqrt(f * (1.0 - f) / static_cast<double>(n));
}

// Largest lag any method/spec pair needs, to validate the partition up front.
void validate_methods(const McConfig& c, const std::vector<DependenceSpec>& specs) {
  if (c.methods.empty()) fail(ErrorCode::invalid, "mc: no methods configured");
  for (const auto& m : c.methods) {
    if (!m.is_hac && m.q < 2) fail(ErrorCode::invalid, "mc: group method needs q >= 2");
    if (!m.is_hac)
      for (const auto& s : specs) make_partition(c.dgp.length, m.q, s.lag);
  }
}

}  // namespace

std::string MethodSpec::id() const {
  if (is_hac) return "hac_qs";
  return "t_q" + std::to_string(q);
}

void McConfig::validate() const {
  dgp.validate();
  spec.validate();
  if (replications < 100) fail(ErrorCode::invalid, "mc: need at least 100 replications");
  if (!(nominal_level > 0.0 && nominal_level < 1.0))
    fail(ErrorCode::invalid, "mc: nominal level must lie in (0,1)");
  validate_methods(*this, {spec});
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  int workers = threads;
  if (workers <= 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    workers = hc == 0 ? 1 : static_cast<int>(hc);
  }
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);  // drain remaining work
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> abs_t_statistics(std::span<const double> x,
                                     const std::vector<DependenceSpec>& specs,
                                     const std::vector<MethodSpec>& methods) {
  std::vector<double> out;
  out.reserve(specs.size() * methods.size());
  for (const auto& spec : specs) {
    const std::vector<double> fv = transform(x, spec.f());
    const std::vector<double> gv = transform(x, spec.g());
    for (const auto& m : methods) {
      if (m.is_hac) {
        const HacResult r = hac_test_transformed(fv, gv, spec, 0.0,
                                                 Kernel::quadratic_spectral, 0.0, 0.95);
        out.push_back(std::fabs(r.t_stat));
      } else {
        const std::vector<double> est = group_estimates_transformed(fv, gv, spec, m.q);
        const auto [mean, sd] = mean_sd(est);
        if (sd <= 0.0) {
          out.push_back(mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        } else {
          out.push_back(std::fabs(std::sqrt(static_cast<double>(m.q)) * mean / sd));
        }
      }
    }
  }
  return out;
}

std::vector<std::pair<double, double>> confidence_intervals_all(
    std::span<const double> x, const std::vector<DependenceSpec>& specs,
    const std::vector<MethodSpec>& methods, double coverage) {
  std::vector<std::pair<double, double>> out;
  out.reserve(specs.size() * methods.size());
  for (const auto& spec : specs) {
    const std::vector<double> fv = transform(x, spec.f());
    const std::vector<double> gv = transform(x, spec.g());
    for (const auto& m : methods) {
      if (m.is_hac) {
        const HacResult r = hac_test_transformed(fv, gv, spec, 0.0,
                                                 Kernel::quadratic_spectral, 0.0, coverage);
        out.emplace_back(r.ci_lower, r.ci_upper);
      } else {
        const std::vector<double> est = group_estimates_transformed(fv, gv, spec, m.q);
        out.push_back(confidence_interval(est, coverage));
      }
    }
  }
  return out;
}

McSummary mc_size_multi(const McConfig& config, const std::vector<DependenceSpec>& specs) {
  config.validate();
  for (const auto& s : specs) s.validate();
  validate_methods(config, specs);
  if (config.dgp.phi != 0.0)
    fail(ErrorCode::invalid, "mc_size: the null requires phi = 0 in the DGP");

  const std::size_t n = config.replications;
  const std::size_t cols = specs.size() * config.methods.size();
  std::vector<double> stats(n * cols);
  parallel_for(n, config.threads, [&](std::size_t r) {
    const std::vector<double> x = simulate_prevalidated(config.dgp, r);
    const std::vector<double> t = abs_t_statistics(x, specs, config.methods);
    std::copy(t.begin(), t.end(), stats.begin() + static_cast<std::ptrdiff_t>(r * cols));
  });

  // Critical values: group tests use the conservative two-sided cv at the
  // nominal level; the hac baseline uses the normal quantile.
  std::vector<double> cv(config.methods.size());
  for (std::size_t j = 0; j < config.methods.size(); ++j)
    cv[j] = config.methods[j].is_hac
                ? norm_quantile(1.0 - 0.5 * config.nominal_level)
                : critical_value(config.methods[j].q, config.nominal_level);

  McSummary out;
  for (std::size_t si = 0; si < specs.size(); ++si)
    for (std::size_t j = 0; j < config.methods.size(); ++j) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < n; ++r)
        if (stats[r * cols + si * config.methods.size() + j] > cv[j]) ++hits;
      const double f = static_cast<double>(hits) / static_cast<double>(n);
      out.rows.push_back({specs[si].exponent, config.methods[j].id(), f, freq_se(f, n), n,
                          specs[si].exponent});
    }
  return out;
}

McSummary mc_size(const McConfig& config) { return mc_size_multi(config, {config.spec}); }

McSummary mc_power_curve(const McConfig& config, std::span<const double> phi_grid) {
  config.validate();
  if (phi_grid.empty() || phi_grid.front() != 0.0)
    fail(ErrorCode::invalid, "mc_power_curve: phi grid must start at 0 (null calibration)");
  for (double phi : phi_grid)
    if (!(phi >= 0.0 && phi < 1.0)) fail(ErrorCode::invalid, "mc_power_curve: phi outside [0,1)");

  const std::size_t n = config.replications;
  const std::size_t n_methods = config.methods.size();
  const std::vector<DependenceSpec> specs{config.spec};

  McSummary out;
  std::vector<double> null_cv(n_methods);
  std::vector<double> stats(n * n_methods);
  for (std::size_t gi = 0; gi < phi_grid.size(); ++gi) {
    DgpSpec dgp = config.dgp;
    dgp.phi = phi_grid[gi];
    dgp.validate();
    parallel_for(n, config.threads, [&](std::size_t r) {
      const std::vector<double> x = simulate_prevalidated(dgp, r);  // stream r at every phi
      const std::vector<double> t = abs_t_statistics(x, specs, config.methods);
      std::copy(t.begin(), t.end(), stats.begin() + static_cast<std::ptrdiff_t>(r * n_methods));
    });
    if (gi == 0) {
      // Nearest-rank (1 - level) quantile of the null |t| draws.
      const std::size_t k = static_cast<std::size_t>(
          std::ceil((1.0 - config.nominal_level) * static_cast<double>(n)));
      for (std::size_t j = 0; j < n_methods; ++j) {
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = stats[r * n_methods + j];
        std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         col.end());
        null_cv[j] = col[k - 1];
        out.notes.emplace_back("size_adjusted_cv_" + config.methods[j].id(), null_cv[j]);
      }
    }
    for (std::size_t j = 0; j < n_methods; ++j) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < n; ++r)
        if (stats[r * n_methods + j] > null_cv[j]) ++hits;
      const double f = static_cast<double>(hits) / static_cast<double>(n);
      out.rows.push_back({phi_grid[gi], config.methods[j].id(), f, freq_se(f, n), n,
                          config.spec.exponent});
    }
  }
  return out;
}

double pilot_truth(const DgpSpec& dgp, const DependenceSpec& spec, std::size_t pilot_length,
                   uint64_t stream) {
  DgpSpec pilot = dgp;
  pilot.length = pilot_length;
  pilot.validate();
  const std::vector<double> x = simulate_prevalidated(pilot, stream);
  return estimate_dependence(x, spec);
}

McSummary mc_coverage(const McConfig& config, std::span<const double> alpha_grid,
                      std::span<const double> powers) {
  config.validate();
  if (alpha_grid.empty()) fail(ErrorCode::invalid, "mc_coverage: empty alpha grid");
  std::vector<double> pw(powers.begin(), powers.end());
  if (pw.empty()) pw.push_back(config.spec.exponent);

  const std::size_t n = config.replications;
  const std::size_t n_methods = config.methods.size();
  const double coverage_level = 0.95;

  McSummary out;
  for (std::size_t gi = 0; gi < alpha_grid.size(); ++gi) {
    DgpSpec dgp = config.dgp;
    dgp.alpha = alpha_grid[gi];
    dgp.validate();

    std::vector<DependenceSpec> specs;
    for (double p : pw) {
      DependenceSpec s = config.spec;
      s.exponent = p;
      s.validate();
      specs.push_back(s);
    }
    validate_methods(config, specs);

    // One big pilot per alpha gives every power its truth.
    std::vector<double> truths(pw.size());
    {
      DgpSpec pilot = dgp;
      pilot.length = kPilotLength;
      const std::vector<double> px = simulate_prevalidated(pilot, kPilotStreamBase + gi);
      for (std::size_t pi = 0; pi < pw.size(); ++pi) {
        truths[pi] = estimate_dependence(px, specs[pi]);
        out.notes.emplace_back(
            "truth_alpha" + std::to_string(alpha_grid[gi]) + "_p" + std::to_string(pw[pi]),
            truths[pi]);
      }
    }

    const std::size_t cols = specs.size() * n_methods;
    std::vector<uint8_t> covered(n * cols);
    parallel_for(n, config.threads, [&](std::size_t r) {
      const std::vector<double> x = simulate_prevalidated(dgp, r);
      const auto cis = confidence_intervals_all(x, specs, config.methods, coverage_level);
      for (std::size_t c = 0; c < cols; ++c) {
        const double truth = truths[c / n_methods];
        covered[r * cols + c] =
            (cis[c].first <= truth && truth <= cis[c].second) ? 1 : 0;
      }
    });

    for (std::size_t pi = 0; pi < pw.size(); ++pi)
      for (std::size_t j = 0; j < n_methods; ++j) {
        std::size_t hits = 0;
        for (std::size_t r = 0; r < n; ++r)
          if (covered[r * cols + pi * n_methods + j]) ++hits;
        const double f = static_cast<double>(hits) / static_cast<double>(n);
        out.rows.push_back(
            {alpha_grid[gi], config.methods[j].id(), f, freq_se(f, n), n, pw[pi]});
      }
  }
  return out;
}

std::vector<double> variance_ratio_weights(int H) {
  if (H < 1) fail(ErrorCode::invalid, "variance_ratio_weights: H must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(H));
  for (int h = 1; h <= H; ++h)
    w[static_cast<std::size_t>(h - 1)] =
        2.0 * (1.0 - static_cast<double>(h) / (static_cast<double>(H) + 1.0));
  return w;
}

namespace {

double mac_from_transformed(std::span<const double> fv, std::span<const double> gv, int H,
                            std::span<const double> weights) {
  NeumaierSum acc;
  for (int h = 1; h <= H; ++h)
    acc.add(weights[static_cast<std::size_t>(h - 1)] * corr_from_transformed(fv, gv, h));
  return acc.value();
}

}  // namespace

double mac_statistic(std::span<const double> x, int H, std::span<const double> weights,
                     double s) {
  if (H < 1) fail(ErrorCode::invalid, "mac_statistic: H must be >= 1");
  if (weights.size() != static_cast<std::size_t>(H))
    fail(ErrorCode::invalid, "mac_statistic: need exactly H weights");
  if (x.size() < static_cast<std::size_t>(H) + 2)
    fail(ErrorCode::invalid, "mac_statistic: series too short for H lags");
  const std::vector<double> fv = transform(x, {Transform::identity, 1.0});
  const std::vector<double> gv = transform(x, {Transform::signed_power, s});
  return mac_from_transformed(fv, gv, H, weights);
}

GroupTestResult mac_group_test(std::span<const double> x, int H,
                               std::span<const double> weights, double s, int q, double beta0,
                               double level) {
  if (H < 1) fail(ErrorCode::invalid, "mac_group_test: H must be >= 1");
  if (weights.size() != static_cast<std::size_t>(H))
    fail(ErrorCode::invalid, "mac_group_test: need exactly H weights");
  const GroupPartition part = make_partition(x.size(), q, H);
  const std::vector<double> fv = transform(x, {Transform::identity, 1.0});
  const std::vector<double> gv = transform(x, {Transform::signed_power, s});
  std::vector<double> est(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * part.group_size;
    const std::span<const double> fj(fv.data() + off, part.group_size);
    const std::span<const double> gj(gv.data() + off, part.group_size);
    try {
      est[static_cast<std::size_t>(j)] = mac_from_transformed(fj, gj, H, weights);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate)
        fail(ErrorCode::degenerate, "group " + std::to_string(j + 1) + ": " + e.what());
      throw;
    }
  }
  return assemble_group_test(std::move(est), q, beta0, level);
}

}  // namespace powertail
