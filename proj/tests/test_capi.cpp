#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <powertail/powertail.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "powertail_capi_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Series {
  pt_series* h = nullptr;
  explicit Series(const std::vector<double>& v) {
    REQUIRE(pt_series_create(v.data(), v.size(), &h) == PT_OK);
  }
  ~Series() { pt_series_free(h); }
  Series(const Series&) = delete;
  Series& operator=(const Series&) = delete;
};

std::vector<double> copy_out(pt_series* s) {
  std::vector<double> v(pt_series_length(s));
  REQUIRE(pt_series_copy(s, v.data(), v.size()) == PT_OK);
  return v;
}

std::vector<double> power_law_series(std::size_t T, double zeta, unsigned seed) {
  std::mt19937 gen(seed);
  std::vector<double> x(T);
  for (std::size_t r = 0; r < T; ++r) {
    const double mag = std::pow(static_cast<double>(r + 1) - 0.5, -1.0 / zeta);
    x[r] = (gen() & 1u) ? mag : -mag;
  }
  std::shuffle(x.begin(), x.end(), gen);
  return x;
}

}  // namespace

TEST_CASE("version and error strings are always present") {
  REQUIRE(pt_version() != nullptr);
  CHECK(std::strlen(pt_version()) > 0);
  REQUIRE(pt_last_error() != nullptr);
}

TEST_CASE("series lifecycle and data validation") {
  const std::vector<double> v = {1.0, 3.0, 2.0, 4.0};
  Series s(v);
  CHECK(pt_series_length(s.h) == 4);
  CHECK(copy_out(s.h) == v);
  double small[2];
  CHECK(pt_series_copy(s.h, small, 2) == PT_ERR_INVALID);
  CHECK(pt_series_create(nullptr, 4, nullptr) == PT_ERR_INVALID);
  // non-finite input names the offending index
  std::vector<double> bad = {1.0, 2.0, std::nan(""), 4.0};
  pt_series* out = nullptr;
  CHECK(pt_series_create(bad.data(), bad.size(), &out) == PT_ERR_DATA);
  CHECK(std::string(pt_last_error()).find("2") != std::string::npos);
  CHECK(out == nullptr);
  // null-handle accessors are inert
  CHECK(pt_series_length(nullptr) == 0);
  pt_series_free(nullptr);
}

TEST_CASE("simulation is deterministic per (seed, stream)") {
  pt_dgp_spec spec;
  pt_dgp_spec_init(&spec);
  CHECK(spec.omega == 0.1);
  CHECK(spec.burn_in == 1000);
  CHECK(spec.innovation == 0);
  spec.alpha = 0.2;
  spec.beta = 0.5;
  spec.length = 300;
  spec.seed = 9;
  pt_series *a = nullptr, *b = nullptr, *c = nullptr;
  REQUIRE(pt_simulate(&spec, &a) == PT_OK);
  REQUIRE(pt_simulate(&spec, &b) == PT_OK);
  spec.stream = 1;
  REQUIRE(pt_simulate(&spec, &c) == PT_OK);
  CHECK(copy_out(a) == copy_out(b));
  CHECK(copy_out(a) != copy_out(c));
  pt_series_free(a);
  pt_series_free(b);
  pt_series_free(c);
  // non-stationary volatility is refused up front (beta = 1 forces
  // E log(beta + alpha Z^2) > 0 for any alpha > 0)
  spec.alpha = 0.1;
  spec.beta = 1.0;
  pt_series* d = nullptr;
  CHECK(pt_simulate(&spec, &d) == PT_ERR_INVALID);
  CHECK(d == nullptr);
}

TEST_CASE("kesten tail index anchor through the c api") {
  pt_dgp_spec spec;
  pt_dgp_spec_init(&spec);
  spec.alpha = 1.0 / std::sqrt(3.0);  // arch(1), normal: zeta = 4
  spec.length = 10;
  double zeta = 0.0;
  REQUIRE(pt_dgp_tail_index(&spec, &zeta) == PT_OK);
  CHECK(zeta == doctest::Approx(4.0).epsilon(1e-6));
  spec.alpha = 0.0;
  CHECK(pt_dgp_tail_index(&spec, &zeta) == PT_ERR_INVALID);
}

TEST_CASE("estimates match hand-computed values") {
  Series s({1.0, 3.0, 2.0, 4.0});
  double v = 0.0;
  REQUIRE(pt_estimate(s.h, 0, 1.0, 1, &v) == PT_OK);
  CHECK(v == doctest::Approx(-0.4375).epsilon(1e-15));
  REQUIRE(pt_estimate(s.h, 1, 1.0, 1, &v) == PT_OK);
  CHECK(v == doctest::Approx(-0.35).epsilon(1e-15));
  // on positive data the signed transform is the absolute one
  REQUIRE(pt_estimate(s.h, 2, 1.0, 1, &v) == PT_OK);
  CHECK(v == doctest::Approx(-0.4375).epsilon(1e-15));
  CHECK(pt_estimate(s.h, 7, 1.0, 1, &v) == PT_ERR_INVALID);
  CHECK(pt_estimate(s.h, 1, 1.0, 0, &v) == PT_ERR_INVALID);  // correlations need lag >= 1
  CHECK(pt_estimate(s.h, 0, -1.0, 1, &v) == PT_ERR_INVALID);
}

TEST_CASE("group test getters are mutually consistent") {
  pt_dgp_spec spec;
  pt_dgp_spec_init(&spec);
  spec.alpha = 0.3;
  spec.beta = 0.4;
  spec.length = 800;
  spec.seed = 4;
  pt_series* s = nullptr;
  REQUIRE(pt_simulate(&spec, &s) == PT_OK);
  pt_group_result* r = nullptr;
  REQUIRE(pt_group_test(s, 1, 1.0, 1, 8, 0.0, 0.05, &r) == PT_OK);
  CHECK(pt_group_result_q(r) == 8);
  CHECK(pt_group_result_degenerate(r) == 0);
  std::vector<double> est(8);
  REQUIRE(pt_group_result_estimates(r, est.data(), est.size()) == PT_OK);
  double mean = 0.0;
  for (double e : est) mean += e;
  mean /= 8.0;
  CHECK(pt_group_result_pooled(r) == doctest::Approx(mean).epsilon(1e-14));
  double sd = 0.0;
  for (double e : est) sd += (e - mean) * (e - mean);
  sd = std::sqrt(sd / 7.0);
  CHECK(pt_group_result_s_beta(r) == doctest::Approx(sd).epsilon(1e-13));
  CHECK(pt_group_result_t_stat(r) ==
        doctest::Approx(std::sqrt(8.0) * mean / sd).epsilon(1e-12));
  const double p = pt_group_result_p_value(r);
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
  double lo = 0.0, hi = 0.0;
  pt_group_result_ci(r, &lo, &hi);
  CHECK(lo < hi);
  CHECK(lo <= mean);
  CHECK(mean <= hi);
  CHECK(pt_group_result_estimates(r, est.data(), 3) == PT_ERR_INVALID);
  pt_group_result_free(r);
  // null-handle getters return quiet values, not crashes
  CHECK(std::isnan(pt_group_result_t_stat(nullptr)));
  CHECK(pt_group_result_q(nullptr) == 0);
  // degenerate grouping (all group estimates equal) is reported, not an error
  std::vector<double> periodic;
  for (int i = 0; i < 4; ++i)
    for (double v : {1.0, 2.0, 3.0, 4.0}) periodic.push_back(v);
  Series ps(periodic);
  pt_group_result* dr = nullptr;
  REQUIRE(pt_group_test(ps.h, 0, 1.0, 1, 4, 0.0, 0.05, &dr) == PT_OK);
  CHECK(pt_group_result_degenerate(dr) == 1);
  pt_group_result_free(dr);
  // too many groups for the sample is an error
  pt_group_result* er = nullptr;
  CHECK(pt_group_test(ps.h, 0, 1.0, 1, 9, 0.0, 0.05, &er) == PT_ERR_INVALID);
  pt_series_free(s);
}

TEST_CASE("frozen critical value and p bound anchors") {
  double cv = 0.0;
  REQUIRE(pt_group_critical_value(4, 0.05, &cv) == PT_OK);
  CHECK(cv == doctest::Approx(3.182446305284263).epsilon(1e-12));
  double p = 0.0;
  REQUIRE(pt_group_p_bound(4, std::sqrt(3.0), &p) == PT_OK);
  CHECK(p == doctest::Approx(0.18350341907227374).epsilon(1e-10));
  CHECK(pt_group_critical_value(1, 0.05, &cv) == PT_ERR_INVALID);
  CHECK(pt_group_p_bound(4, -1.0, &p) == PT_ERR_INVALID);
}

TEST_CASE("hac test through the c api") {
  pt_dgp_spec spec;
  pt_dgp_spec_init(&spec);
  spec.alpha = 0.2;
  spec.beta = 0.5;
  spec.length = 600;
  spec.seed = 12;
  pt_series* s = nullptr;
  REQUIRE(pt_simulate(&spec, &s) == PT_OK);
  pt_hac_result r;
  REQUIRE(pt_hac_test(s, 1, 1.0, 1, 0.0, 0, 0.0, 0.95, &r) == PT_OK);
  CHECK(r.bandwidth > 0.0);
  CHECK(r.std_err > 0.0);
  CHECK(r.t_stat == doctest::Approx(r.estimate / r.std_err).epsilon(1e-12));
  CHECK(r.p_value >= 0.0);
  CHECK(r.p_value <= 1.0);
  CHECK(r.lrv_floored == 0);
  CHECK(pt_hac_test(s, 1, 1.0, 1, 0.0, 5, 0.0, 0.95, &r) == PT_ERR_INVALID);
  pt_series_free(s);
  // constant input has no correlation to test
  Series flat(std::vector<double>(100, 1.0));
  CHECK(pt_hac_test(flat.h, 1, 1.0, 1, 0.0, 0, 1.0, 0.95, &r) == PT_ERR_DEGENERATE);
}

TEST_CASE("tail index and power selection") {
  const auto x = power_law_series(10000, 3.0, 77);
  Series s(x);
  pt_tail_estimate est;
  REQUIRE(pt_tail_index(s.h, 0.05, &est) == PT_OK);
  CHECK(est.k == 500);
  CHECK(est.zeta == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(est.ci_upper - est.zeta == doctest::Approx(0.3718838528358014).epsilon(1e-10));
  CHECK(pt_tail_index(s.h, 0.0, &est) == PT_ERR_INVALID);

  double sp = -7.0;
  REQUIRE(pt_select_power(3.5, &sp) == PT_OK);
  CHECK(sp == 0.5);
  sp = -7.0;
  CHECK(pt_select_power(2.0, &sp) == PT_REFUSED);
  CHECK(sp == -7.0);  // refusal leaves the output untouched
  CHECK(pt_select_power(0.0, &sp) == PT_ERR_INVALID);
}

TEST_CASE("mac statistics through the c api") {
  pt_dgp_spec spec;
  pt_dgp_spec_init(&spec);
  spec.phi = 0.3;
  spec.alpha = 0.2;
  spec.beta = 0.5;
  spec.length = 700;
  spec.seed = 30;
  pt_series* s = nullptr;
  REQUIRE(pt_simulate(&spec, &s) == PT_OK);
  double rho[3];
  for (int h = 1; h <= 3; ++h) REQUIRE(pt_estimate(s, 3, 1.0, h, &rho[h - 1]) == PT_OK);
  double mac_equal = 0.0, mac_vr = 0.0;
  REQUIRE(pt_mac(s, 3, 0, 1.0, &mac_equal) == PT_OK);
  REQUIRE(pt_mac(s, 3, 1, 1.0, &mac_vr) == PT_OK);
  CHECK(mac_equal == doctest::Approx((rho[0] + rho[1] + rho[2]) / 3.0).epsilon(1e-12));
  CHECK(mac_vr == doctest::Approx(1.5 * rho[0] + rho[1] + 0.5 * rho[2]).epsilon(1e-12));
  CHECK(pt_mac(s, 3, 2, 1.0, &mac_vr) == PT_ERR_INVALID);
  pt_group_result* r = nullptr;
  REQUIRE(pt_mac_group_test(s, 3, 0, 1.0, 4, 0.0, 0.05, &r) == PT_OK);
  CHECK(pt_group_result_q(r) == 4);
  pt_group_result_free(r);
  pt_series_free(s);
}

TEST_CASE("panel io through the c api") {
  const fs::path csv = scratch_dir() / "panel.csv";
  {
    std::ofstream f(csv);
    f << "date,AAA,BBB\n2020-01-01,0.5,-1\n2020-01-02,1.25,2\n2020-01-03,-0.75,3\n";
  }
  pt_panel* p = nullptr;
  REQUIRE(pt_panel_read_csv(csv.string().c_str(), 0, &p) == PT_OK);
  CHECK(pt_panel_count(p) == 2);
  CHECK(std::string(pt_panel_name(p, 0)) == "AAA");
  CHECK(std::string(pt_panel_name(p, 1)) == "BBB");
  CHECK(pt_panel_name(p, 2) == nullptr);
  pt_series* s = nullptr;
  REQUIRE(pt_panel_series(p, 0, &s) == PT_OK);
  CHECK(copy_out(s) == std::vector<double>{0.5, 1.25, -0.75});
  pt_series_free(s);
  CHECK(pt_panel_series(p, 5, &s) == PT_ERR_INVALID);
  pt_panel_free(p);
  CHECK(pt_panel_count(nullptr) == 0);
  CHECK(pt_panel_name(nullptr, 0) == nullptr);

  pt_panel* missing = nullptr;
  CHECK(pt_panel_read_csv((scratch_dir() / "absent.csv").string().c_str(), 0, &missing) ==
        PT_ERR_DATA);
  CHECK(std::string(pt_last_error()).find("absent.csv") != std::string::npos);

  // write one series out and read it back
  Series w(std::vector<double>{1.5, -2.5, 0.125});
  const fs::path out = scratch_dir() / "series.csv";
  REQUIRE(pt_write_series_csv(w.h, "SIM", out.string().c_str()) == PT_OK);
  pt_panel* back = nullptr;
  REQUIRE(pt_panel_read_csv(out.string().c_str(), 0, &back) == PT_OK);
  pt_series* rs = nullptr;
  REQUIRE(pt_panel_series(back, 0, &rs) == PT_OK);
  CHECK(copy_out(rs) == std::vector<double>{1.5, -2.5, 0.125});
  pt_series_free(rs);
  pt_panel_free(back);
}

TEST_CASE("batch drivers reject bad configuration") {
  CHECK(pt_run_mc_preset("{\"preset\":\"nope\"}", scratch_dir().string().c_str()) ==
        PT_ERR_INVALID);
  CHECK(std::string(pt_last_error()).find("preset") != std::string::npos);
  CHECK(pt_run_mc_preset(nullptr, scratch_dir().string().c_str()) == PT_ERR_INVALID);
  const fs::path csv = scratch_dir() / "tiny.csv";
  {
    std::ofstream f(csv);
    f << "date,A\n2020-01-01,1\n2020-01-02,2\n2020-01-03,-1\n";
  }
  // instruments too short for the tail step fail per instrument, not globally
  const fs::path out = scratch_dir() / "emp_out";
  REQUIRE(pt_run_empirical(csv.string().c_str(), 0, "{}", out.string().c_str()) == PT_OK);
  CHECK(fs::exists(out / "empirical_report.json"));
  CHECK(pt_run_empirical(csv.string().c_str(), 0, "{\"q\":1}", out.string().c_str()) ==
        PT_ERR_INVALID);
}
