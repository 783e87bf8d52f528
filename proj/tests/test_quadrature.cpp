#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "quadrature.hpp"
#include "special.hpp"

using namespace powertail;

TEST_CASE("polynomial and trig integrals on finite intervals") {
  CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::exp(x); }, -1.0, 2.0) ==
        doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-13));
  // reversed endpoints are rejected rather than reinterpreted
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return x; }, 1.0, 0.0), Error);
}

TEST_CASE("integrable endpoint singularity") {
  CHECK(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0) ==
        doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("whole-line integrals with heavy tails") {
  CHECK(integrate_real_line([](double x) { return norm_pdf(x); }, {0.0}) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate_real_line([](double x) { return student_t_pdf(x, 3.0); }, {0.0}) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // Cauchy: the slowest-decaying density we ever integrate
  CHECK(integrate_real_line([](double x) { return student_t_pdf(x, 1.0); }, {0.0}) ==
        doctest::Approx(1.0).epsilon(1e-8));
  // kink at 0 declared as a breakpoint
  CHECK(integrate_real_line([](double x) { return 0.5 * std::exp(-std::abs(x)); }, {0.0}) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("second moments through the tail substitution") {
  CHECK(integrate_real_line([](double x) { return x * x * norm_pdf(x); }, {0.0}) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // t_5 variance = 5/3
  CHECK(integrate_real_line([](double x) { return x * x * student_t_pdf(x, 5.0); }, {0.0}) ==
        doctest::Approx(5.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("breakpoints may be unsorted and duplicated") {
  const auto f = [](double x) { return norm_pdf(x); };
  const double v = integrate_real_line(f, {2.0, -1.0, 2.0, 0.0});
  CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}
