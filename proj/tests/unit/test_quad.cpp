#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "radlap/error.hpp"
#include "radlap/quad.hpp"

using namespace radlap;

TEST_SUITE("quad") {
  TEST_CASE("gauss-kronrod integrates smooth functions") {
    const QuadSpec spec;
    auto q = integrate_finite([](double x) { return std::sin(x); }, 0.0, oracle::pi, spec);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(2.0).epsilon(1e-14));
    q = integrate_finite([](double x) { return std::exp(-x * x); }, -1.0, 2.0, spec);
    CHECK(q.value == doctest::Approx(0.5 * std::sqrt(oracle::pi) * (std::erf(2.0) + std::erf(1.0))).epsilon(1e-13));
  }

  TEST_CASE("error estimate bounds the actual error") {
    QuadSpec spec;
    spec.rel_tol = 1e-6;
    spec.abs_tol = 0.0;
    for (double w : {1.0, 5.0, 20.0, 60.0}) {
      const auto q = integrate_finite([w](double x) { return std::cos(w * x); }, 0.0, 1.0, spec);
      const double exact = std::sin(w) / w;
      CHECK(std::abs(q.value - exact) <= q.error_estimate + 1e-15);
    }
  }

  TEST_CASE("intervals must be ordered") {
    auto f = [](double x) { return x * x; };
    CHECK_THROWS_AS(integrate_finite(f, 1.0, 0.0, QuadSpec{}), Error);
    CHECK_THROWS_AS(integrate_finite(f, 2.0, 2.0, QuadSpec{}), Error);
  }

  TEST_CASE("polynomials are integrated to rounding") {
    for (int deg = 0; deg <= 13; ++deg) {
      auto f = [deg](double x) { return std::pow(x, deg); };
      const double want = (std::pow(3.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
      CHECK(oracle::rel_err(integrate_finite(f, -1.0, 3.0, QuadSpec{}).value, want) < 10 * 2.2e-16 * 4);
    }
  }

  TEST_CASE("linearity and additivity") {
    const QuadSpec spec;
    auto f = [](double x) { return std::exp(x) * std::sin(3 * x); };
    auto g = [](double x) { return 1.0 / (1.0 + x * x); };
    const auto qf = integrate_finite(f, 0.0, 2.0, spec), qg = integrate_finite(g, 0.0, 2.0, spec);
    const auto qs = integrate_finite([&](double x) { return 2 * f(x) - 0.5 * g(x); }, 0.0, 2.0, spec);
    CHECK(std::abs(qs.value - (2 * qf.value - 0.5 * qg.value)) <=
          qs.error_estimate + 2 * qf.error_estimate + 0.5 * qg.error_estimate + 1e-15);
    const auto left = integrate_finite(f, 0.0, 0.7, spec), right = integrate_finite(f, 0.7, 2.0, spec);
    CHECK(std::abs(left.value + right.value - qf.value) <=
          left.error_estimate + right.error_estimate + qf.error_estimate + 1e-15);
  }

  TEST_CASE("log-scale integration across decades") {
    const auto q = integrate_log_scale([](double x) { return 1.0 / (x * (1.0 + x)); }, 1e-6, 1e6, QuadSpec{});
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(std::log(1e6 * (1.0 + 1e-6) / (1.0 + 1e6) / 1e-6) - std::log(1.0)).epsilon(1e-11));
  }

  TEST_CASE("endpoint singularities") {
    const QuadSpec spec;
    for (double p : {-0.5, -0.9, -0.99, 0.3}) {
      const auto q =
          integrate_endpoint_singular([p](double x) { return std::pow(x, p); }, 0.0, 1.0, Endpoint::left, p, spec);
      CHECK(q.converged);
      CHECK(oracle::rel_err(q.value, 1.0 / (p + 1.0)) < 1e-10);
    }
    // Away from zero the distance to the endpoint is only known to rounding,
    // so strong singularities there belong to the offset variant.
    for (double p : {-0.4, 0.3}) {
      auto q = integrate_endpoint_singular([p](double x) { return std::pow(1.0 - x, p); }, 0.0, 1.0, Endpoint::right, p,
                                           spec);
      CHECK(oracle::rel_err(q.value, 1.0 / (p + 1.0)) < 1e-9);
      q = integrate_endpoint_singular([p](double x) { return std::pow(x - 1.0, p); }, 1.0, 2.0, Endpoint::left, p, spec);
      CHECK(oracle::rel_err(q.value, 1.0 / (p + 1.0)) < 1e-9);
    }
    CHECK(integrate_endpoint_singular([](double) { return 3.0; }, 0.0, 1.0, Endpoint::left, -0.7, spec).value ==
          doctest::Approx(3.0).epsilon(1e-14));
    const auto q = integrate_endpoint_singular_offset([](double d) { return std::pow(d, -0.8) * std::exp(-d); }, 1.0,
                                                      -0.8, spec);
    const double exact = boost::math::tgamma_lower(0.2, 1.0);
    CHECK(oracle::rel_err(q.value, exact) < 1e-10);
  }

  TEST_CASE("tanh-sinh with logarithmic endpoint") {
    const auto q = integrate_tanh_sinh([](double x, double, double) { return std::log(x); }, 0.0, 1.0, 0.0, 0.0,
                                       QuadSpec{});
    CHECK(q.value == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("non-integrable hints are rejected") {
    CHECK_THROWS_AS(integrate_endpoint_singular([](double x) { return 1.0 / x; }, 0.0, 1.0, Endpoint::left, -1.0,
                                                QuadSpec{}),
                    Error);
    try {
      integrate_endpoint_singular([](double x) { return 1.0 / x; }, 0.0, 1.0, Endpoint::left, -1.2, QuadSpec{});
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DivergentExponent);
    }
  }

  TEST_CASE("semi-infinite integrals") {
    const QuadSpec spec;
    auto q = integrate_semi_infinite([](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); }, 0.0, 2.0, spec);
    CHECK(oracle::rel_err(q.value, 1.0) < 1e-10);
    q = integrate_semi_infinite([](double x) { return std::pow(x, -3.0); }, 2.0, 3.0, spec);
    CHECK(oracle::rel_err(q.value, 0.125) < 1e-10);
    CHECK(integrate_semi_infinite([](double) { return 0.0; }, 1.0, 2.0, spec).value == 0.0);
    q = integrate_semi_infinite([](double x) { return std::pow(x, -2.5); }, 1.0, 2.5, spec);
    CHECK(oracle::rel_err(q.value, 1.0 / 1.5) < 1e-10);
    try {
      integrate_semi_infinite([](double x) { return 1.0 / x; }, 1.0, 1.0, spec);
      FAIL("expected DivergentTail");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DivergentTail);
    }
  }

  TEST_CASE("non-finite integrand values raise") {
    try {
      integrate_semi_infinite([](double) { return std::nan(""); }, 1.0, 2.0, QuadSpec{});
      FAIL("expected NonFiniteEvaluation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonFiniteEvaluation);
    }
  }

  TEST_CASE("invalid specs") {
    QuadSpec spec;
    spec.rel_tol = -1.0;
    CHECK_THROWS_AS(spec.validate(), Error);
  }
}
