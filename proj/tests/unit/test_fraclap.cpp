#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "radlap/error.hpp"
#include "radlap/fraclap.hpp"
#include "radlap/hessianx.hpp"

using namespace radlap;

namespace {

// -C F(A, B; n/2; -r^2) with C from the Gamma-function oracle.
double closed_form(int n, double s, double beta, double r) {
  return -oracle::fbeta_constant(n, s, beta) * oracle::f21(0.5 * n + s, s + 0.5 * beta, 0.5 * n, -r * r);
}

}  // namespace

TEST_SUITE("fraclap") {
  TEST_CASE("normalization constant") {
    const FracParams p{0.5, 3};
    CHECK(normalization_constant(p, NormalizationMode::unnormalized) == 1.0);
    const double want = std::pow(4.0, 0.5) * oracle::tgamma(2.0) / (std::pow(oracle::pi, 1.5) * std::abs(oracle::tgamma(-0.5)));
    CHECK(oracle::rel_err(normalization_constant(p, NormalizationMode::standard_constant), want) < 1e-14);
    CHECK(oracle::rel_err(normalization_constant(p, NormalizationMode::standard_constant), 1.0 / (oracle::pi * oracle::pi)) < 1e-14);
  }

  TEST_CASE("bracket of the critical power vanishes") {
    for (auto [n, s] : {std::pair{3, 0.5}, {5, 0.75}, {4, 0.9}, {2, 0.1}}) {
      const FracParams p{s, n};
      const auto u = power_profile(p.gamma());
      for (double r : {1e-3, 0.7, 40.0})
        for (double tau : {1.0, 1.0 + 1e-9, 1.5, 1e3}) {
          CHECK(bracket(u, p, r, tau) == 0.0);
          CHECK(bracket_log(u, p, r, std::log(tau)) == 0.0);
        }
      const auto q = fraclap_evaluate(u, p, 1.3);
      CHECK(q.value == 0.0);
      CHECK(q.error_estimate <= 1e-10);
    }
  }

  TEST_CASE("bracket forms agree") {
    const FracParams p{0.6, 4};
    const auto u = fbeta_profile(1.7);
    for (double r : {0.1, 1.0, 8.0})
      for (double x : {1e-6, 1e-3, 0.04, 0.06, 0.5, 3.0}) {
        const long double lr = r, lx = x, g = p.gamma();
        // u(r e^t) - u(r) for u = -(1 + r^2)^(-0.85), free of cancellation.
        auto diff = [&](long double t) {
          const long double q = lr * lr * std::expm1(2 * t) / (1 + lr * lr);
          return -std::pow(1 + lr * lr, -0.85L) * std::expm1(-0.85L * std::log1p(q));
        };
        const long double want = -diff(lx) - diff(-lx) * std::exp(-g * lx);
        INFO(r, " ", x);
        CHECK(std::abs(bracket_log(u, p, r, x) - static_cast<double>(want)) <= 1e-10 * std::abs(static_cast<double>(want)));
        if (x > 1e-3)
          CHECK(std::abs(bracket(u, p, r, std::exp(x)) - static_cast<double>(want)) <=
                1e-9 * std::abs(static_cast<double>(want)));
      }
  }

  TEST_CASE("f_beta against the closed form") {
    for (auto [n, s, beta] :
         {std::tuple{4, 0.6, 1.0}, {5, 0.75, 2.0}, {3, 0.3, 0.5}, {6, 0.95, 3.0}, {2, 0.1, 0.2}, {10, 0.5, 9.0}}) {
      const FracParams p{s, n};
      const auto u = fbeta_profile(beta);
      for (double r : {0.01, 0.5, 1.0, 3.0, 30.0}) {
        INFO(n, " ", s, " ", beta, " ", r);
        const double want = closed_form(n, s, beta, r);
        QuadSpec spec;
        spec.abs_tol = spec.truncation_tol = std::min(1e-13, 1e-12 * std::abs(want));
        CHECK(oracle::rel_err(fraclap_radial(u, p, r, NormalizationMode::unnormalized, spec), want) < 1e-9);
      }
      CHECK(oracle::rel_err(fbeta_closed_form_constant(beta, p), oracle::fbeta_constant(n, s, beta)) < 1e-10);
      CHECK(oracle::rel_err(fbeta_closed_form(beta, p, 2.0), -closed_form(n, s, beta, 2.0)) < 1e-9);
    }
  }

  TEST_CASE("extreme orders") {
    for (double s : {0.02, 0.99}) {
      const FracParams p{s, 3};
      const auto u = fbeta_profile(1.0);
      CHECK(oracle::rel_err(fraclap_radial(u, p, 0.8), closed_form(3, s, 1.0, 0.8)) < 1e-8);
    }
  }

  TEST_CASE("pure powers") {
    // (-Lap)^s r^-e = 4^s G((e+2s)/2) G((n-e)/2) / (G(e/2) G((n-e-2s)/2)) r^(-e-2s).
    for (auto [n, s, e] : {std::tuple{3, 0.5, 1.5}, {4, 0.3, 0.7}, {5, 0.8, 3.9}, {2, 0.1, -0.1}}) {
      const FracParams p{s, n};
      const double c = std::pow(4.0, s) * oracle::tgamma(0.5 * e + s) * oracle::tgamma(0.5 * (n - e)) /
                       (oracle::tgamma(0.5 * e) * oracle::tgamma(0.5 * (n - e - 2 * s)));
      for (double r : {0.3, 2.0}) {
        INFO(n, " ", s, " ", e, " ", r);
        const double v = fraclap_radial(power_profile(e, 1.0), p, r, NormalizationMode::standard_constant);
        CHECK(oracle::rel_err(v, c * std::pow(r, -e - 2 * s)) < 1e-9);
      }
    }
  }

  TEST_CASE("constants are annihilated") {
    const auto u = constant_profile(-4.0);
    CHECK(std::abs(fraclap_radial(u, {0.4, 5}, 2.0)) <= 1e-12);
  }

  TEST_CASE("scaling property") {
    const FracParams p{0.7, 3};
    const auto u = fbeta_profile(2.0);
    const double lam = 2.5;
    for (double r : {0.3, 1.0}) {
      CHECK(oracle::rel_err(fraclap_radial(rescale(u, lam), p, r), std::pow(lam, 2 * p.s) * fraclap_radial(u, p, lam * r)) <
            1e-9);
    }
  }

  TEST_CASE("linearity") {
    const FracParams p{0.45, 4};
    const auto a = fbeta_profile(0.8), b = fbeta_profile(2.5);
    const auto u = combine({{1.5, a}, {0.25, b}});
    const double r = 0.9;
    CHECK(oracle::rel_err(fraclap_radial(u, p, r), 1.5 * fraclap_radial(a, p, r) + 0.25 * fraclap_radial(b, p, r)) <
          1e-10);
  }

  TEST_CASE("derivative rule against the closed form derivative") {
    for (auto [n, s, beta] : {std::tuple{4, 0.6, 1.0}, {5, 0.75, 3.0}, {2, 0.2, 0.5}}) {
      const FracParams p{s, n};
      const auto u = fbeta_profile(beta);
      const double A = 0.5 * n + s, B = s + 0.5 * beta, c = 0.5 * n;
      for (double r : {0.5, 1.0, 2.0}) {
        const double want = oracle::fbeta_constant(n, s, beta) * 2.0 * r * A * B / c *
                            oracle::f21(A + 1, B + 1, c + 1, -r * r);
        CHECK(oracle::rel_err(fraclap_derivative(u, p, r), want) < 1e-8);
      }
    }
  }

  TEST_CASE("standard normalization scales the result") {
    const FracParams p{0.3, 3};
    const auto u = fbeta_profile(1.0);
    CHECK(oracle::rel_err(fraclap_radial(u, p, 1.0, NormalizationMode::standard_constant),
                          normalization_constant(p, NormalizationMode::standard_constant) * fraclap_radial(u, p, 1.0)) <
          1e-13);
  }

  TEST_CASE("Hessian-case closed form matches the operator") {
    const auto hc = make_case(2, 5);
    const auto u = fbeta_profile(hc.beta_value());
    const FracParams p{hc.s_value(), hc.n};
    for (double r : {0.3, 1.0, 4.0})
      CHECK(oracle::rel_err(-fbeta_fraclap_closed_form(hc, r), fraclap_radial(u, p, r)) < 1e-9);
  }

  TEST_CASE("growth condition") {
    RadialProfile grow;
    grow.value = [](double r) { return r * r * r; };
    grow.decay = DecayClass::power_law(1.0, -3.0);
    try {
      fraclap_radial(grow, {0.5, 2}, 1.0);
      FAIL("expected Integrability");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Integrability);
    }
    CHECK_THROWS_AS(check_integrability(grow, {0.5, 2}), Error);
    CHECK(check_integrability(fbeta_profile(1.0), {0.5, 2}) > 0);
    CHECK_THROWS_AS(derivative_rule_profile(grow, 0.5), Error);
  }

  TEST_CASE("invalid inputs") {
    const auto u = fbeta_profile(1.0);
    CHECK_THROWS_AS(fraclap_radial(u, {1.0, 3}, 1.0), Error);
    CHECK_THROWS_AS(fraclap_radial(u, {0.5, 3}, 0.0), Error);
    CHECK_THROWS_AS(bracket(u, {0.5, 3}, 1.0, 0.5), Error);
  }
}
