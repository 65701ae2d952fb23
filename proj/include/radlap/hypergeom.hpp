#pragma once

#include "radlap/quad.hpp"

namespace radlap {

struct HyperParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;

  /// Throws Domain when c is zero or a negative integer.
  void validate() const;
};

struct EvalPolicy {
  double series_tol = 1e-17;
  int max_terms = 20000;
  QuadSpec quad_spec{};

  void validate() const;
};

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine coefficients).
double log_gamma(double x);

/// Gamma(x) for real x; throws Pole at non-positive integers.
double gamma_fn(double x);

/// 1/Gamma(x), zero at the poles of Gamma.
double rgamma(double x);

/// Gauss hypergeometric function 2F1(a, b; c; x) for x < 1, and x = 1 when c > a + b.
///
/// |x| <= 1/2 sums the power series; x < -1/2 goes through the Pfaff
/// transformation; 1/2 < x < 1 uses the connection formulas around x = 1
/// (logarithmic forms when c - a - b is an integer).
double f21(const HyperParams& p, double x, const EvalPolicy& policy = {});

/// Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).
double f21_at_one(const HyperParams& p);

/// Euler integral representation; requires c > b > 0 and x < 1.
double f21_euler_integral(const HyperParams& p, double x, const QuadSpec& spec = {});

/// (1-y)^(-b) 2F1(c-a, b; c; y/(y-1)).
double f21_pfaff(const HyperParams& p, double y, const EvalPolicy& policy = {});

/// d/dx 2F1(a, b; c; x) = (ab/c) 2F1(a+1, b+1; c+1; x).
double f21_derivative(const HyperParams& p, double x, const EvalPolicy& policy = {});

}  // namespace radlap
