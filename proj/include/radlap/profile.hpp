#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace radlap {

/// Envelope |u(rho)| <= sum_j M_j rho^(-rate_j), valid for every rho > 0.
///
/// `far` is an optional second envelope, also valid for every rho > 0,
/// that is tighter for large rho. Empty means none.
struct DecayClass {
  struct Term {
    double bound;
    double rate;
  };
  std::vector<Term> terms;
  std::vector<Term> far;

  static DecayClass bounded(double m) { return {{{m, 0.0}}, {}}; }
  static DecayClass power_law(double m, double rate) { return {{{m, rate}}, {}}; }

  double envelope(double rho) const;
  const std::vector<Term>& far_terms() const { return far.empty() ? terms : far; }
  DecayClass scaled(double factor) const;
  DecayClass plus(const DecayClass& other) const;
  /// Multiplies each bound by factor(rate).
  DecayClass adjusted(const std::function<double(double)>& factor) const;
};

/// u(r) = coef r^(-exponent) on [r_lo, r_hi].
struct PowerForm {
  double coef;
  double exponent;
  double r_lo;
  double r_hi;
};

/// A radial function u(r), r > 0, with optional derivative capabilities.
///
/// `delta(r, x)` returns u(r e^x) - u(r) without cancellation when provided.
/// `log_derivative_decay` bounds |r u'(r)| and is needed when the profile
/// enters the derivative rule.
struct RadialProfile {
  using Fn = std::function<double(double)>;
  using DeltaFn = std::function<double(double, double)>;

  Fn value;
  Fn deriv1;
  Fn deriv2;
  Fn deriv3;
  DeltaFn delta;
  DecayClass decay = DecayClass::bounded(0.0);
  std::optional<DecayClass> log_derivative_decay;
  std::optional<PowerForm> power;
  std::string name;

  double operator()(double r) const { return value(r); }
  bool has_deriv1() const { return static_cast<bool>(deriv1); }
  bool has_deriv2() const { return deriv1 && deriv2; }
  bool has_deriv3() const { return deriv1 && deriv2 && deriv3; }

  /// u(r e^x) - u(r), using `delta` when available.
  double difference(double r, double x) const;
};

/// f_beta(r) = -(1 + r^2)^(-beta/2), beta > 0, with three analytic derivatives.
RadialProfile fbeta_profile(double beta);

/// u(r) = coef r^(-exponent) with exact bracket structure.
RadialProfile power_profile(double exponent, double coef = -1.0);

RadialProfile constant_profile(double c);

/// sum_i c_i u_i; derivatives are present only when every term has them.
RadialProfile combine(const std::vector<std::pair<double, RadialProfile>>& terms);

/// r -> u(lambda r).
RadialProfile rescale(const RadialProfile& u, double lambda);

/// C^2 cubic spline through (r_i, u_i) in the variable log r; constant
/// extension outside the sampled range.
RadialProfile spline_profile(std::vector<double> r, std::vector<double> u);

/// Reads two-column "r,u" text (comma or whitespace separated, '#' comments).
RadialProfile spline_profile_from_file(const std::string& path);

}  // namespace radlap
