#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radlap/fraclap.hpp"
#include "radlap/hypergeom.hpp"
#include "radlap/subharm.hpp"

namespace radlap {

using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" for integers.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact square root of a rational that is a perfect square; throws Domain otherwise.
Rational exact_sqrt(const Rational& q);

/// Constants of the extremal-profile case (k, n), all exact.
struct HessianCase {
  int k = 2;
  int n = 5;
  Rational alpha, beta, s, a, b, c, d1, d2, d3;

  double alpha_value() const { return to_double(alpha); }
  double beta_value() const { return to_double(beta); }
  double s_value() const { return to_double(s); }
  HyperParams numerator_params() const;    // (c-a, b, c)
  HyperParams denominator_params() const;  // (c-a, b+1, c+1)
  HyperParams profile_params() const;      // (a, b, c)
  /// n = 2k gives beta = 0: the profile is constant.
  bool degenerate() const { return beta == Rational(0); }
};

/// Requires k >= 1 and n >= 2k; the structural identities are asserted exactly.
HessianCase make_case(int k, int n);

/// f(t) = F(c-a, b; c; t) / F(c-a, b+1; c+1; t), t <= 1.
double ratio_f(const HessianCase& hc, double t, const EvalPolicy& policy = {});

/// g(t) = (L + sqrt(L^2 + d3 t)) / (2c), L = d1 t - d2 (1 - t), t >= 0.
double bound_g(const HessianCase& hc, double t);

/// g'(t) from differentiating the closed form of g.
double bound_g_derivative(const HessianCase& hc, double t);

/// a (a - c) / (c (a - b - 1)); throws InfiniteDerivative for k = 1.
Rational f_prime_at_1_exact(const HessianCase& hc);
double f_prime_at_1(const HessianCase& hc);

/// a (c + 1) / (c (2c - b)).
Rational g_prime_at_1_exact(const HessianCase& hc);
double g_prime_at_1(const HessianCase& hc);

struct TangentReport {
  double f_at_1 = 0.0;
  double g_at_1 = 0.0;
  double f_prime_1 = 0.0;
  double g_prime_1 = 0.0;
  Rational f_prime_exact;
  Rational g_prime_exact;
  bool chain_ok = false;
};

TangentReport tangent_report(const HessianCase& hc, double tol = 1e-12, const EvalPolicy& policy = {});

/// Exact discriminant factorisation d3 - 4 d2 (d1 + d2) = 4 (c+1)(c-b-1) >= 0 and
/// second differences of g on t = 0, 0.1, ..., 5 at most slack.
ConditionReport check_g_concavity(const HessianCase& hc, double slack = 1e-10);

/// 200 points on [0, 1] clustered geometrically at 1, including 0 and 1.
std::vector<double> default_fg_grid();

/// f >= g - slack on the grid, plus the tangent inequalities
/// f(t) >= f(1) + (t-1) f'(1) and g(t) <= g(1) + (t-1) g'(1).
ConditionReport check_fg_inequality(const HessianCase& hc, const std::vector<double>& t_grid,
                                    const EvalPolicy& policy = {}, double slack = 1e-9);

/// 200 evenly spaced points on [-5, 0.99].
std::vector<double> default_log_convexity_grid();

/// Second differences of log f on the grid are >= -slack; the companion
/// ratio F(a,b;c;x)/F(a+1,b+1;c+1;x) is convex on the mirrored grid and
/// matches (1+x) f(x/(1+x)); the Wronskian-type products of
/// F(c-a,b;c;.) and F(c-a,b+1;c+1;.) and of their second derivatives are
/// positive at 20 points.
ConditionReport check_log_convexity(const HessianCase& hc, const std::vector<double>& t_grid,
                                    const EvalPolicy& policy = {}, double slack = 1e-9);

/// phi'' + (k-1) phi'^2 / phi + ((n - alpha + 1)/r) phi' <= 0 for
/// phi(r) = F(a, b; c; -r^2), derivatives from the differentiation formula.
/// worst_margin is the largest value of the expression divided by the sum of
/// the magnitudes of its three terms.
ConditionReport check_k_inequality(const HessianCase& hc, const std::vector<double>& r_grid,
                                   const EvalPolicy& policy = {}, double slack = 1e-8);

/// Largest relative mismatch between the direct expression and the
/// quadratic form in lambda = F'/F (scaled by 4F/(1+x)) over the radii.
double quadratic_form_mismatch(const HessianCase& hc, const std::vector<double>& r_values,
                               const EvalPolicy& policy = {});

/// Both routes: the direct inequality on r_grid and the f >= g comparison.
/// Requires k >= 2.
ConditionReport check_iterated_condition(const HessianCase& hc, const std::vector<double>& r_grid,
                                         const EvalPolicy& policy = {}, double slack = 1e-8);

struct HessianVerification {
  HessianCase hc;
  std::string route;  // "hypergeometric" or "superposition"
  bool degenerate = false;
  std::optional<TangentReport> tangent;
  std::optional<ConditionReport> concavity, fg, log_convexity, iterated, superposition;
  bool overall = false;
};

/// Full pipeline for one case. k = 1 is certified through the radial
/// Laplacian of f_(n-2); degenerate cases are reported but not asserted.
HessianVerification verify_hessian_case(int k, int n, double tol = 1e-9, const EvalPolicy& policy = {});

}  // namespace radlap
