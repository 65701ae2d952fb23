#pragma once

#include <cstddef>
#include <functional>

namespace radlap {

/// Tolerances and limits shared by every quadrature routine.
///
/// `max_levels` bounds the bisection depth of the adaptive Gauss-Kronrod
/// driver; the double-exponential driver uses at most `min(max_levels, 10)`
/// step halvings.
struct QuadSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_levels = 80;
  double truncation_tol = 1e-13;

  /// Throws Domain if the invariants are violated.
  void validate() const;
  /// The accuracy goal for an integral of magnitude |value|.
  double target(double value) const;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

enum class Endpoint { left, right };

using Integrand = std::function<double(double)>;

/// Integrand of the double-exponential core: receives the abscissa x
/// together with its exact distances to the left and right endpoints.
using SplitIntegrand = std::function<double(double x, double from_left, double from_right)>;

/// Global adaptive bisection with a 7/15-point Gauss-Kronrod pair per panel.
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// allowed (convergence is slow there; prefer integrate_endpoint_singular).
QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadSpec& spec);

/// Same as integrate_finite but performed in the variable log(x); requires
/// 0 < a < b. Suited to integrands spread over many decades.
QuadResult integrate_log_scale(const Integrand& f, double a, double b, const QuadSpec& spec);

/// Tanh-sinh quadrature over [a, b] clustering nodes at both endpoints.
/// Near each endpoint the integrand is assumed to behave like
/// C * dist^hint; the part of the trapezoid sum that lies too close to the
/// endpoint to be evaluated in floating point is completed with that model.
/// `min_distance` is the smallest endpoint distance at which f is sampled.
QuadResult integrate_tanh_sinh(const SplitIntegrand& f, double a, double b, double left_hint,
                               double right_hint, const QuadSpec& spec,
                               double min_distance = 1e-290);

/// Integral of f over [a, b] where f has an algebraic singularity
/// |f| <= C dist^exponent_hint at `singular_end` (exponent_hint > -1).
QuadResult integrate_endpoint_singular(const Integrand& f, double a, double b, Endpoint singular_end,
                                       double exponent_hint, const QuadSpec& spec);

/// Variant where the integrand is parameterised by the offset d = distance
/// from the singular endpoint, d in (0, length]. Avoids losing the offset to
/// rounding when the endpoint is far from zero.
QuadResult integrate_endpoint_singular_offset(const Integrand& g, double length, double exponent_hint,
                                              const QuadSpec& spec);

/// Integral of f over [a, inf) for |f(x)| <= C x^-decay_exponent.
/// C is estimated from three samples beyond a; the truncation point T makes
/// the tail bound C T^(1-p)/(p-1) at most spec.truncation_tol. The bound is
/// added to the error estimate.
QuadResult integrate_semi_infinite(const Integrand& f, double a, double decay_exponent,
                                   const QuadSpec& spec);

}  // namespace radlap
