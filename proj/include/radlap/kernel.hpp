#pragma once

#include "radlap/hypergeom.hpp"
#include "radlap/quad.hpp"

namespace radlap {

/// Fractional order s and ambient dimension n.
struct FracParams {
  double s = 0.5;
  int n = 3;

  double gamma() const { return n - 2.0 * s; }

  /// n >= 2 and s finite; used by the pointwise condition checks.
  void validate() const;
  /// Additionally 0 < s < 1; required wherever the operator is evaluated.
  void validate_operator() const;
};

/// Surface measure of the unit sphere in R^n, 2 pi^(n/2) / Gamma(n/2).
double sphere_area(int n);

/// pi^((n-3)/2) / Gamma((n-1)/2).
double alpha_n(int n);

/// Angular kernel K(tau) by quadrature over theta in [0, pi].
double kernel_K(const FracParams& p, double tau, const QuadSpec& spec = {});

/// Desingularised kernel H(tau), tau >= 1, by quadrature over psi in [0, pi].
double kernel_H(const FracParams& p, double tau, const QuadSpec& spec = {});

/// H(tau) = |S^(n-1)| tau^(2s) 2F1(-s, n/2-1-s; n/2; tau^-2), the smooth form
/// of the hypergeometric closed expression.
double kernel_H_hypergeometric(const FracParams& p, double tau, const EvalPolicy& policy = {});

/// tau (tau^2-1)^(-1-2s) H(tau) via the hypergeometric route.
double kernel_weight(const FracParams& p, double tau, const EvalPolicy& policy = {});

/// Same weight evaluated at tau = 1 + d with d passed exactly.
double kernel_weight_offset(const FracParams& p, double d, const EvalPolicy& policy = {});

/// tau (tau^2-1)^(-1-2s) H(tau) with H from kernel_H (validation route).
double kernel_weight_quadrature(const FracParams& p, double tau, const QuadSpec& spec = {});

}  // namespace radlap
