#pragma once

#include "radlap/hypergeom.hpp"
#include "radlap/kernel.hpp"
#include "radlap/profile.hpp"
#include "radlap/quad.hpp"

namespace radlap {

struct HessianCase;

enum class NormalizationMode { unnormalized, standard_constant };

/// 1, or 4^s Gamma(n/2+s) / (pi^(n/2) |Gamma(-s)|).
double normalization_constant(const FracParams& p, NormalizationMode mode);

/// u(r) - u(r tau) + (u(r) - u(r/tau)) tau^(2s-n), tau >= 1.
/// Profiles carrying a power form are evaluated in factored form, which is
/// exactly zero when the power equals n - 2s.
double bracket(const RadialProfile& u, const FracParams& p, double r, double tau);

/// The same bracket as a function of x = log tau, evaluated without the
/// cancellation of the literal form as x -> 0 (needs deriv1/deriv2 for full
/// accuracy).
double bracket_log(const RadialProfile& u, const FracParams& p, double r, double x);

/// Coarse check of the growth condition
/// int_0^inf |u(r)| r^(n-1) / (1+r)^(n+2s) dr < inf, combining the declared
/// decay class with a log-scale quadrature over [1e-6, 1e6]. Returns the
/// quadrature value; throws Integrability on failure.
double check_integrability(const RadialProfile& u, const FracParams& p);

/// (-Delta)^s u(r) with its error estimate. Tolerances in `spec` refer to
/// the returned value.
QuadResult fraclap_evaluate(const RadialProfile& u, const FracParams& p, double r,
                            NormalizationMode mode = NormalizationMode::unnormalized,
                            const QuadSpec& spec = {});

/// Value of fraclap_evaluate; throws NonConvergence when not converged.
double fraclap_radial(const RadialProfile& u, const FracParams& p, double r,
                      NormalizationMode mode = NormalizationMode::unnormalized,
                      const QuadSpec& spec = {});

/// w(r) = -2s u(r) + r u'(r).
RadialProfile derivative_rule_profile(const RadialProfile& u, double s);

/// d/dr (-Delta)^s u(r) = (1/r) (-Delta)^s w(r).
double fraclap_derivative(const RadialProfile& u, const FracParams& p, double r,
                          NormalizationMode mode = NormalizationMode::unnormalized,
                          const QuadSpec& spec = {});

/// The positive constant C with -(-Delta)^s f_beta(r) = C 2F1((n+2s)/2, s+beta/2; n/2; -r^2),
/// obtained from the operator near r = 0 by Richardson extrapolation over
/// r in {1e-5, 1e-6}. Cached per (n, s, beta).
double fbeta_closed_form_constant(double beta, const FracParams& p);

/// C 2F1((n+2s)/2, s+beta/2; n/2; -r^2), r >= 0.
double fbeta_closed_form(double beta, const FracParams& p, double r, const EvalPolicy& policy = {});

/// Closed form for the extremal profile of a Hessian case: s = k/(k+1), beta = n/k - 2.
double fbeta_fraclap_closed_form(const HessianCase& k_case, double r, const EvalPolicy& policy = {});

}  // namespace radlap
