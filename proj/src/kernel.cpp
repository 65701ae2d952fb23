#include "radlap/kernel.hpp"

#include <cmath>
#include <string>

#include "radlap/error.hpp"

namespace radlap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double converged_value(const QuadResult& r, const char* what) {
  if (!r.converged) raise(ErrorKind::NonConvergence, std::string(what) + " quadrature did not converge");
  return r.value;
}

}  // namespace

void FracParams::validate() const {
  require(n >= 2, ErrorKind::Domain, "dimension n must be >= 2, got " + std::to_string(n));
  require(std::isfinite(s), ErrorKind::Domain, "s must be finite");
}

void FracParams::validate_operator() const {
  validate();
  require(s > 0.0 && s < 1.0, ErrorKind::Domain, "operator evaluation needs 0 < s < 1, got " + std::to_string(s));
}

double sphere_area(int n) {
  require(n >= 1, ErrorKind::Domain, "sphere_area needs n >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);
}

double alpha_n(int n) {
  require(n >= 2, ErrorKind::Domain, "alpha_n needs n >= 2, got " + std::to_string(n));
  return std::pow(kPi, 0.5 * (n - 3)) / gamma_fn(0.5 * (n - 1));
}

double kernel_K(const FracParams& p, double tau, const QuadSpec& spec) {
  p.validate_operator();
  require(tau >= 0.0 && std::isfinite(tau), ErrorKind::Domain, "kernel_K needs tau >= 0");
  require(tau != 1.0, ErrorKind::Singularity, "kernel_K integrand is not integrable at tau = 1");
  const double e = 0.5 * (p.n + 2.0 * p.s);
  const double gap = (1.0 - tau) * (1.0 - tau);
  auto f = [&](double th) {
    const double h = std::sin(0.5 * th);
    return std::pow(std::sin(th), p.n - 2) * std::pow(gap + 4.0 * tau * h * h, -e);
  };
  const double split = std::min(0.5 * kPi, 10.0 * std::abs(1.0 - tau));
  double v = converged_value(integrate_finite(f, 0.0, split, spec), "kernel_K");
  v += converged_value(integrate_finite(f, split, kPi, spec), "kernel_K");
  return 2.0 * kPi * alpha_n(p.n) * v;
}

double kernel_H(const FracParams& p, double tau, const QuadSpec& spec) {
  p.validate_operator();
  require(tau >= 1.0 && std::isfinite(tau), ErrorKind::Domain, "kernel_H needs tau >= 1");
  const double e2 = (tau - 1.0) * (tau + 1.0);
  const double q = 1.0 + 2.0 * p.s;
  auto f = [&](double psi) {
    const double sn = std::sin(psi);
    const double cs = std::cos(psi);
    const double root = std::sqrt(e2 + cs * cs);
    if (root == 0.0) return 0.0;
    const double sum = cs >= 0.0 ? root + cs : e2 / (root - cs);
    return std::pow(sn, p.n - 2) * std::pow(sum, q) / root;
  };
  // The integrand varies on the scale sqrt(tau^2 - 1) around psi = pi/2.
  const double w = std::min(0.25 * kPi, 10.0 * std::sqrt(e2));
  if (w == 0.0) {
    const double v =
        integrate_endpoint_singular(f, 0.0, 0.5 * kPi, Endpoint::right, 2.0 * p.s, spec).value;
    return 2.0 * kPi * alpha_n(p.n) * v;
  }
  double v = 0.0;
  v += converged_value(integrate_finite(f, 0.0, 0.5 * kPi - w, spec), "kernel_H");
  v += converged_value(integrate_endpoint_singular(f, 0.5 * kPi - w, 0.5 * kPi, Endpoint::right, 0.0, spec),
                       "kernel_H");
  if (e2 > 0.0) {
    v += converged_value(integrate_endpoint_singular(f, 0.5 * kPi, 0.5 * kPi + w, Endpoint::left, 0.0, spec),
                         "kernel_H");
    v += converged_value(integrate_finite(f, 0.5 * kPi + w, kPi, spec), "kernel_H");
  }
  return 2.0 * kPi * alpha_n(p.n) * v;
}

double kernel_H_hypergeometric(const FracParams& p, double tau, const EvalPolicy& policy) {
  p.validate_operator();
  require(tau >= 1.0 && std::isfinite(tau), ErrorKind::Domain, "kernel_H needs tau >= 1");
  const double z = 1.0 / (tau * tau);
  return sphere_area(p.n) * std::pow(tau, 2.0 * p.s) * f21({-p.s, 0.5 * p.n - 1.0 - p.s, 0.5 * p.n}, z, policy);
}

double kernel_weight_offset(const FracParams& p, double d, const EvalPolicy& policy) {
  p.validate_operator();
  require(d > 0.0 && std::isfinite(d), ErrorKind::Domain, "kernel_weight needs tau > 1");
  const double tau = 1.0 + d;
  const double t2m1 = d * (2.0 + d);
  const double q = 1.0 + 2.0 * p.s;
  const double z = 1.0 / (tau * tau);
  return sphere_area(p.n) * std::pow(tau, q) * std::pow(t2m1, -q) *
         f21({-p.s, 0.5 * p.n - 1.0 - p.s, 0.5 * p.n}, z, policy);
}

double kernel_weight(const FracParams& p, double tau, const EvalPolicy& policy) {
  require(tau > 1.0 && std::isfinite(tau), ErrorKind::Domain, "kernel_weight needs tau > 1");
  return kernel_weight_offset(p, tau - 1.0, policy);
}

double kernel_weight_quadrature(const FracParams& p, double tau, const QuadSpec& spec) {
  require(tau > 1.0 && std::isfinite(tau), ErrorKind::Domain, "kernel_weight needs tau > 1");
  const double t2m1 = (tau - 1.0) * (tau + 1.0);
  return tau * std::pow(t2m1, -1.0 - 2.0 * p.s) * kernel_H(p, tau, spec);
}

}  // namespace radlap
