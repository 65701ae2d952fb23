#include "radlap/hypergeom.hpp"

#include <array>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <string>

#include "radlap/error.hpp"

namespace radlap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

bool nonpositive_integer(double v) { return v <= 0.0 && v == std::round(v); }

double digamma(double x) { return boost::math::digamma(x); }

std::string describe(const HyperParams& p, double x) {
  return "(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) + ", c=" + std::to_string(p.c) +
         ", x=" + std::to_string(x) + ")";
}

struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

double series(double a, double b, double c, double x, const EvalPolicy& policy) {
  Kahan acc;
  acc.add(1.0);
  double term = 1.0;
  int quiet = 0;
  for (int k = 0; k < policy.max_terms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
    if (term == 0.0) return acc.sum;
    acc.add(term);
    if (std::abs(term) <= policy.series_tol * std::abs(acc.sum)) {
      if (++quiet >= 2) return acc.sum;
    } else {
      quiet = 0;
    }
  }
  raise(ErrorKind::NonConvergence,
        "hypergeometric series did not converge in " + std::to_string(policy.max_terms) + " terms " +
            describe({a, b, c}, x));
}

double polynomial(double a, double b, double c, double x) {
  const double deg = nonpositive_integer(a) ? (nonpositive_integer(b) ? std::max(a, b) : a) : b;
  const int n = static_cast<int>(-deg);
  Kahan acc;
  acc.add(1.0);
  double term = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
    acc.add(term);
  }
  return acc.sum;
}

// 1/2 < x < 1, c - a - b = m a non-negative integer.
double near_one_integer(double a, double b, int m, double x, const EvalPolicy& policy) {
  const double w = 1.0 - x;
  const double lw = std::log(w);
  const double c = a + b + m;
  if (m == 0) {
    const double pre = gamma_fn(a + b) * rgamma(a) * rgamma(b);
    Kahan acc;
    double coef = 1.0;
    double psi1 = -kEulerGamma, psia = digamma(a), psib = digamma(b);
    int quiet = 0;
    for (int n = 0; n < policy.max_terms; ++n) {
      const double term = coef * (2.0 * psi1 - psia - psib - lw);
      acc.add(term);
      if (std::abs(term) <= policy.series_tol * std::abs(acc.sum)) {
        if (++quiet >= 2) return pre * acc.sum;
      } else {
        quiet = 0;
      }
      coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * w;
      psi1 += 1.0 / (n + 1.0);
      psia += 1.0 / (a + n);
      psib += 1.0 / (b + n);
    }
    raise(ErrorKind::NonConvergence, "logarithmic connection series did not converge " + describe({a, b, c}, x));
  }

  Kahan finite;
  double t = 1.0;
  for (int n = 0; n < m; ++n) {
    finite.add(t);
    t *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * w;
  }
  const double first = gamma_fn(m) * gamma_fn(c) * rgamma(a + m) * rgamma(b + m) * finite.sum;

  const double pre2 = rgamma(a) * rgamma(b);
  if (pre2 == 0.0) return first;
  double coef = std::exp(-std::lgamma(m + 1.0));
  double psi1 = -kEulerGamma, psim = digamma(m + 1.0), psia = digamma(a + m), psib = digamma(b + m);
  Kahan acc;
  int quiet = 0;
  for (int n = 0; n < policy.max_terms; ++n) {
    const double term = coef * (lw - psi1 - psim + psia + psib);
    acc.add(term);
    if (std::abs(term) <= policy.series_tol * std::abs(acc.sum)) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    coef *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * w;
    psi1 += 1.0 / (n + 1.0);
    psim += 1.0 / (n + m + 1.0);
    psia += 1.0 / (a + m + n);
    psib += 1.0 / (b + m + n);
    if (n + 1 == policy.max_terms)
      raise(ErrorKind::NonConvergence, "logarithmic connection series did not converge " + describe({a, b, c}, x));
  }
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  const double second = sign * std::pow(w, m) * gamma_fn(c) * pre2 * acc.sum;
  return first - second;
}

// 1/2 < x < 1.
double near_one(const HyperParams& p, double x, const EvalPolicy& policy) {
  const double a = p.a, b = p.b, c = p.c;
  const double m = c - a - b;
  const double mr = std::round(m);
  const double w = 1.0 - x;
  if (m == mr) {
    if (m >= 0) return near_one_integer(a, b, static_cast<int>(mr), x, policy);
    // Euler transformation raises c - a - b to -m > 0.
    return std::pow(w, m) * near_one_integer(c - a, c - b, static_cast<int>(-mr), x, policy);
  }
  if (std::abs(m - mr) < 1e-5) {
    if (c > b && b > 0) return f21_euler_integral(p, x, policy.quad_spec);
    if (c > a && a > 0) return f21_euler_integral({b, a, c}, x, policy.quad_spec);
  }
  double result = 0.0;
  const double g1 = rgamma(c - a) * rgamma(c - b);
  if (g1 != 0.0) result += gamma_fn(c) * gamma_fn(m) * g1 * series(a, b, 1.0 - m, w, policy);
  const double g2 = rgamma(a) * rgamma(b);
  if (g2 != 0.0) result += std::pow(w, m) * gamma_fn(c) * gamma_fn(-m) * g2 * series(c - a, c - b, 1.0 + m, w, policy);
  return result;
}

}  // namespace

void HyperParams::validate() const {
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c), ErrorKind::Domain,
          "hypergeometric parameters must be finite");
  require(!nonpositive_integer(c), ErrorKind::Domain, "c must not be zero or a negative integer");
}

void EvalPolicy::validate() const {
  require(series_tol > 0.0, ErrorKind::Domain, "series_tol must be positive");
  require(max_terms >= 8, ErrorKind::Domain, "max_terms must be at least 8");
  quad_spec.validate();
}

double log_gamma(double x) {
  require(x > 0.0 && std::isfinite(x), ErrorKind::Domain, "log_gamma requires x > 0, got " + std::to_string(x));
  if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  const double z = x - 1.0;
  double s = kCoef[0];
  for (int i = 1; i < 9; ++i) s += kCoef[i] / (z + i);
  const double t = z + g + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(s);
}

double gamma_fn(double x) {
  require(!nonpositive_integer(x), ErrorKind::Pole, "Gamma has a pole at " + std::to_string(x));
  if (x > 0.0 && x < 171.0) return std::exp(log_gamma(x));
  return std::tgamma(x);
}

double rgamma(double x) {
  if (nonpositive_integer(x)) return 0.0;
  return 1.0 / gamma_fn(x);
}

double f21(const HyperParams& p, double x, const EvalPolicy& policy) {
  p.validate();
  policy.validate();
  require(!std::isnan(x), ErrorKind::Domain, "x is NaN");
  require(x <= 1.0, ErrorKind::Domain, "2F1 is evaluated only for x <= 1 " + describe(p, x));
  if (x == 1.0) return f21_at_one(p);
  if (x == 0.0) return 1.0;
  if (nonpositive_integer(p.a) || nonpositive_integer(p.b)) return polynomial(p.a, p.b, p.c, x);
  if (std::abs(x) <= 0.5) return series(p.a, p.b, p.c, x, policy);
  if (x < -0.5) return f21_pfaff(p, x, policy);
  return near_one(p, x, policy);
}

double f21_at_one(const HyperParams& p) {
  p.validate();
  const double a = p.a, b = p.b, c = p.c;
  require(c > a + b, ErrorKind::Domain, "value at 1 requires c > a + b " + describe(p, 1.0));
  require(!nonpositive_integer(c - a) && !nonpositive_integer(c - b), ErrorKind::Pole,
          "Gamma pole in the denominator " + describe(p, 1.0));
  if (a == 0.0 || b == 0.0) return 1.0;
  if (c - a > 0 && c - b > 0)
    return std::exp(log_gamma(c) + log_gamma(c - a - b) - log_gamma(c - a) - log_gamma(c - b));
  return gamma_fn(c) * gamma_fn(c - a - b) * rgamma(c - a) * rgamma(c - b);
}

double f21_euler_integral(const HyperParams& p, double x, const QuadSpec& spec) {
  p.validate();
  const double a = p.a, b = p.b, c = p.c;
  require(c > b && b > 0.0, ErrorKind::Domain, "Euler integral requires c > b > 0 " + describe(p, x));
  require(x < 1.0, ErrorKind::Domain, "Euler integral requires x < 1 " + describe(p, x));
  if (x == 0.0) return 1.0;
  const QuadResult r = integrate_tanh_sinh(
      [&](double, double t, double one_minus_t) {
        return std::pow(t, b - 1.0) * std::pow(one_minus_t, c - b - 1.0) * std::pow(1.0 - x * t, -a);
      },
      0.0, 1.0, b - 1.0, c - b - 1.0, spec);
  if (!r.converged)
    raise(ErrorKind::NonConvergence, "Euler integral quadrature did not converge " + describe(p, x));
  return std::exp(log_gamma(c) - log_gamma(b) - log_gamma(c - b)) * r.value;
}

double f21_pfaff(const HyperParams& p, double y, const EvalPolicy& policy) {
  p.validate();
  require(y < 1.0, ErrorKind::Domain, "Pfaff transformation requires y < 1 " + describe(p, y));
  if (y == 0.0) return 1.0;
  const double z = y / (y - 1.0);
  return std::pow(1.0 - y, -p.b) * f21({p.c - p.a, p.b, p.c}, z, policy);
}

double f21_derivative(const HyperParams& p, double x, const EvalPolicy& policy) {
  p.validate();
  require(x < 1.0, ErrorKind::Domain, "derivative requires x < 1 " + describe(p, x));
  const double ab = p.a * p.b;
  if (ab == 0.0) return 0.0;
  return ab / p.c * f21({p.a + 1.0, p.b + 1.0, p.c + 1.0}, x, policy);
}

}  // namespace radlap
