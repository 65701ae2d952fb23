#include "radlap/fraclap.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "radlap/error.hpp"
#include "radlap/hessianx.hpp"

namespace radlap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSmallLog = 0.05;
constexpr double kTaylorLog = 1e-5;

constexpr std::array<double, 5> kGlX = {0.1488743389816312108848260, 0.4333953941292471907992659,
                                        0.6794095682990244062343274, 0.8650633666889845107320967,
                                        0.9739065285171717200779640};
constexpr std::array<double, 5> kGlW = {0.2955242247147528701738930, 0.2692667193099963550912269,
                                        0.2190863625159820439955349, 0.1494513491505805931457763,
                                        0.0666713443086881375935688};

// 10-point Gauss-Legendre on [0, x].
template <class F>
double gl(F&& f, double x) {
  const double h = 0.5 * x;
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kGlW[i] * (f(h - h * kGlX[i]) + f(h + h * kGlX[i]));
  return h * acc;
}

bool power_applies(const RadialProfile& u, double r, double tau) {
  return u.power && r / tau >= u.power->r_lo && r * tau <= u.power->r_hi;
}

double power_bracket(const PowerForm& pf, double gamma, double r, double x) {
  return pf.coef * std::pow(r, -pf.exponent) * std::expm1((pf.exponent - gamma) * x) * std::expm1(-pf.exponent * x);
}

void check_decay(const DecayClass& d, const FracParams& p, const char* what) {
  for (const auto& t : d.terms) {
    if (t.bound == 0.0) continue;
    require(t.rate < p.n && t.rate > -2.0 * p.s, ErrorKind::Integrability,
            std::string(what) + ": envelope rho^-" + std::to_string(t.rate) +
                " violates the growth condition for n=" + std::to_string(p.n) + ", s=" + std::to_string(p.s));
  }
}

// int_T^inf W(tau) tau^-e dtau, from the series of the weight in z = tau^-2.
double weight_tail(const FracParams& p, double t, double e) {
  const double s2 = 2.0 * p.s;
  const double z0 = 1.0 / (t * t);
  const double hn = 0.5 * p.n;
  std::array<double, 24> pw{}, hg{};
  pw[0] = hg[0] = 1.0;
  for (std::size_t k = 1; k < pw.size(); ++k) {
    const double km = static_cast<double>(k) - 1.0;
    pw[k] = pw[k - 1] * (1.0 + s2 + km) / (km + 1.0);
    hg[k] = hg[k - 1] * (-p.s + km) * (hn - 1.0 - p.s + km) / ((hn + km) * (km + 1.0));
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < pw.size(); ++k) {
    double c = 0.0;
    for (std::size_t j = 0; j <= k; ++j) c += pw[j] * hg[k - j];
    const double q = static_cast<double>(k) + p.s + 0.5 * e;
    acc += c * std::pow(z0, q) / q;
  }
  return 0.5 * sphere_area(p.n) * acc;
}

// Bound for int_T^inf |bracket| W(tau) dtau. With ur = 0 the u(r) part is
// left out, for callers that integrate it with weight_tail.
double tail_bound(const RadialProfile& u, const FracParams& p, double r, double ur, double t) {
  const double s2 = 2.0 * p.s;
  const double g = p.gamma();
  const double z = 1.0 / (t * t);
  const double wc = sphere_area(p.n) * std::pow(1.0 - z, -1.0 - s2) *
                    f21({p.s, std::abs(0.5 * p.n - 1.0 - p.s), 0.5 * p.n}, z);
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto piece = [&](double coef, double e) {
    if (coef == 0.0) return 0.0;
    if (s2 - e <= 0.0) return inf;
    return coef * std::pow(t, e - s2) / (s2 - e);
  };
  auto outer = [&](const std::vector<DecayClass::Term>& ts) {
    double acc = 0.0;
    for (const auto& term : ts) acc += piece(term.bound * std::pow(r, -term.rate), -term.rate);
    return acc;
  };
  auto inner = [&](const std::vector<DecayClass::Term>& ts) {
    double acc = 0.0;
    for (const auto& term : ts) acc += piece(term.bound * std::pow(r, -term.rate), term.rate - g);
    return acc;
  };
  const auto& near = u.decay.terms;
  const auto& far = u.decay.far_terms();
  const double own = piece(std::abs(ur), 0.0) + piece(std::abs(ur), -g);
  return wc * (own + std::min(outer(near), outer(far)) + std::min(inner(near), inner(far)));
}

}  // namespace

double normalization_constant(const FracParams& p, NormalizationMode mode) {
  p.validate_operator();
  if (mode == NormalizationMode::unnormalized) return 1.0;
  return std::pow(4.0, p.s) * gamma_fn(0.5 * p.n + p.s) / (std::pow(kPi, 0.5 * p.n) * std::abs(gamma_fn(-p.s)));
}

double bracket(const RadialProfile& u, const FracParams& p, double r, double tau) {
  require(r > 0.0 && std::isfinite(r), ErrorKind::Domain, "bracket needs r > 0");
  require(tau >= 1.0 && std::isfinite(tau), ErrorKind::Domain, "bracket needs tau >= 1");
  if (tau == 1.0) return 0.0;
  if (power_applies(u, r, tau)) return power_bracket(*u.power, p.gamma(), r, std::log(tau));
  const double ur = u(r);
  const double v = ur - u(r * tau) + (ur - u(r / tau)) * std::pow(tau, -p.gamma());
  require(std::isfinite(v), ErrorKind::Evaluation, "profile produced a non-finite bracket");
  return v;
}

double bracket_log(const RadialProfile& u, const FracParams& p, double r, double x) {
  require(x >= 0.0, ErrorKind::Domain, "bracket_log needs x >= 0");
  if (x == 0.0) return 0.0;
  const double g = p.gamma();
  if (u.power && r * std::exp(-x) >= u.power->r_lo && r * std::exp(x) <= u.power->r_hi)
    return power_bracket(*u.power, g, r, x);
  if (x < kSmallLog && u.has_deriv2()) {
    auto vp = [&](double t) {
      const double rho = r * std::exp(t);
      return rho * u.deriv1(rho);
    };
    auto w = [&](double t) {
      const double rho = r * std::exp(t);
      return rho * u.deriv1(rho) + rho * rho * u.deriv2(rho);
    };
    const double second = gl([&](double z) { return (w(z) + w(-z)) * (x - z); }, x);
    const double dminus = -gl([&](double y) { return vp(-y); }, x);
    return -second - dminus * std::expm1(-g * x);
  }
  if (x < kTaylorLog && u.has_deriv1()) {
    const double h = 1e-4;
    auto vp = [&](double t) {
      const double rho = r * std::exp(t);
      return rho * u.deriv1(rho);
    };
    const double v1 = vp(0.0);
    const double v2 = (vp(h) - vp(-h)) / (2.0 * h);
    return -x * x * (v2 + g * v1) + 0.5 * x * x * x * (g * g * v1 + g * v2);
  }
  const double dp = u.difference(r, x);
  const double dm = u.difference(r, -x);
  return -dp - dm * std::exp(-g * x);
}

double check_integrability(const RadialProfile& u, const FracParams& p) {
  p.validate();
  check_decay(u.decay, p, "integrability");
  QuadSpec coarse;
  coarse.abs_tol = 0.0;
  coarse.rel_tol = 1e-6;
  coarse.max_levels = 40;
  const double e = p.n + 2.0 * p.s;
  const QuadResult q = integrate_log_scale(
      [&](double r) { return std::abs(u(r)) * std::pow(r, p.n - 1) * std::pow(1.0 + r, -e); }, 1e-6, 1e6, coarse);
  require(std::isfinite(q.value), ErrorKind::Integrability, "growth integral is not finite");
  return q.value;
}

QuadResult fraclap_evaluate(const RadialProfile& u, const FracParams& p, double r, NormalizationMode mode,
                            const QuadSpec& spec) {
  p.validate_operator();
  spec.validate();
  require(r > 0.0 && std::isfinite(r), ErrorKind::Domain, "fraclap needs r > 0");
  check_decay(u.decay, p, "fraclap");
  const double s2 = 2.0 * p.s;
  const double scale = normalization_constant(p, mode) * std::pow(r, -s2);
  QuadSpec inner = spec;
  inner.abs_tol = 0.25 * spec.abs_tol / scale;
  inner.rel_tol = 0.25 * spec.rel_tol;
  inner.truncation_tol = 0.5 * spec.truncation_tol / scale;
  const EvalPolicy policy;

  double lead = std::numeric_limits<double>::quiet_NaN();
  const QuadResult near = integrate_endpoint_singular_offset(
      [&](double d) {
        if (d > 1e-100) {
          const double b = bracket_log(u, p, r, std::log1p(d));
          return b == 0.0 ? 0.0 : b * kernel_weight_offset(p, d, policy);
        }
        // The bracket is lead * d^2 here and would underflow for small d.
        if (std::isnan(lead)) lead = bracket_log(u, p, r, 1e-100) * 1e200;
        if (lead == 0.0) return 0.0;
        const double logw = std::log(sphere_area(p.n)) - (1.0 + s2) * std::log(2.0 * d) +
                            std::log(f21({-p.s, 0.5 * p.n - 1.0 - p.s, 0.5 * p.n}, 1.0, policy));
        return std::copysign(std::exp(std::log(std::abs(lead)) + 2.0 * std::log(d) + logw), lead);
      },
      1.0,
      1.0 - s2, inner);

  const double ur = u(r);
  double t = 20.0;
  double tail = 0.0;
  double rest = 0.0;
  const bool pure_power = u.power && u.power->r_lo == 0.0 && std::isinf(u.power->r_hi) &&
                          u.power->exponent < p.n && u.power->exponent > -s2;
  if (pure_power) {
    // The bracket is u(r) (1 - tau^-e + tau^-g - tau^(e-g)).
    const double e = u.power->exponent, g = p.gamma();
    rest = ur * ((weight_tail(p, t, 0.0) - weight_tail(p, t, e)) + (weight_tail(p, t, g) - weight_tail(p, t, g - e)));
  }
  for (; !pure_power; t *= 10.0) {
    require(t < 1e300, ErrorKind::Integrability, "tail bound cannot be certified for the declared decay class");
    tail = tail_bound(u, p, r, ur, t);
    if (tail <= inner.truncation_tol) break;
    tail = tail_bound(u, p, r, 0.0, t);
    if (tail <= inner.truncation_tol) {
      rest = ur * (weight_tail(p, t, 0.0) + weight_tail(p, t, p.gamma()));
      break;
    }
  }
  const QuadResult far = integrate_finite(
      [&](double sigma) {
        const double tau = std::exp(sigma);
        return bracket_log(u, p, r, sigma) * kernel_weight(p, tau, policy) * tau;
      },
      std::log(2.0), std::log(t), inner);

  QuadResult res;
  res.value = scale * (near.value + far.value + rest);
  res.error_estimate = scale * (near.error_estimate + far.error_estimate + tail);
  res.evaluations = near.evaluations + far.evaluations;
  res.converged = near.converged && far.converged && res.error_estimate <= spec.target(res.value);
  return res;
}

double fraclap_radial(const RadialProfile& u, const FracParams& p, double r, NormalizationMode mode,
                      const QuadSpec& spec) {
  const QuadResult q = fraclap_evaluate(u, p, r, mode, spec);
  if (!q.converged)
    raise(ErrorKind::NonConvergence, "fraclap quadrature did not reach tolerance at r=" + std::to_string(r) +
                                         " (error estimate " + std::to_string(q.error_estimate) + ")");
  return q.value;
}

RadialProfile derivative_rule_profile(const RadialProfile& u, double s) {
  require(u.has_deriv1(), ErrorKind::MissingDerivative, "derivative rule needs u'");
  require(u.log_derivative_decay.has_value(), ErrorKind::Integrability,
          "derivative rule needs a decay class for r u'(r)");
  RadialProfile w;
  auto base = std::make_shared<const RadialProfile>(u);
  w.value = [base, s](double r) { return -2.0 * s * base->value(r) + r * base->deriv1(r); };
  if (u.has_deriv2())
    w.deriv1 = [base, s](double r) { return (1.0 - 2.0 * s) * base->deriv1(r) + r * base->deriv2(r); };
  if (u.has_deriv3()) {
    w.deriv2 = [base, s](double r) { return (2.0 - 2.0 * s) * base->deriv2(r) + r * base->deriv3(r); };
  }
  w.decay = u.decay.scaled(2.0 * s).plus(*u.log_derivative_decay);
  w.name = "derivative-rule(" + u.name + ")";
  return w;
}

double fraclap_derivative(const RadialProfile& u, const FracParams& p, double r, NormalizationMode mode,
                          const QuadSpec& spec) {
  require(u.has_deriv1(), ErrorKind::MissingDerivative, "fraclap_derivative needs u'");
  return fraclap_radial(derivative_rule_profile(u, p.s), p, r, mode, spec) / r;
}

double fbeta_closed_form_constant(double beta, const FracParams& p) {
  p.validate_operator();
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, double> cache;
  const auto key = std::make_tuple(p.n, p.s, beta);
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const RadialProfile u = fbeta_profile(beta);
  QuadSpec spec;
  spec.rel_tol = 1e-12;
  const double g6 = -fraclap_radial(u, p, 1e-6, NormalizationMode::unnormalized, spec);
  const double g5 = -fraclap_radial(u, p, 1e-5, NormalizationMode::unnormalized, spec);
  const double c = g6 + (g6 - g5) / 99.0;
  cache.emplace(key, c);
  return c;
}

double fbeta_closed_form(double beta, const FracParams& p, double r, const EvalPolicy& policy) {
  require(r >= 0.0 && std::isfinite(r), ErrorKind::Domain, "closed form needs r >= 0");
  const double c = fbeta_closed_form_constant(beta, p);
  return c * f21({0.5 * p.n + p.s, p.s + 0.5 * beta, 0.5 * p.n}, -r * r, policy);
}

double fbeta_fraclap_closed_form(const HessianCase& k_case, double r, const EvalPolicy& policy) {
  return fbeta_closed_form(k_case.beta_value(), {k_case.s_value(), k_case.n}, r, policy);
}

}  // namespace radlap
