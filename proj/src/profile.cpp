#include "radlap/profile.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "radlap/error.hpp"

namespace radlap {

double DecayClass::envelope(double rho) const {
  double e = 0.0;
  for (const Term& t : terms) e += t.bound * std::pow(rho, -t.rate);
  return e;
}

DecayClass DecayClass::scaled(double factor) const {
  return adjusted([factor](double) { return std::abs(factor); });
}

DecayClass DecayClass::adjusted(const std::function<double(double)>& factor) const {
  DecayClass d = *this;
  for (Term& t : d.terms) t.bound *= factor(t.rate);
  for (Term& t : d.far) t.bound *= factor(t.rate);
  return d;
}

namespace {

void merge_terms(std::vector<DecayClass::Term>& into, const std::vector<DecayClass::Term>& from) {
  for (const auto& t : from) {
    auto it = std::find_if(into.begin(), into.end(), [&](const DecayClass::Term& x) { return x.rate == t.rate; });
    if (it != into.end())
      it->bound += t.bound;
    else
      into.push_back(t);
  }
}

}  // namespace

DecayClass DecayClass::plus(const DecayClass& other) const {
  DecayClass d;
  d.terms = terms;
  merge_terms(d.terms, other.terms);
  if (!far.empty() || !other.far.empty()) {
    d.far = far_terms();
    merge_terms(d.far, other.far_terms());
  }
  return d;
}

double RadialProfile::difference(double r, double x) const {
  if (delta) return delta(r, x);
  return value(r * std::exp(x)) - value(r);
}

RadialProfile fbeta_profile(double beta) {
  require(beta > 0.0 && std::isfinite(beta), ErrorKind::Domain, "f_beta needs beta > 0");
  RadialProfile u;
  const double hb = 0.5 * beta;
  u.value = [hb](double r) { return -std::pow(1.0 + r * r, -hb); };
  u.deriv1 = [beta, hb](double r) { return beta * r * std::pow(1.0 + r * r, -hb - 1.0); };
  u.deriv2 = [beta, hb](double r) {
    const double q = r * r;
    return beta * std::pow(1.0 + q, -hb - 2.0) * (1.0 - (beta + 1.0) * q);
  };
  u.deriv3 = [beta, hb](double r) {
    const double q = r * r;
    return beta * (beta + 2.0) * r * std::pow(1.0 + q, -hb - 3.0) * ((beta + 1.0) * q - 3.0);
  };
  u.delta = [hb](double r, double x) {
    const double q = r * r;
    const double rel = q * std::expm1(2.0 * x) / (1.0 + q);
    return std::pow(1.0 + q, -hb) * -std::expm1(-hb * std::log1p(rel));
  };
  u.decay = DecayClass::bounded(1.0);
  u.decay.far = {{1.0, beta}};
  u.log_derivative_decay = DecayClass::bounded(beta);
  u.log_derivative_decay->far = {{beta, beta}};
  u.name = "fbeta:" + std::to_string(beta);
  return u;
}

RadialProfile power_profile(double exponent, double coef) {
  require(std::isfinite(exponent) && std::isfinite(coef), ErrorKind::Domain, "power profile needs finite data");
  const double p = exponent;
  RadialProfile u;
  u.value = [p, coef](double r) { return coef * std::pow(r, -p); };
  u.deriv1 = [p, coef](double r) { return -p * coef * std::pow(r, -p - 1.0); };
  u.deriv2 = [p, coef](double r) { return p * (p + 1.0) * coef * std::pow(r, -p - 2.0); };
  u.deriv3 = [p, coef](double r) { return -p * (p + 1.0) * (p + 2.0) * coef * std::pow(r, -p - 3.0); };
  u.delta = [p, coef](double r, double x) { return coef * std::pow(r, -p) * std::expm1(-p * x); };
  u.decay = DecayClass::power_law(std::abs(coef), p);
  u.log_derivative_decay = DecayClass::power_law(std::abs(p * coef), p);
  u.power = PowerForm{coef, p, 0.0, std::numeric_limits<double>::infinity()};
  u.name = "power";
  return u;
}

RadialProfile constant_profile(double c) {
  require(std::isfinite(c), ErrorKind::Domain, "constant profile needs a finite value");
  RadialProfile u;
  u.value = [c](double) { return c; };
  u.deriv1 = [](double) { return 0.0; };
  u.deriv2 = [](double) { return 0.0; };
  u.deriv3 = [](double) { return 0.0; };
  u.delta = [](double, double) { return 0.0; };
  u.decay = DecayClass::bounded(std::abs(c));
  u.log_derivative_decay = DecayClass::bounded(0.0);
  u.name = "const";
  return u;
}

RadialProfile combine(const std::vector<std::pair<double, RadialProfile>>& terms) {
  require(!terms.empty(), ErrorKind::Domain, "combination needs at least one term");
  auto parts = std::make_shared<const std::vector<std::pair<double, RadialProfile>>>(terms);
  bool d1 = true, d2 = true, d3 = true, ld = true;
  RadialProfile u;
  u.decay = DecayClass{};
  DecayClass ldd{};
  for (const auto& [c, v] : terms) {
    d1 = d1 && v.has_deriv1();
    d2 = d2 && v.has_deriv2();
    d3 = d3 && v.has_deriv3();
    u.decay = u.decay.plus(v.decay.scaled(c));
    if (v.log_derivative_decay)
      ldd = ldd.plus(v.log_derivative_decay->scaled(c));
    else
      ld = false;
  }
  auto sum = [parts](RadialProfile::Fn RadialProfile::*member) {
    return [parts, member](double r) {
      double acc = 0.0;
      for (const auto& [c, v] : *parts) acc += c * (v.*member)(r);
      return acc;
    };
  };
  u.value = sum(&RadialProfile::value);
  if (d1) u.deriv1 = sum(&RadialProfile::deriv1);
  if (d2) u.deriv2 = sum(&RadialProfile::deriv2);
  if (d3) u.deriv3 = sum(&RadialProfile::deriv3);
  u.delta = [parts](double r, double x) {
    double acc = 0.0;
    for (const auto& [c, v] : *parts) acc += c * v.difference(r, x);
    return acc;
  };
  if (ld) u.log_derivative_decay = ldd;
  if (terms.size() == 1 && terms.front().second.power) {
    PowerForm pf = *terms.front().second.power;
    pf.coef *= terms.front().first;
    u.power = pf;
  }
  u.name = "combination";
  return u;
}

RadialProfile rescale(const RadialProfile& u0, double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::Domain, "rescale needs lambda > 0");
  auto base = std::make_shared<const RadialProfile>(u0);
  RadialProfile u;
  u.value = [base, lambda](double r) { return base->value(lambda * r); };
  if (u0.has_deriv1()) u.deriv1 = [base, lambda](double r) { return lambda * base->deriv1(lambda * r); };
  if (u0.has_deriv2())
    u.deriv2 = [base, lambda](double r) { return lambda * lambda * base->deriv2(lambda * r); };
  if (u0.has_deriv3())
    u.deriv3 = [base, lambda](double r) { return lambda * lambda * lambda * base->deriv3(lambda * r); };
  u.delta = [base, lambda](double r, double x) { return base->difference(lambda * r, x); };
  auto dilate = [lambda](double rate) { return std::pow(lambda, -rate); };
  u.decay = u0.decay.adjusted(dilate);
  if (u0.log_derivative_decay) u.log_derivative_decay = u0.log_derivative_decay->adjusted(dilate);
  if (u0.power) {
    PowerForm pf = *u0.power;
    pf.coef *= std::pow(lambda, -pf.exponent);
    pf.r_lo /= lambda;
    pf.r_hi /= lambda;
    u.power = pf;
  }
  u.name = u0.name + "@" + std::to_string(lambda);
  return u;
}

namespace {

struct Spline {
  gsl_spline* s = nullptr;
  double t_lo = 0.0, t_hi = 0.0;
  double u_lo = 0.0, u_hi = 0.0;
  ~Spline() {
    if (s) gsl_spline_free(s);
  }
};

}  // namespace

RadialProfile spline_profile(std::vector<double> r, std::vector<double> uv) {
  require(r.size() == uv.size() && r.size() >= 3, ErrorKind::Domain, "spline needs at least 3 (r, u) pairs");
  std::vector<std::size_t> idx(r.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return r[i] < r[j]; });
  std::vector<double> t(r.size()), v(r.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double ri = r[idx[i]];
    require(ri > 0.0 && std::isfinite(ri) && std::isfinite(uv[idx[i]]), ErrorKind::Domain,
            "spline data needs finite u and r > 0");
    t[i] = std::log(ri);
    v[i] = uv[idx[i]];
    if (i > 0) require(t[i] > t[i - 1], ErrorKind::Domain, "spline abscissae must be distinct");
  }
  gsl_set_error_handler_off();
  auto sp = std::make_shared<Spline>();
  sp->s = gsl_spline_alloc(gsl_interp_cspline, t.size());
  require(sp->s != nullptr, ErrorKind::Evaluation, "spline allocation failed");
  require(gsl_spline_init(sp->s, t.data(), v.data(), t.size()) == GSL_SUCCESS, ErrorKind::Evaluation,
          "spline construction failed");
  sp->t_lo = t.front();
  sp->t_hi = t.back();
  sp->u_lo = v.front();
  sp->u_hi = v.back();

  RadialProfile u;
  u.value = [sp](double r) {
    const double x = std::log(r);
    if (x <= sp->t_lo) return sp->u_lo;
    if (x >= sp->t_hi) return sp->u_hi;
    return gsl_spline_eval(sp->s, x, nullptr);
  };
  u.deriv1 = [sp](double r) {
    const double x = std::log(r);
    if (x <= sp->t_lo || x >= sp->t_hi) return 0.0;
    return gsl_spline_eval_deriv(sp->s, x, nullptr) / r;
  };
  u.deriv2 = [sp](double r) {
    const double x = std::log(r);
    if (x <= sp->t_lo || x >= sp->t_hi) return 0.0;
    return (gsl_spline_eval_deriv2(sp->s, x, nullptr) - gsl_spline_eval_deriv(sp->s, x, nullptr)) / (r * r);
  };
  double m = 0.0, ld = 0.0;
  const int dense = 64 * static_cast<int>(t.size());
  for (int i = 0; i <= dense; ++i) {
    const double x = sp->t_lo + (sp->t_hi - sp->t_lo) * i / dense;
    m = std::max(m, std::abs(gsl_spline_eval(sp->s, x, nullptr)));
    ld = std::max(ld, std::abs(gsl_spline_eval_deriv(sp->s, x, nullptr)));
  }
  u.decay = DecayClass::bounded(1.01 * m);
  u.log_derivative_decay = DecayClass::bounded(1.5 * ld);
  u.name = "spline";
  return u;
}

RadialProfile spline_profile_from_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Domain, "cannot open profile file " + path);
  std::vector<double> r, u;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a)) continue;
    require(static_cast<bool>(ss >> b), ErrorKind::Domain, "profile file line needs two columns: " + line);
    r.push_back(a);
    u.push_back(b);
  }
  return spline_profile(std::move(r), std::move(u));
}

}  // namespace radlap
