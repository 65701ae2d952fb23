#include "radlap/subharm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "radlap/error.hpp"
#include "radlap/fraclap.hpp"

namespace radlap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct MollifierRule {
  std::vector<double> y;
  std::vector<double> w;
};

// Tanh-sinh nodes on [-R, R] weighted by the bump and normalised to unit mass.
MollifierRule mollifier_rule(double radius) {
  MollifierRule rule;
  const double h = 1.0 / 16.0;
  double mass = 0.0;
  for (int j = -64; j <= 64; ++j) {
    const double t = j * h;
    const double u = 0.5 * kPi * std::sinh(t);
    const double x = std::tanh(u);
    const double ch = std::cosh(u);
    const double dx = 0.5 * kPi * std::cosh(t) / (ch * ch);
    const double e = 1.0 - x * x;
    if (e <= 0.0) continue;
    const double phi = std::exp(-1.0 / e);
    const double wt = dx * phi;
    if (wt < 1e-300) continue;
    rule.y.push_back(radius * x);
    rule.w.push_back(wt);
    mass += wt;
  }
  for (double& v : rule.w) v /= mass;
  return rule;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
  require(lo > 0.0 && hi >= lo && n >= 1, ErrorKind::Domain, "log grid needs 0 < lo <= hi and n >= 1");
  std::vector<double> g(static_cast<std::size_t>(n));
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

void ConditionGrid::validate() const {
  require(!r_values.empty() && !tau_values.empty(), ErrorKind::Domain, "condition grid must be non-empty");
  require(r_values.front() > 0.0, ErrorKind::Domain, "grid radii must be positive");
  for (std::size_t i = 1; i < r_values.size(); ++i)
    require(r_values[i] > r_values[i - 1], ErrorKind::Domain, "grid radii must be strictly increasing");
  require(tau_values.front() >= 1.0, ErrorKind::Domain, "grid tau values must be >= 1");
  for (std::size_t i = 1; i < tau_values.size(); ++i)
    require(tau_values[i] >= tau_values[i - 1], ErrorKind::Domain, "grid tau values must be sorted");
}

ConditionGrid ConditionGrid::make(double r_min, double r_max, int r_points, double log_tau_min, double log_tau_max,
                                  int tau_points) {
  require(tau_points >= 1 && log_tau_min >= 0.0 && log_tau_max >= log_tau_min, ErrorKind::Domain,
          "tau range must satisfy 0 <= log_tau_min <= log_tau_max");
  ConditionGrid g;
  g.r_values = log_grid(r_min, r_max, r_points);
  for (int j = 0; j < tau_points; ++j) {
    const double x = tau_points == 1 ? log_tau_min
                                     : log_tau_min + (log_tau_max - log_tau_min) * j / (tau_points - 1);
    g.tau_values.push_back(std::exp(x));
  }
  return g;
}

ConditionGrid ConditionGrid::standard() { return make(1e-3, 1e3, 64, 1e-4, 10.0, 64); }

ConditionReport check_cond1(const RadialProfile& u, const FracParams& p, const ConditionGrid& grid, double slack) {
  p.validate();
  grid.validate();
  require(slack >= 0.0, ErrorKind::Domain, "slack must be non-negative");
  ConditionReport rep;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (double r : grid.r_values) {
    for (double tau : grid.tau_values) {
      const double x = std::log(tau);
      const double b = bracket_log(u, p, r, x);
      require(std::isfinite(b), ErrorKind::Evaluation, "non-finite bracket at r=" + std::to_string(r));
      const double scale = std::max({std::abs(u(r)), std::abs(u(r * tau)), std::abs(u(r / tau))});
      ++rep.samples_checked;
      if (b > slack * scale) rep.holds = false;
      if (b > rep.worst_margin) {
        rep.worst_margin = b;
        rep.worst_r = r;
        rep.worst_tau = tau;
      }
    }
  }
  return rep;
}

ConditionReport check_cond2(const RadialProfile& u, const FracParams& p, const std::vector<double>& r_values,
                            double slack) {
  p.validate();
  require(u.has_deriv2(), ErrorKind::MissingDerivative, "condition needs u' and u''");
  require(!r_values.empty(), ErrorKind::Domain, "radius list must be non-empty");
  require(slack >= 0.0, ErrorKind::Domain, "slack must be non-negative");
  const double coef = p.gamma() + 1.0;
  ConditionReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (double r : r_values) {
    require(r > 0.0, ErrorKind::Domain, "radii must be positive");
    const double d2 = u.deriv2(r);
    const double t1 = coef * u.deriv1(r) / r;
    const double e = d2 + t1;
    require(std::isfinite(e), ErrorKind::Evaluation, "non-finite derivative at r=" + std::to_string(r));
    ++rep.samples_checked;
    if (e < -slack * (std::abs(d2) + std::abs(t1))) rep.holds = false;
    if (e < rep.worst_margin) {
      rep.worst_margin = e;
      rep.worst_r = r;
    }
  }
  return rep;
}

ConditionReport check_condition_equivalence(const RadialProfile& u, const FracParams& p, const ConditionGrid& grid,
                                            double slack) {
  const ConditionReport c1 = check_cond1(u, p, grid, slack);
  const ConditionReport c2 = check_cond2(u, p, grid.r_values, slack);
  ConditionReport rep;
  rep.samples_checked = c1.samples_checked + c2.samples_checked;
  rep.holds = c1.holds == c2.holds;
  rep.note = std::string("two-scale ") + (c1.holds ? "holds" : "fails") + ", differential " +
             (c2.holds ? "holds" : "fails");
  if (!rep.holds) {
    const ConditionReport& bad = c1.holds ? c2 : c1;
    rep.worst_margin = std::abs(bad.worst_margin);
    rep.worst_r = bad.worst_r;
    rep.worst_tau = bad.worst_tau;
  }
  return rep;
}

ConditionReport check_kconvex_radial(const RadialProfile& u, int k, int n, const std::vector<double>& r_values,
                                     double slack) {
  require(k >= 1 && k <= n, ErrorKind::Domain, "k-convexity needs 1 <= k <= n");
  const double s = n * (k - 1.0) / (2.0 * k) + 1.0;
  return check_cond2(u, FracParams{s, n}, r_values, slack);
}

RadialProfile mellin_mollify(const RadialProfile& u, double epsilon, double bump_radius) {
  require(epsilon > 0.0 && std::isfinite(epsilon), ErrorKind::Domain, "epsilon must be positive");
  require(bump_radius > 0.0 && std::isfinite(bump_radius), ErrorKind::Domain, "bump radius must be positive");
  const MollifierRule rule = mollifier_rule(bump_radius);
  auto base = std::make_shared<const RadialProfile>(u);
  auto dil = std::make_shared<std::vector<double>>();
  for (double y : rule.y) dil->push_back(std::exp(-epsilon * y));
  auto w = std::make_shared<const std::vector<double>>(rule.w);

  auto mix = [base, dil, w](RadialProfile::Fn RadialProfile::*member, int order) {
    return [base, dil, w, member, order](double r) {
      double acc = 0.0;
      for (std::size_t j = 0; j < w->size(); ++j) {
        const double q = (*dil)[j];
        acc += (*w)[j] * std::pow(q, order) * (base.get()->*member)(r * q);
      }
      return acc;
    };
  };
  RadialProfile m;
  m.value = mix(&RadialProfile::value, 0);
  if (u.has_deriv1()) m.deriv1 = mix(&RadialProfile::deriv1, 1);
  if (u.has_deriv2()) m.deriv2 = mix(&RadialProfile::deriv2, 2);
  if (u.has_deriv3()) m.deriv3 = mix(&RadialProfile::deriv3, 3);
  m.delta = [base, dil, w](double r, double x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w->size(); ++j) acc += (*w)[j] * base->difference(r * (*dil)[j], x);
    return acc;
  };
  const double spread = std::exp(epsilon * bump_radius);
  auto widen = [spread](double rate) { return std::pow(spread, std::abs(rate)); };
  m.decay = u.decay.adjusted(widen);
  if (u.log_derivative_decay) m.log_derivative_decay = u.log_derivative_decay->adjusted(widen);
  if (u.power) {
    PowerForm pf = *u.power;
    double mult = 0.0;
    for (std::size_t j = 0; j < w->size(); ++j) mult += (*w)[j] * std::pow((*dil)[j], -pf.exponent);
    pf.coef *= mult;
    pf.r_lo *= spread;
    pf.r_hi /= spread;
    if (pf.r_lo < pf.r_hi) m.power = pf;
  }
  m.name = "mollified(" + u.name + ")";
  return m;
}

ConditionReport check_max_principle(const RadialProfile& u, const FracParams& p, const ConditionGrid& grid,
                                    double slack) {
  const ConditionReport c1 = check_cond1(u, p, grid, slack);
  if (!c1.holds)
    raise(ErrorKind::Precondition, "two-scale condition fails at r=" + std::to_string(c1.worst_r) +
                                       "; the maximum principle does not apply");
  ConditionReport rep;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, mag = 0.0;
  for (double r : grid.r_values) {
    const double v = u(r);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mag = std::max(mag, std::abs(v));
  }
  const double tol = slack * std::max(mag, std::numeric_limits<double>::min());
  if (hi - lo <= tol) {
    rep.note = "constant on grid";
    rep.samples_checked = grid.r_values.size();
    return rep;
  }
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (double r : grid.r_values) {
    const double v = u(r);
    double margin = std::numeric_limits<double>::infinity();
    for (double tau : grid.tau_values) {
      if (tau <= 1.0) continue;
      margin = std::min(margin, v - std::max(u(r * tau), u(r / tau)));
      ++rep.samples_checked;
    }
    if (margin > rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_r = r;
    }
  }
  rep.holds = rep.worst_margin <= tol;
  return rep;
}

}  // namespace radlap
