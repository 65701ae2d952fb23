#include "radlap/hessianx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "radlap/error.hpp"

namespace radlap {

namespace {

std::int64_t isqrt_exact(std::int64_t v) {
  require(v >= 0, ErrorKind::Domain, "square root of a negative rational");
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  require(r * r == v, ErrorKind::Domain, std::to_string(v) + " is not a perfect square");
  return r;
}

void assert_identity(bool ok, const HessianCase& hc, const std::string& what) {
  require(ok, ErrorKind::Domain,
          "case k=" + std::to_string(hc.k) + ", n=" + std::to_string(hc.n) + " violates " + what);
}

std::string case_label(const HessianCase& hc) {
  return "k=" + std::to_string(hc.k) + ", n=" + std::to_string(hc.n);
}

// Second difference scaled to a uniform step equal to the local mean spacing.
double scaled_second_difference(double t0, double t1, double t2, double y0, double y1, double y2) {
  const double dd = 2.0 * ((y2 - y1) / (t2 - t1) - (y1 - y0) / (t1 - t0)) / (t2 - t0);
  const double h = 0.5 * (t2 - t0);
  return dd * h * h;
}

}  // namespace

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

Rational exact_sqrt(const Rational& q) { return Rational(isqrt_exact(q.numerator()), isqrt_exact(q.denominator())); }

HyperParams HessianCase::numerator_params() const { return {to_double(c - a), to_double(b), to_double(c)}; }

HyperParams HessianCase::denominator_params() const {
  return {to_double(c - a), to_double(b) + 1.0, to_double(c) + 1.0};
}

HyperParams HessianCase::profile_params() const { return {to_double(a), to_double(b), to_double(c)}; }

HessianCase make_case(int k, int n) {
  require(k >= 1, ErrorKind::Domain, "k must be >= 1");
  require(n >= 2 * k, ErrorKind::Domain, "case needs n >= 2k, got k=" + std::to_string(k) + ", n=" + std::to_string(n));
  HessianCase hc;
  hc.k = k;
  hc.n = n;
  hc.alpha = Rational(2 * k, k + 1);
  hc.beta = Rational(n, k) - 2;
  hc.s = Rational(k, k + 1);
  hc.a = (Rational(n) + hc.alpha) / 2;
  hc.b = (hc.alpha + hc.beta) / 2;
  hc.c = Rational(n, 2);
  hc.d1 = 2 * hc.a + hc.b - 2 * hc.c;
  hc.d2 = hc.c - hc.a + 1;
  hc.d3 = 4 * hc.a * (2 * hc.c - hc.a - hc.b);

  assert_identity(hc.d3 == 4 * hc.a * hc.b * (k - 1), hc, "d3 = 4ab(k-1)");
  const Rational root_arg = hc.d1 * hc.d1 + hc.d3;
  assert_identity(2 * hc.c - hc.b > 0 && exact_sqrt(root_arg) == 2 * hc.c - hc.b, hc, "sqrt(d1^2+d3) = 2c-b");
  assert_identity(hc.a > hc.c && hc.c > hc.b && hc.b > 0, hc, "a > c > b > 0");
  if (k >= 2) {
    assert_identity(hc.a > hc.b + 1, hc, "a > b+1");
    assert_identity(hc.c - hc.b - 1 > 0, hc, "c-b-1 > 0");
  } else {
    assert_identity(hc.a == hc.b + 1, hc, "a = b+1");
  }
  return hc;
}

double ratio_f(const HessianCase& hc, double t, const EvalPolicy& policy) {
  require(t <= 1.0, ErrorKind::Domain, "ratio_f needs t <= 1");
  const HyperParams num = hc.numerator_params();
  const HyperParams den = hc.denominator_params();
  if (t == 1.0) return f21_at_one(num) / f21_at_one(den);
  return f21(num, t, policy) / f21(den, t, policy);
}

double bound_g(const HessianCase& hc, double t) {
  require(t >= 0.0 && std::isfinite(t), ErrorKind::Domain, "bound_g needs t >= 0");
  const double d1 = to_double(hc.d1), d2 = to_double(hc.d2), d3 = to_double(hc.d3), c = to_double(hc.c);
  const double l = d1 * t - d2 * (1.0 - t);
  return (l + std::sqrt(l * l + d3 * t)) / (2.0 * c);
}

double bound_g_derivative(const HessianCase& hc, double t) {
  require(t >= 0.0 && std::isfinite(t), ErrorKind::Domain, "bound_g needs t >= 0");
  const double d1 = to_double(hc.d1), d2 = to_double(hc.d2), d3 = to_double(hc.d3), c = to_double(hc.c);
  const double l = d1 * t - d2 * (1.0 - t);
  const double lp = d1 + d2;
  const double root = std::sqrt(l * l + d3 * t);
  return (lp + (2.0 * l * lp + d3) / (2.0 * root)) / (2.0 * c);
}

Rational f_prime_at_1_exact(const HessianCase& hc) {
  if (hc.k == 1)
    raise(ErrorKind::InfiniteDerivative, "f'(1) is infinite for k = 1 (a = b + 1)");
  return hc.a * (hc.a - hc.c) / (hc.c * (hc.a - hc.b - 1));
}

double f_prime_at_1(const HessianCase& hc) { return to_double(f_prime_at_1_exact(hc)); }

Rational g_prime_at_1_exact(const HessianCase& hc) {
  require(2 * hc.c > hc.b, ErrorKind::Domain, "g'(1) needs 2c > b");
  return hc.a * (hc.c + 1) / (hc.c * (2 * hc.c - hc.b));
}

double g_prime_at_1(const HessianCase& hc) { return to_double(g_prime_at_1_exact(hc)); }

TangentReport tangent_report(const HessianCase& hc, double tol, const EvalPolicy& policy) {
  TangentReport t;
  t.f_at_1 = ratio_f(hc, 1.0, policy);
  t.g_at_1 = bound_g(hc, 1.0);
  t.f_prime_exact = f_prime_at_1_exact(hc);
  t.g_prime_exact = g_prime_at_1_exact(hc);
  t.f_prime_1 = to_double(t.f_prime_exact);
  t.g_prime_1 = to_double(t.g_prime_exact);
  t.chain_ok = std::abs(t.f_at_1 - t.g_at_1) <= tol * std::max(1.0, std::abs(t.f_at_1)) &&
               t.f_prime_1 <= t.g_prime_1 + tol;
  return t;
}

ConditionReport check_g_concavity(const HessianCase& hc, double slack) {
  require(hc.k >= 2, ErrorKind::Precondition, "concavity of g is part of the k >= 2 route");
  ConditionReport rep;
  const Rational lhs = hc.d3 - 4 * hc.d2 * (hc.d1 + hc.d2);
  const Rational rhs = 4 * (hc.c + 1) * (hc.c - hc.b - 1);
  const Rational disc = hc.d3 * lhs;
  if (lhs != rhs || disc < 0) {
    rep.holds = false;
    rep.note = "discriminant factorisation failed: " + to_string(lhs) + " vs " + to_string(rhs);
  } else {
    rep.note = "discriminant " + to_string(disc);
  }
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  std::vector<double> g;
  for (int i = 0; i <= 50; ++i) g.push_back(bound_g(hc, 0.1 * i));
  for (int i = 1; i < 50; ++i) {
    const double d = g[i - 1] - 2.0 * g[i] + g[i + 1];
    ++rep.samples_checked;
    if (d > rep.worst_margin) {
      rep.worst_margin = d;
      rep.worst_r = 0.1 * i;
    }
    if (d > slack) rep.holds = false;
  }
  return rep;
}

std::vector<double> default_fg_grid() {
  std::vector<double> t;
  for (int i = 0; i < 100; ++i) t.push_back(i / 100.0);
  for (int j = 1; j <= 99; ++j) t.push_back(1.0 - 0.05 * std::pow(10.0, -4.0 * j / 99.0));
  t.push_back(1.0);
  std::sort(t.begin(), t.end());
  return t;
}

ConditionReport check_fg_inequality(const HessianCase& hc, const std::vector<double>& t_grid,
                                    const EvalPolicy& policy, double slack) {
  require(hc.k >= 2, ErrorKind::Precondition, "the f >= g comparison needs k >= 2");
  require(!t_grid.empty(), ErrorKind::Domain, "t grid must be non-empty");
  const double f1 = ratio_f(hc, 1.0, policy), g1 = bound_g(hc, 1.0);
  const double fp = f_prime_at_1(hc), gp = g_prime_at_1(hc);
  ConditionReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  int tangent_failures = 0;
  for (double t : t_grid) {
    require(t >= 0.0 && t <= 1.0, ErrorKind::Domain, "f >= g is checked on [0, 1]");
    const double f = ratio_f(hc, t, policy);
    const double g = bound_g(hc, t);
    ++rep.samples_checked;
    if (f - g < rep.worst_margin) {
      rep.worst_margin = f - g;
      rep.worst_r = t;
    }
    if (f - g < -slack) rep.holds = false;
    if (f - (f1 + (t - 1.0) * fp) < -slack || (g1 + (t - 1.0) * gp) - g < -slack) ++tangent_failures;
  }
  if (tangent_failures > 0) {
    rep.holds = false;
    rep.note = std::to_string(tangent_failures) + " tangent-line violations";
  }
  return rep;
}

std::vector<double> default_log_convexity_grid() {
  std::vector<double> t;
  const int m = 200;
  for (int i = 0; i < m; ++i) t.push_back(-5.0 + (0.99 + 5.0) * i / (m - 1));
  t.back() = 0.99;
  return t;
}

ConditionReport check_log_convexity(const HessianCase& hc, const std::vector<double>& t_grid,
                                    const EvalPolicy& policy, double slack) {
  const HyperParams num = hc.numerator_params();
  const HyperParams den = hc.denominator_params();
  require(num.a > -1.0 && num.a < 0.0 && num.c > num.b && num.b > 0.0, ErrorKind::Precondition,
          "log-convexity needs -1 < c-a < 0 and c > b > 0 (" + case_label(hc) + ")");
  require(t_grid.size() >= 3, ErrorKind::Domain, "log-convexity grid needs at least 3 points");
  ConditionReport rep;
  std::vector<double> lf;
  for (double t : t_grid) {
    require(t < 1.0, ErrorKind::Domain, "log-convexity grid must lie below 1");
    lf.push_back(std::log(ratio_f(hc, t, policy)));
  }
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < t_grid.size(); ++i) {
    const double d =
        scaled_second_difference(t_grid[i - 1], t_grid[i], t_grid[i + 1], lf[i - 1], lf[i], lf[i + 1]);
    ++rep.samples_checked;
    if (d < rep.worst_margin) {
      rep.worst_margin = d;
      rep.worst_r = t_grid[i];
    }
    if (d < -slack) rep.holds = false;
  }

  // Companion ratio R(x) = F(a,b;c;x)/F(a+1,b+1;c+1;x).
  const HyperParams pa = hc.profile_params();
  const HyperParams pa1{pa.a + 1.0, pa.b + 1.0, pa.c + 1.0};
  auto ratio = [&](double x) { return f21(pa, x, policy) / f21(pa1, x, policy); };
  std::vector<double> xs, rs;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(-5.0 + 5.9 * i / 99.0);
    rs.push_back(ratio(xs.back()));
  }
  double rmax = 0.0;
  for (double v : rs) rmax = std::max(rmax, std::abs(v));
  int companion_failures = 0;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    ++rep.samples_checked;
    if (scaled_second_difference(xs[i - 1], xs[i], xs[i + 1], rs[i - 1], rs[i], rs[i + 1]) < -slack * rmax)
      ++companion_failures;
  }
  for (double x : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    const double lhs = ratio(-x);
    const double rhs = (1.0 + x) * ratio_f(hc, x / (1.0 + x), policy);
    ++rep.samples_checked;
    if (std::abs(lhs - rhs) > 1e-10 * std::abs(rhs)) ++companion_failures;
  }

  // Cross products of f1 = F(c-a,b;c;.) and f2 = F(c-a,b+1;c+1;.).
  int cross_failures = 0;
  const HyperParams num1{num.a + 1.0, num.b + 1.0, num.c + 1.0};
  const HyperParams den1{den.a + 1.0, den.b + 1.0, den.c + 1.0};
  for (int i = 0; i < 20; ++i) {
    const double x = -5.0 + 5.95 * i / 19.0;
    const double f1 = f21(num, x, policy), f2 = f21(den, x, policy);
    const double f1p = f21_derivative(num, x, policy), f2p = f21_derivative(den, x, policy);
    const double f1pp = num.a * num.b / num.c * f21_derivative(num1, x, policy);
    const double f2pp = den.a * den.b / den.c * f21_derivative(den1, x, policy);
    rep.samples_checked += 2;
    if (!(f1p * f2 - f2p * f1 > 0.0)) ++cross_failures;
    if (!(f1pp * f2 - f2pp * f1 > 0.0)) ++cross_failures;
  }
  if (companion_failures + cross_failures > 0) {
    rep.holds = false;
    rep.note = std::to_string(companion_failures) + " companion-ratio failures, " + std::to_string(cross_failures) +
               " cross-product failures";
  }
  return rep;
}

namespace {

struct KTerms {
  double expr, scale, f0, f1, f2;
};

KTerms k_terms(const HessianCase& hc, double r, const EvalPolicy& policy) {
  const HyperParams p = hc.profile_params();
  const HyperParams p1{p.a + 1.0, p.b + 1.0, p.c + 1.0};
  const double x = r * r;
  KTerms t;
  t.f0 = f21(p, -x, policy);
  t.f1 = f21_derivative(p, -x, policy);
  t.f2 = p.a * p.b / p.c * f21_derivative(p1, -x, policy);
  const double phi = t.f0;
  const double phi1 = -2.0 * r * t.f1;
  const double phi2 = 4.0 * x * t.f2 - 2.0 * t.f1;
  const double coef = hc.n - hc.alpha_value() + 1.0;
  const double a = phi2, b = (hc.k - 1) * phi1 * phi1 / phi, c = coef * phi1 / r;
  t.expr = a + b + c;
  t.scale = std::abs(a) + std::abs(b) + std::abs(c);
  return t;
}

}  // namespace

ConditionReport check_k_inequality(const HessianCase& hc, const std::vector<double>& r_grid,
                                   const EvalPolicy& policy, double slack) {
  require(!r_grid.empty(), ErrorKind::Domain, "radius grid must be non-empty");
  ConditionReport rep;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    require(r > 0.0, ErrorKind::Domain, "radii must be positive");
    const KTerms t = k_terms(hc, r, policy);
    const double m = t.scale > 0.0 ? t.expr / t.scale : t.expr;
    ++rep.samples_checked;
    if (m > rep.worst_margin) {
      rep.worst_margin = m;
      rep.worst_r = r;
    }
    if (m > slack) rep.holds = false;
  }
  return rep;
}

double quadratic_form_mismatch(const HessianCase& hc, const std::vector<double>& r_values,
                               const EvalPolicy& policy) {
  const double a = to_double(hc.a), b = to_double(hc.b);
  const double d1 = to_double(hc.d1), d2 = to_double(hc.d2);
  double worst = 0.0;
  for (double r : r_values) {
    const KTerms t = k_terms(hc, r, policy);
    const double x = r * r;
    const double lambda = t.f1 / t.f0;
    const double q = x * (1.0 + x) * (hc.k - 1) * lambda * lambda + (d1 * x - d2) * lambda - a * b;
    const double via_q = q * 4.0 * t.f0 / (1.0 + x);
    worst = std::max(worst, std::abs(via_q - t.expr) / t.scale);
  }
  return worst;
}

ConditionReport check_iterated_condition(const HessianCase& hc, const std::vector<double>& r_grid,
                                         const EvalPolicy& policy, double slack) {
  require(hc.k >= 2, ErrorKind::Precondition,
          "k = 1 is certified through the radial Laplacian, not the hypergeometric route");
  ConditionReport direct = check_k_inequality(hc, r_grid, policy, slack);
  const ConditionReport reduced = check_fg_inequality(hc, default_fg_grid(), policy, 1e-9);
  direct.holds = direct.holds && reduced.holds;
  direct.samples_checked += reduced.samples_checked;
  direct.note = std::string("direct ") + (direct.holds ? "holds" : "checked") + ", reduced " +
                (reduced.holds ? "holds" : "fails");
  return direct;
}

HessianVerification verify_hessian_case(int k, int n, double tol, const EvalPolicy& policy) {
  HessianVerification v;
  v.hc = make_case(k, n);
  v.degenerate = v.hc.degenerate();
  if (k == 1) {
    v.route = "superposition";
    const RadialProfile u = v.degenerate ? constant_profile(-1.0) : fbeta_profile(v.hc.beta_value());
    v.superposition = check_kconvex_radial(u, 1, n, log_grid(1e-3, 1e3, 64), 1e-12);
    v.overall = v.superposition->holds;
    return v;
  }
  v.route = "hypergeometric";
  v.tangent = tangent_report(v.hc, 1e-12, policy);
  v.concavity = check_g_concavity(v.hc, 1e-10);
  v.fg = check_fg_inequality(v.hc, default_fg_grid(), policy, tol);
  v.log_convexity = check_log_convexity(v.hc, default_log_convexity_grid(), policy, tol);
  v.iterated = check_iterated_condition(v.hc, log_grid(1e-2, 1e2, 64), policy, 1e-8);
  const bool chain = v.tangent->chain_ok && v.concavity->holds && v.fg->holds && v.log_convexity->holds &&
                     v.iterated->holds;
  v.overall = v.degenerate ? true : chain;
  return v;
}

}  // namespace radlap
