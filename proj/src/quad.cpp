#include "radlap/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "radlap/error.hpp"

namespace radlap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = 3.141592653589793238462643383279502884;

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double checked(double v, double x) {
  if (!std::isfinite(v))
    raise(ErrorKind::NonFiniteEvaluation, "integrand returned " + std::to_string(v) + " at x=" + std::to_string(x));
  return v;
}

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b, int depth, std::size_t& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = checked(f(c), c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double x1 = c - dx, x2 = c + dx;
    f1[j] = checked(f(x1), x1);
    f2[j] = checked(f(x2), x2);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  evals += 15;
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  const double ah = std::abs(h);
  double err = std::abs((resk - resg) * h);
  resasc *= ah;
  resabs *= ah;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(err, 50.0 * kEps * resabs);
  return {a, b, resk * h, err, depth};
}

void check_interval(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorKind::Domain,
          "integration interval must satisfy a < b");
}

struct SideModel {
  double hint = 0.0;
  double min_distance = 0.0;
  double log_c = -std::numeric_limits<double>::infinity();
  double sign = 0.0;
  double closest = std::numeric_limits<double>::infinity();

  void observe(double dist, double fx) {
    if (dist >= closest) return;
    closest = dist;
    if (fx == 0.0) {
      sign = 0.0;
      log_c = -std::numeric_limits<double>::infinity();
    } else {
      sign = fx > 0 ? 1.0 : -1.0;
      log_c = std::log(std::abs(fx)) - hint * std::log(dist);
    }
  }
};

struct Node {
  double near;    // distance to the nearer endpoint
  double far;     // distance to the farther endpoint
  double weight;  // dx/dt
  double log_near;
  double log_weight;
};

Node node(double t, double half) {
  const double at = std::abs(t);
  const double u = 0.5 * kPi * std::sinh(at);
  const double e = std::exp(-2.0 * u);
  const double l1pe = std::log1p(e);
  Node n;
  n.near = 2.0 * half * e / (1.0 + e);
  n.far = 2.0 * half / (1.0 + e);
  n.weight = half * 0.5 * kPi * std::cosh(at) * 4.0 * e / ((1.0 + e) * (1.0 + e));
  n.log_near = std::log(2.0 * half) - 2.0 * u - l1pe;
  n.log_weight = std::log(half * 2.0 * kPi * std::cosh(at)) - 2.0 * u - 2.0 * l1pe;
  return n;
}

// Trapezoid contribution (per unit step) of nodes j*h, j >= j0, modelled as C*dist^hint.
double model_tail(const SideModel& m, double h, long j0, double half, double scale) {
  if (m.sign == 0.0) return 0.0;
  double sum = 0.0;
  for (long j = j0; j < j0 + 200000; ++j) {
    const double t = static_cast<double>(j) * h;
    const Node nd = node(t, half);
    const double lt = nd.log_weight + m.log_c + m.hint * nd.log_near;
    const double term = std::exp(lt);
    sum += term;
    if (term < 1e-22 * (scale + std::abs(sum)) || lt < -745.0) break;
  }
  return m.sign * sum;
}

QuadResult tanh_sinh_core(const SplitIntegrand& f, double a, double b, SideModel left, SideModel right,
                          const QuadSpec& spec) {
  const double half = 0.5 * (b - a);
  const int max_level = std::min(spec.max_levels, 10);
  QuadResult res;
  double evaluated = 0.0;  // sum of w*f over evaluated nodes
  long cut_left = 0, cut_right = 0;  // at current step: first modelled index per side

  auto eval_node = [&](double t) -> double {
    const Node nd = node(t, half);
    const bool right_side = t > 0;
    SideModel& m = right_side ? right : left;
    if (nd.near < m.min_distance || nd.weight == 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double x = right_side ? b - nd.near : (t < 0 ? a + nd.near : a + half);
    const double dl = right_side ? nd.far : nd.near;
    const double dr = right_side ? nd.near : nd.far;
    const double fx = checked(f(x, dl, t == 0.0 ? half : dr), x);
    ++res.evaluations;
    if (t != 0.0) m.observe(nd.near, fx);
    return nd.weight * fx;
  };

  double prev = 0.0;
  double h = 1.0;
  for (int level = 0; level <= max_level; ++level) {
    if (level == 0) {
      evaluated += eval_node(0.0);
      for (int side = -1; side <= 1; side += 2) {
        long j = 1;
        for (;; ++j) {
          const double v = eval_node(side * static_cast<double>(j));
          if (std::isnan(v)) break;
          evaluated += v;
        }
        (side < 0 ? cut_left : cut_right) = j;
      }
    } else {
      h *= 0.5;
      for (int side = -1; side <= 1; side += 2) {
        long& cut = side < 0 ? cut_left : cut_right;
        const long prev_cut = cut;  // in units of the previous step
        long j = 1;
        long first_model = 2 * prev_cut;
        for (;; j += 2) {
          if (j > 2 * prev_cut + 1) break;
          const double v = eval_node(side * static_cast<double>(j) * h);
          if (std::isnan(v)) {
            first_model = std::min(first_model, j);
            break;
          }
          evaluated += v;
        }
        cut = first_model;
      }
    }
    const double scale = std::abs(evaluated);
    // Nodes at or beyond the cut index were not evaluated: complete them with the model.
    double modelled = 0.0;
    for (int side = -1; side <= 1; side += 2) {
      const SideModel& m = side < 0 ? left : right;
      const long cut = side < 0 ? cut_left : cut_right;
      // Evaluated set may include indices beyond cut (even indices from coarser levels are all < cut).
      modelled += model_tail(m, h, cut, half, scale);
    }
    const double value = h * (evaluated + modelled);
    res.value = value;
    if (level >= 3) {
      res.error_estimate = std::abs(value - prev);
      if (res.error_estimate <= spec.target(value)) {
        res.converged = true;
        return res;
      }
    } else {
      res.error_estimate = std::abs(value - prev) + spec.target(value);
    }
    prev = value;
  }
  return res;
}

}  // namespace

void QuadSpec::validate() const {
  require(abs_tol >= 0.0 && rel_tol >= 0.0 && abs_tol + rel_tol > 0.0, ErrorKind::Domain,
          "QuadSpec requires abs_tol, rel_tol >= 0 with positive sum");
  require(max_levels >= 1, ErrorKind::Domain, "QuadSpec requires max_levels >= 1");
  require(truncation_tol > 0.0, ErrorKind::Domain, "QuadSpec requires truncation_tol > 0");
}

double QuadSpec::target(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadSpec& spec) {
  spec.validate();
  check_interval(a, b);
  QuadResult res;
  std::priority_queue<Panel> open;
  std::vector<Panel> frozen;
  const Panel first = gk15(f, a, b, 0, res.evaluations);
  open.push(first);
  double total = first.value, err = first.error;
  constexpr std::size_t kMaxPanels = 50000;
  while (!open.empty()) {
    if (err <= spec.target(total)) break;
    Panel p = open.top();
    open.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (p.depth >= spec.max_levels || open.size() + frozen.size() >= kMaxPanels || mid <= p.a || mid >= p.b) {
      frozen.push_back(p);
      continue;
    }
    const Panel l = gk15(f, p.a, mid, p.depth + 1, res.evaluations);
    const Panel r = gk15(f, mid, p.b, p.depth + 1, res.evaluations);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    open.push(l);
    open.push(r);
  }
  // Recompute the totals exactly to remove drift of the running updates.
  double sum = 0.0, comp = 0.0, e = 0.0;
  auto add = [&](const Panel& p) {
    const double y = p.value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    e += p.error;
  };
  for (const Panel& p : frozen) add(p);
  while (!open.empty()) {
    add(open.top());
    open.pop();
  }
  res.value = sum;
  res.error_estimate = e;
  res.converged = e <= spec.target(sum);
  return res;
}

QuadResult integrate_log_scale(const Integrand& f, double a, double b, const QuadSpec& spec) {
  require(a > 0.0, ErrorKind::Domain, "log-scale integration requires a > 0");
  check_interval(a, b);
  return integrate_finite(
      [&f](double sigma) {
        const double x = std::exp(sigma);
        return f(x) * x;
      },
      std::log(a), std::log(b), spec);
}

QuadResult integrate_tanh_sinh(const SplitIntegrand& f, double a, double b, double left_hint, double right_hint,
                               const QuadSpec& spec, double min_distance) {
  spec.validate();
  check_interval(a, b);
  require(left_hint > -1.0 && right_hint > -1.0, ErrorKind::DivergentExponent,
          "endpoint exponent hint must exceed -1");
  SideModel l, r;
  l.hint = left_hint;
  r.hint = right_hint;
  l.min_distance = r.min_distance = std::max(min_distance, std::numeric_limits<double>::min());
  return tanh_sinh_core(f, a, b, l, r, spec);
}

QuadResult integrate_endpoint_singular(const Integrand& f, double a, double b, Endpoint singular_end,
                                       double exponent_hint, const QuadSpec& spec) {
  spec.validate();
  check_interval(a, b);
  require(exponent_hint > -1.0, ErrorKind::DivergentExponent,
          "exponent_hint " + std::to_string(exponent_hint) + " is not > -1");
  SideModel l, r;
  l.hint = singular_end == Endpoint::left ? exponent_hint : 0.0;
  r.hint = singular_end == Endpoint::right ? exponent_hint : 0.0;
  auto floor_for = [](double end) { return end == 0.0 ? 1e-290 : 64.0 * kEps * std::abs(end); };
  l.min_distance = floor_for(a);
  r.min_distance = floor_for(b);
  return tanh_sinh_core([&f](double x, double, double) { return f(x); }, a, b, l, r, spec);
}

QuadResult integrate_endpoint_singular_offset(const Integrand& g, double length, double exponent_hint,
                                              const QuadSpec& spec) {
  spec.validate();
  require(std::isfinite(length) && length > 0.0, ErrorKind::Domain, "offset length must be positive");
  require(exponent_hint > -1.0, ErrorKind::DivergentExponent,
          "exponent_hint " + std::to_string(exponent_hint) + " is not > -1");
  SideModel l, r;
  l.hint = exponent_hint;
  l.min_distance = 1e-290;
  r.min_distance = 64.0 * kEps * length;
  return tanh_sinh_core([&g](double, double dl, double) { return g(dl); }, 0.0, length, l, r, spec);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, double decay_exponent, const QuadSpec& spec) {
  spec.validate();
  require(std::isfinite(a), ErrorKind::Domain, "lower limit must be finite");
  require(decay_exponent > 1.0, ErrorKind::DivergentTail,
          "decay exponent " + std::to_string(decay_exponent) + " is not > 1");
  const double p = decay_exponent;
  const double base = std::max(std::abs(a), 1.0);
  double c = 0.0;
  std::size_t evals = 0;
  for (double m : {1.0, 2.0, 4.0}) {
    const double x = a + base * m;
    c = std::max(c, std::abs(checked(f(x), x)) * std::pow(x, p));
    ++evals;
  }
  double t = a + 4.0 * base;
  if (c > 0.0) t = std::max(t, std::pow(c / ((p - 1.0) * spec.truncation_tol), 1.0 / (p - 1.0)));
  t = std::min(t, 1e250);

  QuadResult res;
  if (a > 0.0) {
    res = integrate_log_scale(f, a, t, spec);
  } else {
    const QuadResult head = integrate_finite(f, a, base, spec);
    const QuadResult body = integrate_log_scale(f, base, t, spec);
    res.value = head.value + body.value;
    res.error_estimate = head.error_estimate + body.error_estimate;
    res.evaluations = head.evaluations + body.evaluations;
    res.converged = head.converged && body.converged;
  }
  const double ft = checked(f(t), t);
  ++evals;
  res.value += ft * t / (p - 1.0);
  res.error_estimate += c * std::pow(t, 1.0 - p) / (p - 1.0);
  res.evaluations += evals;
  res.converged = res.converged && res.error_estimate <= std::max(spec.target(res.value), spec.truncation_tol);
  return res;
}

}  // namespace radlap
