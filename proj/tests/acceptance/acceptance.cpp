// Acceptance run: one PASS/FAIL line per criterion.
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "radlap/error.hpp"
#include "radlap/fraclap.hpp"
#include "radlap/hessianx.hpp"
#include "radlap/hypergeom.hpp"
#include "radlap/kernel.hpp"
#include "radlap/subharm.hpp"

using namespace radlap;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Pairwise agreement of three 2F1 routes on random parameters.
Outcome criterion1() {
  const auto t0 = Clock::now();
  auto g = oracle::rng(1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double b = oracle::uniform(g, 0.05, 2.0);
    const double c = b + oracle::uniform(g, 0.05, 2.0);
    const double a = oracle::uniform(g, -2.0, 2.0);
    const double x = oracle::uniform(g, -0.99, 0.45);
    const double v1 = f21({a, b, c}, x);
    const double v2 = f21_euler_integral({a, b, c}, x);
    const double v3 = oracle::series_f21(a, b, c, x);
    worst = std::max({worst, oracle::rel_err(v1, v2), oracle::rel_err(v1, v3), oracle::rel_err(v2, v3)});
  }
  const double dt = seconds_since(t0);
  return {worst <= 1e-9 && dt < 10.0, "max rel diff " + fmt("%.2e", worst) + ", " + fmt("%.2f", dt) + " s"};
}

Outcome criterion2() {
  auto g = oracle::rng(2);
  int monotone = 0, tried = 0;
  while (tried < 50) {
    const double a = oracle::uniform(g, -2.0, 2.0), b = oracle::uniform(g, -2.0, 2.0);
    const double c = a + b + oracle::uniform(g, 0.2, 3.0);
    if (std::abs(a) < 0.1 || std::abs(b) < 0.1 || c < 0.1) continue;
    ++tried;
    const double at1 = f21_at_one({a, b, c});
    double prev = INFINITY;
    bool ok = true;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const double e = std::abs(f21({a, b, c}, 1.0 - eps) - at1);
      ok = ok && e < prev;
      prev = e;
    }
    monotone += ok;
  }
  const double special = std::abs(f21_at_one({-0.5, 0.5, 2.0}) - 8.0 / (3.0 * oracle::pi));
  return {monotone == 50 && special <= 1e-12,
          std::to_string(monotone) + "/50 monotone, |F(1) - 8/(3 pi)| = " + fmt("%.1e", special)};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int n = 2; n <= 10; ++n)
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9})
      for (double tau : {1.01, 1.1, 2.0, 10.0, 50.0}) {
        const FracParams p{s, n};
        worst = std::max(worst, oracle::rel_err(kernel_H(p, tau), kernel_H_hypergeometric(p, tau)));
      }
  const double h1 = kernel_H({0.5, 3}, 1.0);
  const double d1 = std::max(std::abs(h1 - 4 * oracle::pi), std::abs(h1 - oracle::kernel_H_at_one(3, 0.5)));
  const double dt = seconds_since(t0);
  return {worst <= 1e-7 && d1 <= 1e-8 && dt < 60.0,
          "max rel diff " + fmt("%.2e", worst) + ", |H(1) - 4 pi| = " + fmt("%.1e", d1) + ", " + fmt("%.2f", dt) + " s"};
}

Outcome criterion4() {
  const auto grid = ConditionGrid::standard();
  std::size_t nonzero = 0;
  double worst = 0.0;
  for (auto [n, s] : {std::pair{3, 0.5}, {5, 0.75}, {4, 0.9}}) {
    const FracParams p{s, n};
    const auto u = power_profile(p.gamma());
    for (double r : grid.r_values)
      for (double tau : grid.tau_values) nonzero += bracket(u, p, r, tau) != 0.0;
    for (double r : {1e-3, 0.1, 1.0, 7.0, 1e3}) {
      const auto q = fraclap_evaluate(u, p, r);
      worst = std::max({worst, std::abs(q.value), q.error_estimate});
    }
  }
  return {nonzero == 0 && worst <= 1e-10,
          std::to_string(nonzero) + " nonzero brackets, max |integral|, error " + fmt("%.1e", worst)};
}

Outcome criterion5() {
  const auto grid = ConditionGrid::standard();
  bool ok = true;
  std::string detail;
  for (auto [n, s] : {std::pair{4, 0.6}, {6, 0.8}, {10, 0.5}}) {
    const FracParams p{s, n};
    const double g = p.gamma();
    for (double beta : {g, 0.5 * g}) {
      const auto u = fbeta_profile(beta);
      ok = ok && check_cond1(u, p, grid).holds && check_cond2(u, p, grid.r_values).holds;
    }
    const auto u = fbeta_profile(g + 0.3);
    const auto c1 = check_cond1(u, p, grid);
    const auto c2 = check_cond2(u, p, grid.r_values);
    ok = ok && !c1.holds && !c2.holds && c1.worst_tau.has_value();
    detail += "n=" + std::to_string(n) + " violation at r=" + fmt("%.3g", c1.worst_r) +
              " tau=" + fmt("%.3g", c1.worst_tau.value_or(0.0)) + "; ";
  }
  return {ok, detail};
}

Outcome criterion6() {
  const auto grid = ConditionGrid::standard();
  auto g = oracle::rng(6);
  int agree = 0, holds = 0, total = 0;
  std::string first_bad;
  for (double s : {0.4, 0.8, 1.5}) {
    const FracParams p{s, 6};
    for (int i = 0; i < 50; ++i) {
      std::vector<std::pair<double, RadialProfile>> terms;
      const int m = 1 + i % 3;
      for (int j = 0; j < m; ++j)
        terms.emplace_back(oracle::uniform(g, 0.1, 3.0), fbeta_profile(oracle::uniform(g, 0.05, 2.0 * p.gamma())));
      const auto rep = check_condition_equivalence(combine(terms), p, grid);
      ++total;
      if (rep.holds)
        ++agree;
      else if (first_bad.empty())
        first_bad = " first disagreement: " + rep.note;
      holds += check_cond1(combine(terms), p, grid).holds;
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " agree (" + std::to_string(holds) +
                              " satisfy both)" + first_bad};
}

Outcome criterion7() {
  double worst = 0.0;
  for (auto [n, s] : {std::pair{4, 0.6}, {5, 0.75}}) {
    const FracParams p{s, n};
    for (double beta : {0.5 * p.gamma(), p.gamma(), p.gamma() + 0.5}) {
      const auto u = fbeta_profile(beta);
      for (double r : {0.5, 1.0, 2.0}) {
        const double h = 1e-3 * r;
        auto F = [&](double x) { return fraclap_radial(u, p, x); };
        const double fd = (8 * (F(r + h) - F(r - h)) - (F(r + 2 * h) - F(r - 2 * h))) / (12 * h);
        worst = std::max(worst, oracle::rel_err(fraclap_derivative(u, p, r), fd));
      }
    }
  }
  return {worst <= 1e-4, "max rel diff " + fmt("%.2e", worst)};
}

Outcome criterion8() {
  const auto grid = ConditionGrid::standard();
  auto g = oracle::rng(8);
  const FracParams p{0.6, 4};
  int kept = 0, total = 0;
  for (int i = 0; i < 20; ++i) {
    std::vector<std::pair<double, RadialProfile>> terms;
    for (int j = 0; j <= i % 3; ++j)
      terms.emplace_back(oracle::uniform(g, 0.1, 3.0), fbeta_profile(oracle::uniform(g, 0.05, p.gamma())));
    if (i == 0) terms = {{1.0, fbeta_profile(p.gamma())}};
    const auto u = combine(terms);
    if (!check_cond1(u, p, grid).holds) return {false, "corpus profile " + std::to_string(i) + " violates cond1"};
    for (double eps : {0.1, 0.01}) {
      ++total;
      kept += check_cond1(mellin_mollify(u, eps), p, grid).holds;
    }
  }
  double worst = 0.0;
  for (double c : {-1.0, 2.5})
    for (double eps : {0.1, 0.01}) {
      const auto m = mellin_mollify(constant_profile(c), eps);
      for (double r : grid.r_values) worst = std::max(worst, std::abs(m(r) - c));
    }
  return {kept == total && worst <= 1e-10,
          std::to_string(kept) + "/" + std::to_string(total) + " mollified profiles keep cond1, constant drift " +
              fmt("%.1e", worst)};
}

// The literal identity d3 - 4 d2 (d1 + d2) = (c+1)(c-b-1) is checked as
// stated; the exact value carries a factor 4, which is checked as well.
Outcome criterion9() {
  int sqrt_ok = 0, f1_ok = 0, g1_ok = 0, literal_ok = 0, four_ok = 0, total = 0;
  for (int k = 2; k <= 8; ++k)
    for (int n = 2 * k; n <= 30; ++n) {
      const auto hc = make_case(k, n);
      ++total;
      const Rational root = exact_sqrt(hc.d1 * hc.d1 + hc.d3);
      sqrt_ok += root == 2 * hc.c - hc.b;
      // Gauss sums at 1: Gamma(C) Gamma(C-A-B) / (Gamma(C-A) Gamma(C-B)); with
      // the denominator parameters (A, B+1, C+1) the ratio telescopes to (C-A)/C.
      const Rational A = hc.c - hc.a, C = hc.c;
      const bool shifts = hc.a > hc.b;  // both sums converge at 1
      const Rational f1 = (C - A) / C;
      f1_ok += shifts && f1 == hc.a / hc.c && std::abs(ratio_f(hc, 1.0) - to_double(f1)) < 1e-13;
      g1_ok += (hc.d1 + root) / (2 * hc.c) == hc.a / hc.c;
      const Rational lhs = hc.d3 - 4 * hc.d2 * (hc.d1 + hc.d2);
      literal_ok += lhs == (hc.c + 1) * (hc.c - hc.b - 1);
      four_ok += lhs == 4 * (hc.c + 1) * (hc.c - hc.b - 1);
    }
  const auto hc = make_case(2, 5);
  const bool tangent = f_prime_at_1_exact(hc) == Rational(152, 225) && g_prime_at_1_exact(hc) == Rational(38, 35) &&
                       f_prime_at_1_exact(hc) < g_prime_at_1_exact(hc);
  std::ostringstream d;
  d << "sqrt " << sqrt_ok << "/" << total << ", f(1)=a/c " << f1_ok << "/" << total << ", g(1)=a/c " << g1_ok << "/"
    << total << ", d3-4d2(d1+d2)=(c+1)(c-b-1) " << literal_ok << "/" << total << " (with factor 4: " << four_ok << "/"
    << total << "), k=2 n=5 f'(1)=" << to_string(f_prime_at_1_exact(hc)) << " g'(1)=" << to_string(g_prime_at_1_exact(hc));
  const bool pass = sqrt_ok == total && f1_ok == total && g1_ok == total && literal_ok == total && tangent;
  return {pass, d.str()};
}

bool criterion9_corrected_holds() {
  for (int k = 2; k <= 8; ++k)
    for (int n = 2 * k; n <= 30; ++n) {
      const auto hc = make_case(k, n);
      if (hc.d3 - 4 * hc.d2 * (hc.d1 + hc.d2) != 4 * (hc.c + 1) * (hc.c - hc.b - 1)) return false;
    }
  return true;
}

Outcome criterion10() {
  const auto t0 = Clock::now();
  const auto fg = default_fg_grid();
  const auto lg = default_log_convexity_grid();
  const auto rg = log_grid(1e-2, 1e2, 64);
  int ok = 0, total = 0;
  std::string first_bad;
  for (int k = 2; k <= 5; ++k)
    for (int n = 2 * k; n <= 20; ++n) {
      const auto hc = make_case(k, n);
      if (hc.degenerate()) continue;
      ++total;
      const bool conc = check_g_concavity(hc, 1e-10).holds;
      const bool logc = check_log_convexity(hc, lg, {}, 1e-9).holds;
      const bool cmp = check_fg_inequality(hc, fg, {}, 1e-9).holds;
      const bool route = check_k_inequality(hc, rg, {}, 1e-8).holds;
      if (conc && logc && cmp && route)
        ++ok;
      else if (first_bad.empty())
        first_bad = ", first failure k=" + std::to_string(k) + " n=" + std::to_string(n);
    }
  const double dt = seconds_since(t0);
  return {ok == total && dt < 300.0,
          std::to_string(ok) + "/" + std::to_string(total) + " cases, " + fmt("%.2f", dt) + " s" + first_bad};
}

Outcome criterion11() {
  bool ok = true;
  for (int n : {3, 4, 5}) {
    const auto hc = make_case(1, n);
    bool refused = false;
    try {
      f_prime_at_1(hc);
    } catch (const Error& e) {
      refused = e.kind() == ErrorKind::InfiniteDerivative;
    }
    const bool super = check_kconvex_radial(fbeta_profile(n - 2.0), 1, n, log_grid(1e-3, 1e3, 64)).holds;
    const auto v = verify_hessian_case(1, n);
    ok = ok && refused && super && v.route == "superposition" && v.overall;
  }
  return {ok, "n=3,4,5 refused by the tangent route and certified by superposition"};
}

Outcome criterion12() {
  auto g = oracle::rng(12);
  std::vector<HyperParams> cases = {{1.0, 1.0, 2.0}, {0.5, 1.5, 2.5}, {-0.5, 0.5, 2.0}, {2.3, 0.7, 1.9}, {3.0, 0.25, 4.5}};
  for (auto [k, n] : {std::pair{2, 5}, {3, 11}, {4, 9}, {2, 20}, {5, 13}}) cases.push_back(make_case(k, n).profile_params());
  double worst = 0.0;
  for (const auto& p : cases)
    for (int i = 0; i < 20; ++i) {
      const double x = std::exp(oracle::uniform(g, std::log(1e-2), std::log(50.0)));
      const double F = f21(p, -x);
      const double F1 = f21_derivative(p, -x);
      const double F2 = p.a * p.b / p.c * f21_derivative({p.a + 1, p.b + 1, p.c + 1}, -x);
      const double t1 = x * (1 + x) * F2, t2 = (p.c + (p.a + p.b + 1) * x) * F1, t3 = p.a * p.b * F;
      worst = std::max(worst, std::abs(t1 - t2 + t3) / (std::abs(t1) + std::abs(t2) + std::abs(t3)));
    }
  return {worst <= 1e-8, "max relative residual " + fmt("%.2e", worst)};
}

Outcome criterion13() {
  auto once = [] {
    std::ostringstream out, err;
    const int code = cli::run_cli({"verify-hessian", "--k", "2", "--n", "5"}, out, err);
    std::string s = out.str();
    return std::pair{code, s.substr(s.find('\n') + 1)};
  };
  const auto [c1, a] = once();
  const auto [c2, b] = once();
  const bool parses = nlohmann::json::accept(a);
  return {c1 == 0 && c2 == 0 && parses && a == b, std::to_string(a.size()) + " payload bytes, identical: " +
                                                      (a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  // Criterion 9 states its third identity without the factor 4 that the
  // exact constants carry; it is reported as FAIL and tolerated only while
  // the corrected identity holds on every case.
  const std::set<int> known = criterion9_corrected_holds() ? std::set<int>{9} : std::set<int>{};
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3,  criterion4,  criterion5,  criterion6, criterion7,
      criterion8, criterion9, criterion10, criterion11, criterion12, criterion13};
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d: %s  %s%s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                !o.pass && known.count(id) ? "  [known discrepancy]" : "");
    std::fflush(stdout);
    if (!o.pass && !known.count(id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
