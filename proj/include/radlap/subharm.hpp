#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "radlap/kernel.hpp"
#include "radlap/profile.hpp"

namespace radlap {

/// n points with log-uniform spacing on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

struct ConditionGrid {
  std::vector<double> r_values;
  std::vector<double> tau_values;

  void validate() const;

  /// 64 radii log-spaced on [1e-3, 1e3] and 64 values of tau with log tau
  /// evenly spaced on [1e-4, 10].
  static ConditionGrid standard();
  static ConditionGrid make(double r_min, double r_max, int r_points, double log_tau_min, double log_tau_max,
                            int tau_points);
};

struct ConditionReport {
  bool holds = true;
  double worst_margin = 0.0;
  double worst_r = 0.0;
  std::optional<double> worst_tau;
  std::size_t samples_checked = 0;
  std::string note;
};

/// Two-scale condition: bracket(u, r, tau) <= 0 on the grid. worst_margin is
/// the largest bracket value; a sample passes when the bracket is at most
/// slack times the local magnitude max(|u(r)|, |u(r tau)|, |u(r/tau)|).
ConditionReport check_cond1(const RadialProfile& u, const FracParams& p, const ConditionGrid& grid,
                            double slack = 1e-12);

/// u'' + (n - 2s + 1) u'/r >= 0 on r_values. worst_margin is the smallest
/// value of the expression; the slack is relative to |u''| + |(n-2s+1) u'/r|.
ConditionReport check_cond2(const RadialProfile& u, const FracParams& p, const std::vector<double>& r_values,
                            double slack = 1e-12);

/// Runs both conditions (cond2 on the grid radii) and reports whether the
/// outcomes agree. worst_margin is 0 on agreement, otherwise the magnitude
/// of the failing condition's margin.
ConditionReport check_condition_equivalence(const RadialProfile& u, const FracParams& p,
                                            const ConditionGrid& grid, double slack = 1e-12);

/// u'' + ((n-k)/k) u'/r >= 0, 1 <= k <= n.
ConditionReport check_kconvex_radial(const RadialProfile& u, int k, int n, const std::vector<double>& r_values,
                                     double slack = 1e-12);

/// Multiplicative mollification u_eps(r) = int phi(y) u(r e^(-eps y)) dy with
/// phi(y) proportional to exp(-1/(1-(y/R)^2)) on [-R, R], R = bump_radius.
/// A fixed tanh-sinh rule normalised to unit mass is used, so constants are
/// reproduced exactly and derivatives are mollified consistently.
RadialProfile mellin_mollify(const RadialProfile& u, double epsilon, double bump_radius = 1.0);

/// Grid form of the maximum principle: with the two-scale condition holding,
/// no grid radius may exceed u at all its grid neighbours r tau, r/tau by more
/// than slack, unless u is constant on the grid. worst_margin is
/// max_r min_tau [u(r) - max(u(r tau), u(r/tau))]. Throws Precondition when
/// check_cond1 fails.
ConditionReport check_max_principle(const RadialProfile& u, const FracParams& p, const ConditionGrid& grid,
                                    double slack = 1e-12);

}  // namespace radlap
