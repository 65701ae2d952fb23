#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "radlap/error.hpp"
#include "radlap/fraclap.hpp"
#include "radlap/hessianx.hpp"
#include "radlap/hypergeom.hpp"
#include "radlap/kernel.hpp"
#include "radlap/subharm.hpp"

namespace radlap::cli {

using json = nlohmann::ordered_json;

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RADLAP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

// Runs body(i) for i in [0, count); the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(count, 1));
  std::vector<std::exception_ptr> errors(count);
  std::mutex mu;
  std::size_t next = 0;
  auto work = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= count) return;
        i = next++;
      }
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string header_line(const std::vector<std::string>& args) {
  std::string h = std::string("# radlap ") + kVersion;
  for (const auto& a : args) h += " " + a;
  return h + "\n";
}

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + fmt(row[i]);
      s += "\n";
    }
    return s;
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& row : rows) {
      json o;
      for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = row[i];
      arr.push_back(o);
    }
    return arr;
  }
};

void write_atomic(const std::string& path, const std::string& payload) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) raise(ErrorKind::Domain, "cannot open " + tmp + " for writing");
    f << payload;
    f.flush();
    if (!f) raise(ErrorKind::Domain, "write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    raise(ErrorKind::Domain, "cannot rename output into " + path);
  }
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  require(pos == s.size() && !s.empty(), ErrorKind::Domain, "bad number '" + s + "' for " + what);
  return v;
}

RadialProfile parse_profile(const std::string& spec, const FracParams& p) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "fbeta") {
    require(!arg.empty(), ErrorKind::Domain, "fbeta profile needs a value, e.g. fbeta:1.5");
    return fbeta_profile(parse_number(arg, "fbeta"));
  }
  if (kind == "power") return power_profile(arg.empty() ? p.gamma() : parse_number(arg, "power"));
  if (kind == "const") return constant_profile(arg.empty() ? -1.0 : parse_number(arg, "const"));
  if (kind == "file") {
    require(!arg.empty(), ErrorKind::Domain, "file profile needs a path, e.g. file:data.csv");
    return spline_profile_from_file(arg);
  }
  raise(ErrorKind::Domain, "unknown profile '" + spec + "' (fbeta:<beta>, power[:<p>], const[:<c>], file:<path>)");
}

json report_json(const ConditionReport& r) {
  json o;
  o["holds"] = r.holds;
  o["worst_margin"] = r.worst_margin;
  json loc;
  loc["r"] = r.worst_r;
  if (r.worst_tau) loc["tau"] = *r.worst_tau;
  o["worst_location"] = loc;
  o["samples_checked"] = r.samples_checked;
  if (!r.note.empty()) o["note"] = r.note;
  return o;
}

json case_json(const HessianVerification& v) {
  const HessianCase& hc = v.hc;
  json o;
  o["k"] = hc.k;
  o["n"] = hc.n;
  o["route"] = v.route;
  o["degenerate"] = v.degenerate;
  json c;
  c["alpha"] = to_string(hc.alpha);
  c["beta"] = to_string(hc.beta);
  c["s"] = to_string(hc.s);
  c["a"] = to_string(hc.a);
  c["b"] = to_string(hc.b);
  c["c"] = to_string(hc.c);
  c["d1"] = to_string(hc.d1);
  c["d2"] = to_string(hc.d2);
  c["d3"] = to_string(hc.d3);
  o["constants"] = c;
  json t;
  if (v.tangent) {
    t["f_at_1"] = v.tangent->f_at_1;
    t["g_at_1"] = v.tangent->g_at_1;
    t["f_prime_at_1"] = to_string(v.tangent->f_prime_exact);
    t["g_prime_at_1"] = to_string(v.tangent->g_prime_exact);
    t["f_prime_value"] = v.tangent->f_prime_1;
    t["g_prime_value"] = v.tangent->g_prime_1;
    t["chain_ok"] = v.tangent->chain_ok;
  } else {
    t["f_prime_at_1"] = "infinite";
  }
  o["tangent"] = t;
  auto put = [&](const char* key, const std::optional<ConditionReport>& r) {
    if (r) o[key] = report_json(*r);
  };
  put("concavity", v.concavity);
  put("fg", v.fg);
  put("log_convexity", v.log_convexity);
  put("iterated", v.iterated);
  put("superposition", v.superposition);
  o["overall"] = v.overall;
  return o;
}

std::vector<double> linear_range(double lo, double hi, int points) {
  require(points >= 1 && hi >= lo, ErrorKind::Domain, "range needs points >= 1 and max >= min");
  std::vector<double> v;
  for (int i = 0; i < points; ++i) v.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
  if (points > 1) v.back() = hi;
  return v;
}

struct Output {
  std::string out_path;
  std::string format = "csv";
};

void add_output_flags(CLI::App* sub, Output& o, bool table) {
  sub->add_option("--out", o.out_path, "Write to this file instead of standard output");
  if (table)
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  else
    o.format = "json";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial fractional Laplacian and Hessian-case verification tools", "radlap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Output o_f21, o_frac, o_sub, o_hess, o_ker;

  auto* f21cmd = app.add_subcommand("eval-f21", "Evaluate 2F1(a, b; c; x)");
  double fa = 0, fb = 0, fc = 1, x_min = 0, x_max = 0;
  int x_points = 0;
  std::vector<double> xs;
  f21cmd->add_option("--a", fa)->required();
  f21cmd->add_option("--b", fb)->required();
  f21cmd->add_option("--c", fc)->required();
  f21cmd->add_option("--x", xs, "Comma separated points")->delimiter(',');
  f21cmd->add_option("--x-min", x_min);
  f21cmd->add_option("--x-max", x_max);
  f21cmd->add_option("--x-points", x_points);
  add_output_flags(f21cmd, o_f21, true);

  auto* fraccmd = app.add_subcommand("fraclap", "Tabulate (-Delta)^s u on a radial grid");
  int n = 3;
  double s = 0.5, r_min = 0.1, r_max = 10.0, tol = 1e-11;
  int r_points = 16;
  std::string profile = "fbeta:1", normalization = "unnormalized";
  fraccmd->add_option("--n", n)->required();
  fraccmd->add_option("--s", s)->required();
  fraccmd->add_option("--profile", profile, "fbeta:<beta>, power[:<p>], const[:<c>], file:<path>");
  fraccmd->add_option("--r-min", r_min);
  fraccmd->add_option("--r-max", r_max);
  fraccmd->add_option("--r-points", r_points);
  fraccmd->add_option("--normalization", normalization)->check(CLI::IsMember({"unnormalized", "standard"}));
  fraccmd->add_option("--tol", tol, "Relative tolerance");
  add_output_flags(fraccmd, o_frac, true);

  auto* subcmd = app.add_subcommand("check-subharmonic", "Check the two-scale and differential conditions");
  double log_tau_min = 1e-4, log_tau_max = 10.0, slack = 1e-12;
  int tau_points = 64;
  double g_rmin = 1e-3, g_rmax = 1e3;
  int g_rpoints = 64;
  subcmd->add_option("--n", n)->required();
  subcmd->add_option("--s", s)->required();
  subcmd->add_option("--profile", profile);
  subcmd->add_option("--r-min", g_rmin);
  subcmd->add_option("--r-max", g_rmax);
  subcmd->add_option("--r-points", g_rpoints);
  subcmd->add_option("--log-tau-min", log_tau_min);
  subcmd->add_option("--log-tau-max", log_tau_max);
  subcmd->add_option("--tau-points", tau_points);
  subcmd->add_option("--slack", slack);
  add_output_flags(subcmd, o_sub, false);

  auto* hesscmd = app.add_subcommand("verify-hessian", "Verify the inequality chain for Hessian cases");
  int k = 2, k_max = 0, n_max = 0, hn = 0;
  double htol = 1e-9;
  hesscmd->add_option("--k", k)->required();
  hesscmd->add_option("--n", hn, "Dimension; the sweep start when --n-max is given");
  hesscmd->add_option("--k-max", k_max);
  hesscmd->add_option("--n-max", n_max);
  hesscmd->add_option("--tol", htol);
  add_output_flags(hesscmd, o_hess, false);

  auto* kercmd = app.add_subcommand("kernel-table", "Compare quadrature and closed-form H(tau)");
  double tau_min = 1.0, tau_max = 50.0, ktol = 1e-7;
  int points = 33;
  kercmd->add_option("--n", n)->required();
  kercmd->add_option("--s", s)->required();
  kercmd->add_option("--tau-min", tau_min);
  kercmd->add_option("--tau-max", tau_max);
  kercmd->add_option("--points", points);
  kercmd->add_option("--tolerance", ktol);
  add_output_flags(kercmd, o_ker, true);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : invalid;
  }

  const std::string header = header_line(args);
  auto emit = [&](const Output& o, const std::string& payload) {
    const std::string full = header + payload;
    if (o.out_path.empty())
      out << full;
    else
      write_atomic(o.out_path, full);
  };

  try {
    if (*f21cmd) {
      HyperParams p{fa, fb, fc};
      p.validate();
      std::vector<double> grid = xs;
      if (f21cmd->count("--x-points")) {
        const auto r = linear_range(x_min, x_max, x_points);
        grid.insert(grid.end(), r.begin(), r.end());
      }
      require(!grid.empty(), ErrorKind::Domain, "give --x or --x-min/--x-max/--x-points");
      Csv t{{"x", "F"}, std::vector<std::vector<double>>(grid.size())};
      parallel_for(grid.size(), [&](std::size_t i) { t.rows[i] = {grid[i], f21(p, grid[i])}; });
      emit(o_f21, o_f21.format == "csv" ? t.str() : json{{"rows", t.to_json()}}.dump(2) + "\n");
      return ok;
    }

    if (*fraccmd) {
      const FracParams p{s, n};
      p.validate_operator();
      require(r_min > 0.0, ErrorKind::Domain, "--r-min must be positive");
      require(tol > 0.0, ErrorKind::Domain, "--tol must be positive");
      const RadialProfile u = parse_profile(profile, p);
      check_integrability(u, p);
      const auto radii = log_grid(r_min, r_max, r_points);
      QuadSpec spec;
      spec.rel_tol = tol;
      const auto mode =
          normalization == "standard" ? NormalizationMode::standard_constant : NormalizationMode::unnormalized;
      std::vector<QuadResult> res(radii.size());
      parallel_for(radii.size(), [&](std::size_t i) { res[i] = fraclap_evaluate(u, p, radii[i], mode, spec); });
      Csv t{{"r", "value", "error_estimate"}, {}};
      bool all = true;
      json rows = json::array();
      for (std::size_t i = 0; i < radii.size(); ++i) {
        t.rows.push_back({radii[i], res[i].value, res[i].error_estimate});
        all = all && res[i].converged;
        rows.push_back({{"r", radii[i]},
                        {"value", res[i].value},
                        {"error_estimate", res[i].error_estimate},
                        {"converged", res[i].converged}});
      }
      emit(o_frac, o_frac.format == "csv" ? t.str() : json{{"rows", rows}}.dump(2) + "\n");
      if (!all) err << "some radii did not reach the requested tolerance\n";
      return all ? ok : not_converged;
    }

    if (*subcmd) {
      const FracParams p{s, n};
      p.validate();
      const RadialProfile u = parse_profile(profile, p);
      const ConditionGrid grid = ConditionGrid::make(g_rmin, g_rmax, g_rpoints, log_tau_min, log_tau_max, tau_points);
      grid.validate();
      require(slack >= 0.0, ErrorKind::Domain, "--slack must be non-negative");
      json o;
      o["n"] = n;
      o["s"] = s;
      o["profile"] = profile;
      const ConditionReport c1 = check_cond1(u, p, grid, slack);
      o["cond1"] = report_json(c1);
      bool holds = c1.holds;
      if (u.has_deriv2()) {
        const ConditionReport c2 = check_cond2(u, p, grid.r_values, slack);
        o["cond2"] = report_json(c2);
        o["agree"] = c1.holds == c2.holds;
        holds = holds && c2.holds;
      }
      o["holds"] = holds;
      emit(o_sub, o.dump(2) + "\n");
      return holds ? ok : check_failed;
    }

    if (*hesscmd) {
      const bool sweep = k_max > 0 || n_max > 0;
      std::vector<std::pair<int, int>> cases;
      if (!sweep) {
        require(hesscmd->count("--n") > 0, ErrorKind::Domain, "--n is required for a single case");
        cases.emplace_back(k, hn);
      } else {
        const int kk = std::max(k, k_max);
        require(n_max > 0, ErrorKind::Domain, "a sweep needs --n-max");
        for (int ki = k; ki <= kk; ++ki)
          for (int ni = std::max(hn, 2 * ki); ni <= n_max; ++ni) cases.emplace_back(ki, ni);
        require(!cases.empty(), ErrorKind::Domain, "the sweep contains no case with n >= 2k");
      }
      for (const auto& [ki, ni] : cases) make_case(ki, ni);
      std::vector<HessianVerification> res(cases.size());
      parallel_for(cases.size(), [&](std::size_t i) {
        res[i] = verify_hessian_case(cases[i].first, cases[i].second, htol);
      });
      bool all = true;
      for (const auto& v : res) all = all && v.overall;
      json o;
      if (!sweep) {
        o = case_json(res.front());
      } else {
        json arr = json::array();
        for (const auto& v : res) arr.push_back(case_json(v));
        o["cases"] = arr;
        o["overall"] = all;
      }
      emit(o_hess, o.dump(2) + "\n");
      return all ? ok : check_failed;
    }

    if (*kercmd) {
      const FracParams p{s, n};
      p.validate_operator();
      require(tau_min >= 1.0 && tau_max >= tau_min && points >= 1, ErrorKind::Domain,
              "tau range needs 1 <= tau-min <= tau-max and points >= 1");
      const auto taus = log_grid(tau_min, tau_max, points);
      Csv t{{"tau", "H_quadrature", "H_hypergeometric", "rel_diff"}, std::vector<std::vector<double>>(taus.size())};
      parallel_for(taus.size(), [&](std::size_t i) {
        const double hq = kernel_H(p, taus[i]);
        const double hh = kernel_H_hypergeometric(p, taus[i]);
        t.rows[i] = {taus[i], hq, hh, std::abs(hq - hh) / std::abs(hh)};
      });
      bool all = true;
      for (const auto& row : t.rows) all = all && row[3] <= ktol;
      emit(o_ker, o_ker.format == "csv" ? t.str() : json{{"rows", t.to_json()}}.dump(2) + "\n");
      return all ? ok : check_failed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::NonConvergence ? not_converged : invalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return invalid;
  }
  return invalid;
}

}  // namespace radlap::cli
