// SPDX-License-Identifier: Apache-2.0
#include "czwarp/czcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "czwarp/errors.hpp"
#include "czwarp/parallel.hpp"

namespace czwarp {

void ExperimentConfig::validate() const {
  if (m < 2) throw Error(ErrorKind::invalid_argument, "m must be >= 2");
  check_exponent(p);
  if (!(k >= 1.0)) throw Error(ErrorKind::invalid_argument, "k must be >= 1");
  if (n_teeth < 1) throw Error(ErrorKind::invalid_argument, "n_teeth must be >= 1");
  if (!(C1 >= 0.0) || !(C2 >= 0.0) || !std::isfinite(C1) || !std::isfinite(C2))
    throw Error(ErrorKind::invalid_argument, "C1 and C2 must be finite and >= 0");
  if (!(r_max_cap > 1.0)) throw Error(ErrorKind::invalid_argument, "r_max_cap must be > 1");
  if (strip_samples < 2 || envelope_samples < 2)
    throw Error(ErrorKind::invalid_argument, "audit sample counts must be >= 2");
  for (const auto& w : extra_windows) {
    if (!(w.k >= 1.0)) throw Error(ErrorKind::invalid_argument, "extra window k must be >= 1");
    if (w.n_teeth < 1) throw Error(ErrorKind::invalid_argument, "extra window n_teeth must be >= 1");
  }
  quad.validate();
}

Experiment build_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto manifold = ManifoldConfig::make(cfg.m);

  double k_top = cfg.k;
  for (const auto& w : cfg.extra_windows) k_top = std::max(k_top, w.k);
  // G^{-1}(s) <= 2e^s - 1 keeps every window and support below this.
  const double r_max = std::min(2.0 * std::exp(k_top + 2.0), cfg.r_max_cap);

  auto base = std::make_shared<const WarpingProfile>(build_base_profile(manifold));
  const GreenFunction g_base(base, r_max);

  std::vector<WindowRequest> requests{{cfg.k, cfg.n_teeth}};
  requests.insert(requests.end(), cfg.extra_windows.begin(), cfg.extra_windows.end());

  Experiment ex;
  ex.config = cfg;
  WarpingProfile profile = *base;
  std::vector<double> anchors;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const double h = find_h(g_base, requests[i].k);
    const SawtoothWindow win = plan_window(manifold, h, requests[i].n_teeth, cfg.smoothing);
    profile = insert_sawtooth(profile, win);
    anchors.push_back(h);
    if (i == 0) {
      ex.h = h;
      ex.window = win;
    }
  }
  ex.profile = std::make_shared<const WarpingProfile>(std::move(profile));
  ex.green = std::make_shared<const GreenFunction>(ex.profile, r_max);

  for (std::size_t i = 0; i < requests.size(); ++i) {
    const double k = requests[i].k, h = anchors[i];
    const double slack = 1e-12 * std::max(1.0, k);
    if (ex.green->value(h) < k + kUniversalDelta - slack ||
        ex.green->value(h + 1.0) > k + 1.0 - kUniversalDelta + slack)
      throw Error(ErrorKind::window_too_narrow,
                  "[h, h+1] left [G^-1(k+delta), G^-1(k+1-delta)] after inserting the window");
  }
  ex.test = std::make_shared<const TestFunction>(make_test_function(ex.green, cfg.k));
  return ex;
}

BoundAudit structural_audit(const Experiment& ex) {
  BoundAudit audit =
      audit_strip(*ex.profile, 1.0, ex.test->support_r().hi, ex.config.strip_samples);
  audit.merge(audit_green_bounds(*ex.green, ex.config.k + 1.0, ex.config.envelope_samples));
  return audit;
}

BoundAudit audit_bound_chain(const Experiment& ex) {
  const ExperimentConfig& c = ex.config;
  const double p = c.p, k = c.k;
  const unsigned workers = c.workers;
  // Integral bounds have no single location.
  const double nowhere = std::numeric_limits<double>::quiet_NaN();
  BoundAudit audit;
  auto upper = [&](const char* name, double value, double bound) {
    audit.add({name, (value - bound) / bound, nowhere, 0.0, value <= bound});
  };

  const NormValue su = s_integral_u(*ex.test, p, c.quad, workers);
  const double u_bound = c.m == 2 ? 2.0 * std::exp(2.0 * k + 2.0) : 4.0 * std::exp(2.0 * (k + 1.0));
  upper("u bound: int |phi|^p sigma^(2(m-1)) ds <= envelope", su.value, u_bound);

  const NormValue sl = s_integral_laplacian(*ex.test, p, c.quad, workers);
  const double lap_bound =
      std::pow(ex.test->cutoff().sup_d2(), p) * std::exp(-2.0 * (p - 1.0) * k);
  upper("laplacian bound: int |phi''|^p sigma^(2(p-1)(1-m)) ds <= |phi''|^p e^(-2(p-1)k)",
        sl.value, lap_bound);

  const SawtoothWindow& w = ex.window;
  const NormValue slope = slope_integral(*ex.profile, ex.h, ex.h + 1.0, p, c.quad, workers);
  const double n = w.n_teeth;
  double lower;
  if (c.m == 2)
    lower = std::pow(2.0 * n - 1.0, p) * n * (w.step - 2.0 * w.smooth_halfwidth);
  else
    lower = (w.width - 4.0 * n * w.smooth_halfwidth) * std::pow(w.amplitude / w.step, p);
  const double excess = (lower - slope.value) / lower;
  audit.add({"slope bound: int_h^(h+1) |sigma'|^p dr >= oscillation floor", excess, nowhere, 0.0,
             slope.value >= lower});
  return audit;
}

SmallnessFlags smallness_flags(const Experiment& ex) {
  const double step = ex.window.step;
  const double eta = ex.config.m == 2 ? 1.0 : ex.window.width;
  SmallnessFlags f;
  f.step9_le_half_eta = std::pow(step, 9.0) <= 0.5 * eta;
  f.double_exponential = ex.config.p * std::log(step) <= std::log(0.5 * eta) - std::exp(ex.config.k);
  return f;
}

CZReport run_experiment(const ExperimentConfig& cfg) {
  const Experiment ex = build_experiment(cfg);
  CZReport rep;
  rep.config = cfg;
  rep.h = ex.h;
  rep.eps_or_delta = ex.window.step;
  rep.eta = cfg.m == 2 ? 1.0 : ex.window.width;
  rep.audit = structural_audit(ex);
  rep.norms = norms_report(*ex.test, cfg.p, cfg.quad, cfg.workers);
  rep.lhs = rep.norms.norm_hess_p_pow;
  rep.rhs = cfg.C1 * rep.norms.norm_lap_p_pow + cfg.C2 * rep.norms.norm_u_p_pow;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : std::numeric_limits<double>::infinity();
  rep.violated = rep.lhs > rep.rhs && rep.audit.overall_pass;
  rep.flags = smallness_flags(ex);
  return rep;
}

SearchResult search_min_n(const ExperimentConfig& cfg, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::invalid_argument, "n_max must be >= 1");
  SearchResult res;
  auto eval = [&](int n) {
    ExperimentConfig c = cfg;
    c.n_teeth = n;
    res.trace.push_back(run_experiment(c));
    if (!res.trace.back().audit.overall_pass) res.audit_failed = true;
    return res.trace.back().violated;
  };
  // Ratio non-decreasing in n over trace entries with n >= from.
  auto monotone_from = [&](int from) {
    std::vector<std::pair<int, double>> pts;
    for (const auto& r : res.trace)
      if (r.config.n_teeth >= from) pts.emplace_back(r.config.n_teeth, r.ratio);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i].second < pts[i - 1].second) return false;
    return true;
  };

  int lo = 0, hi = 0;  // lo: largest known non-violating n, hi: first violating n
  for (int n = 1;; n = (n > n_max / 2) ? n_max : 2 * n) {
    if (eval(n)) {
      hi = n;
      break;
    }
    lo = n;
    if (n == n_max) break;
  }
  res.monotone_full = monotone_from(1);
  if (hi == 0) return res;
  const int first_hit = hi;
  const int bracket_lo = std::max(lo, 1);
  if (monotone_from(bracket_lo)) {
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (eval(mid) ? hi : lo) = mid;
    }
  }
  res.monotone = monotone_from(bracket_lo);
  res.monotone_full = monotone_from(1);
  res.n_star = res.monotone ? hi : first_hit;
  return res;
}

std::vector<SweepRow> sweep(const SweepGrid& grid, const ExperimentConfig& base, unsigned workers) {
  if (grid.size() == 0) throw Error(ErrorKind::invalid_argument, "sweep grid is empty");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (int m : grid.m)
    for (double p : grid.p)
      for (double k : grid.k)
        for (int n : grid.n) rows.push_back({m, p, k, n, std::nullopt, {}});

  parallel_for(rows.size(), workers, [&](std::size_t i) {
    SweepRow& row = rows[i];
    ExperimentConfig c = base;
    c.m = row.m;
    c.p = row.p;
    c.k = row.k;
    c.n_teeth = row.n;
    c.workers = 1;
    try {
      row.report = run_experiment(c);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string sweep_csv_header() {
  return "m,p,k,n,eps_or_delta,h,eta,norm_u_p_pow,norm_lap_p_pow,norm_hess_p_pow,lhs,rhs,ratio,"
         "violated,audit_pass,quad_err,error";
}

std::string sweep_csv_row(const SweepRow& row) {
  std::string s = std::to_string(row.m) + "," + fmt(row.p) + "," + fmt(row.k) + "," +
                  std::to_string(row.n) + ",";
  if (row.report) {
    const CZReport& r = *row.report;
    for (double v : {r.eps_or_delta, r.h, r.eta, r.norms.norm_u_p_pow, r.norms.norm_lap_p_pow,
                     r.norms.norm_hess_p_pow, r.lhs, r.rhs, r.ratio})
      s += fmt(v) + ",";
    s += std::string(r.violated ? "true" : "false") + "," + (r.audit.overall_pass ? "true" : "false") +
         "," + fmt(r.norms.quadrature_error) + ",";
  } else {
    s += ",,,,,,,,,false,false,,";
  }
  return s + csv_field(row.error);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << sweep_csv_header() << '\n';
  for (const auto& r : rows) out << sweep_csv_row(r) << '\n';
}

}  // namespace czwarp
