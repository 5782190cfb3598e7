// SPDX-License-Identifier: Apache-2.0
//
// czwarp: build warped profiles, audit them, and evaluate or search for
// Calderon-Zygmund violations.
//
// Exit codes: 0 success, 1 usage or construction error, 2 no violation found,
// 3 audit failure, 4 quadrature did not converge.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "czwarp/config_io.hpp"
#include "czwarp/errors.hpp"

namespace {

using namespace czwarp;

constexpr int kExitNotFound = 2;
constexpr int kExitAudit = 3;
constexpr int kExitNotConverged = 4;

struct Overrides {
  std::string config_path;
  std::optional<int> m, n_teeth, n_max, base_order, samples;
  std::optional<double> p, k, C1, C2, rel_tol, smoothing;
  std::optional<unsigned> workers;
  std::string csv, profile, sigma_csv;
  std::vector<int> grid_m, grid_n;
  std::vector<double> grid_p, grid_k;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON run file")->check(CLI::ExistingFile);
  cmd->add_option("--m", o.m, "manifold dimension (>= 2)");
  cmd->add_option("--p", o.p, "exponent, 1 < p < inf");
  cmd->add_option("--k", o.k, "window index (>= 1)");
  cmd->add_option("--n", o.n_teeth, "tooth count");
  cmd->add_option("--C1", o.C1, "Laplacian constant");
  cmd->add_option("--C2", o.C2, "zeroth-order constant");
  cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
  cmd->add_option("--base-order", o.base_order, "Gauss-Legendre nodes per panel");
  cmd->add_option("--smoothing", o.smoothing, "corner blend half-width");
  cmd->add_option("--workers", o.workers, "threads");
}

RunConfig resolve(const Overrides& o) {
  RunConfig rc;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    rc = parse_run_config(ss.str());
  }
  ExperimentConfig& c = rc.experiment;
  if (o.m) c.m = *o.m;
  if (o.p) c.p = *o.p;
  if (o.k) c.k = *o.k;
  if (o.n_teeth) c.n_teeth = *o.n_teeth;
  if (o.C1) c.C1 = *o.C1;
  if (o.C2) c.C2 = *o.C2;
  if (o.rel_tol) c.quad.rel_tol = *o.rel_tol;
  if (o.base_order) c.quad.base_order = *o.base_order;
  if (o.smoothing) c.smoothing = *o.smoothing;
  if (o.workers) {
    c.workers = *o.workers;
    rc.sweep_workers = *o.workers;
  }
  if (o.n_max) rc.n_max = *o.n_max;
  if (o.samples) rc.samples = *o.samples;
  if (!o.grid_m.empty()) rc.grid.m = o.grid_m;
  if (!o.grid_p.empty()) rc.grid.p = o.grid_p;
  if (!o.grid_k.empty()) rc.grid.k = o.grid_k;
  if (!o.grid_n.empty()) rc.grid.n = o.grid_n;
  if (!o.csv.empty()) rc.csv_path = o.csv;
  if (!o.profile.empty()) rc.profile_path = o.profile;
  if (!o.sigma_csv.empty()) rc.samples_path = o.sigma_csv;
  return rc;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + path);
  out << text;
}

int cmd_build(const RunConfig& rc) {
  const Experiment ex = build_experiment(rc.experiment);
  write_text(rc.profile_path, profile_to_json(*ex.profile) + "\n");
  if (!rc.samples_path.empty()) {
    if (rc.samples < 2) throw Error(ErrorKind::invalid_argument, "samples must be >= 2");
    std::ostringstream csv;
    csv << "t,sigma,dsigma,d2sigma\n";
    const double hi = ex.test->support_r().hi;
    char buf[128];
    for (int i = 0; i < rc.samples; ++i) {
      const double t = i + 1 == rc.samples ? hi : hi * i / (rc.samples - 1);
      const Jet s = ex.profile->eval(t);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t, s.v, s.d1, s.d2);
      csv << buf;
    }
    write_text(rc.samples_path, csv.str());
  }
  return 0;
}

int cmd_audit(const RunConfig& rc) {
  const Experiment ex = build_experiment(rc.experiment);
  BoundAudit audit = structural_audit(ex);
  audit.merge(audit_bound_chain(ex));
  std::cout << to_json(audit) << "\n";
  return audit.overall_pass ? 0 : kExitAudit;
}

int cmd_norms(const RunConfig& rc) {
  const CZReport rep = run_experiment(rc.experiment);
  std::cout << to_json(rep) << "\n";
  return rep.audit.overall_pass ? 0 : kExitAudit;
}

int cmd_violate(const RunConfig& rc) {
  const SearchResult res = search_min_n(rc.experiment, rc.n_max);
  std::cout << to_json(res) << "\n";
  if (res.n_star) return 0;
  return res.audit_failed ? kExitAudit : kExitNotFound;
}

int cmd_sweep(const RunConfig& rc) {
  const auto rows = sweep(resolved_grid(rc), rc.experiment, rc.sweep_workers);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_text(rc.csv_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical counterexamples to the L^p Calderon-Zygmund inequality on warped products"};
  app.require_subcommand(1);
  Overrides o;

  auto* build = app.add_subcommand("build", "write the profile JSON and optionally sampled sigma");
  add_common(build, o);
  build->add_option("--profile,--emit-profile", o.profile, "profile JSON path (default stdout)");
  build->add_option("--sigma-csv", o.sigma_csv, "sampled sigma CSV path");
  build->add_option("--samples", o.samples, "number of sigma samples");

  auto* audit = app.add_subcommand("audit", "run the bound audits only");
  add_common(audit, o);

  auto* norms = app.add_subcommand("norms", "evaluate one report");
  add_common(norms, o);

  auto* violate = app.add_subcommand("violate", "search for the smallest violating tooth count");
  add_common(violate, o);
  violate->add_option("--n-max", o.n_max, "largest tooth count tried");

  auto* sw = app.add_subcommand("sweep", "run a parameter grid and write CSV");
  add_common(sw, o);
  sw->add_option("--csv", o.csv, "CSV path (default stdout)");
  sw->add_option("--grid-m", o.grid_m, "m values");
  sw->add_option("--grid-p", o.grid_p, "p values");
  sw->add_option("--grid-k", o.grid_k, "k values");
  sw->add_option("--grid-n", o.grid_n, "tooth counts");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig rc = resolve(o);
    if (*build) return cmd_build(rc);
    if (*audit) return cmd_audit(rc);
    if (*norms) return cmd_norms(rc);
    if (*violate) return cmd_violate(rc);
    return cmd_sweep(rc);
  } catch (const Error& e) {
    std::cerr << "czwarp: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::not_converged: return kExitNotConverged;
      case ErrorKind::audit_failed: return kExitAudit;
      case ErrorKind::not_found: return kExitNotFound;
      default: return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "czwarp: " << e.what() << "\n";
    return 1;
  }
}
