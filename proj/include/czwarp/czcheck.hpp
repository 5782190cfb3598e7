// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: build a manifold with an oscillating window, run
// the audits, evaluate both sides of the Calderon-Zygmund inequality, search
// for the smallest violating tooth count and sweep parameter grids.
#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "czwarp/czops.hpp"

namespace czwarp {

struct WindowRequest {
  double k = 0.0;
  int n_teeth = 1;
};

struct ExperimentConfig {
  int m = 2;
  double p = 2.0;
  double k = 3.0;
  int n_teeth = 1;
  double C1 = 1.0;
  double C2 = 1.0;
  QuadratureSpec quad;
  std::optional<double> smoothing;  // corner half-width override
  double r_max_cap = 1e6;           // largest r the Green's function table may reach
  unsigned workers = 1;             // quadrature threads per experiment
  std::vector<WindowRequest> extra_windows;
  int strip_samples = 20000;
  int envelope_samples = 2000;

  void validate() const;
};

/// Everything the pipeline builds before any norm is evaluated.
struct Experiment {
  ExperimentConfig config;
  double h = 0.0;
  SawtoothWindow window;
  std::shared_ptr<const WarpingProfile> profile;
  std::shared_ptr<const GreenFunction> green;
  std::shared_ptr<const TestFunction> test;
};

/// Base profile, G on it, h = h(k), window insertion, G on the final profile
/// and the a-posteriori bracket check. Throws WindowTooNarrow if [h, h+1]
/// leaves [G^{-1}(k + delta), G^{-1}(k + 1 - delta)] on the final profile.
Experiment build_experiment(const ExperimentConfig& cfg);

/// Strip membership over [1, G^{-1}(k+1)] and the comparison envelopes over
/// s in [0, k+1].
BoundAudit structural_audit(const Experiment& ex);

/// The inequality chain: s-integral upper bounds for u and the Laplacian and
/// the lower bound on int_h^{h+1} |sigma'|^p.
BoundAudit audit_bound_chain(const Experiment& ex);

/// The two smallness conditions on the tooth step, reported rather than
/// enforced: step^9 <= eta/2 and p log(step) <= log(eta/2) - e^k.
struct SmallnessFlags {
  bool step9_le_half_eta = false;
  bool double_exponential = false;
};
SmallnessFlags smallness_flags(const Experiment& ex);

struct CZReport {
  ExperimentConfig config;
  double h = 0.0;
  double eps_or_delta = 0.0;  // tooth step
  double eta = 0.0;           // window width (1 for m = 2)
  NormReport norms;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool violated = false;  // lhs > rhs with every audit passing
  BoundAudit audit;
  SmallnessFlags flags;
};

CZReport run_experiment(const ExperimentConfig& cfg);

struct SearchResult {
  std::optional<int> n_star;
  bool monotone = true;       // ratio non-decreasing in n over the bisection bracket
  bool monotone_full = true;  // the same over the whole trace
  bool audit_failed = false;
  std::vector<CZReport> trace;  // in evaluation order
};

/// Doubling scan over n = 1, 2, 4, ... (capped at n_max) for the first
/// violation, then bisection down to the smallest violating n. The ratio is
/// only required to be monotone from the last non-violating doubling point
/// on; below it the ratio is flat to a few parts in 1e5 and may wobble. If
/// the bracket is not monotone, n_star is the first hit of the doubling scan.
SearchResult search_min_n(const ExperimentConfig& cfg, int n_max);

struct SweepGrid {
  std::vector<int> m;
  std::vector<double> p;
  std::vector<double> k;
  std::vector<int> n;

  std::size_t size() const { return m.size() * p.size() * k.size() * n.size(); }
};

struct SweepRow {
  int m = 2;
  double p = 2.0;
  double k = 3.0;
  int n = 1;
  std::optional<CZReport> report;
  std::string error;  // set when the cell failed
};

/// Runs one experiment per cell in m, p, k, n order. Cells are spread over
/// `workers` threads; a failing cell records its error and the sweep goes on.
std::vector<SweepRow> sweep(const SweepGrid& grid, const ExperimentConfig& base,
                            unsigned workers = 1);

/// Fixed column order, one row per cell, doubles printed with %.17g.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

}  // namespace czwarp
