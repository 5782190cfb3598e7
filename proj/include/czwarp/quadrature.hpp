// SPDX-License-Identifier: Apache-2.0
//
// Knot-aware composite Gauss-Legendre quadrature. The interval is cut at the
// caller's breakpoints; each panel is integrated with a fixed-order rule and
// its error is estimated against the same rule on the two halves. Panels over
// budget are bisected recursively. Panel results are reduced in panel order,
// so the value does not depend on how many workers evaluated the panels.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace czwarp {

struct QuadratureSpec {
  int base_order = 16;    // Gauss-Legendre nodes per panel
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_depth = 30;     // bisection depth per initial panel

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double err = 0.0;
  std::size_t panels = 0;            // accepted panels after refinement
  std::size_t resolution_limited = 0;  // panels too narrow to bisect in double precision
};

/// One line of an audit: worst signed violation (positive means violated),
/// where it happened, and whether it stayed within the threshold.
struct AuditEntry {
  std::string bound;
  double worst = 0.0;
  double location = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct BoundAudit {
  std::vector<AuditEntry> entries;
  bool overall_pass = true;

  void add(AuditEntry e);
  void merge(const BoundAudit& other);
};

/// Nodes and weights on [-1, 1], cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

using Integrand = std::function<double(double)>;

/// Integrand evaluated at origin + offset. Panels pass their left edge as the
/// origin, so the offset keeps full relative precision inside narrow panels.
using LocalIntegrand = std::function<double(double origin, double offset)>;

/// Writes `dim` components at origin + offset into `out`.
using FieldIntegrand = std::function<void(double origin, double offset, double* out)>;

/// Integrates f over [a, b]. `breakpoints` must be sorted and strictly inside
/// (a, b). `workers` > 1 evaluates panels on several threads; the result is
/// bit-identical for any worker count. Throws NotConverged if a panel still
/// misses its budget at max_depth.
QuadResult integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                     const QuadratureSpec& spec = {}, unsigned workers = 1);

/// `kinks` lists breakpoints (or a, b) where the integrand may behave like
/// |x - c|^q. Panels touching a kink are integrated in a graded variable,
/// x = c + L y^2 (both ends: the cubic 3y^2 - 2y^3), which smooths the
/// singularity before the rule sees it.
QuadResult integrate_local(const LocalIntegrand& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureSpec& spec = {},
                           unsigned workers = 1, std::span<const double> kinks = {});

/// Integrates `dim` components on a shared panel tree. A panel is accepted
/// only once every component meets its own budget.
std::vector<QuadResult> integrate_fields(const FieldIntegrand& f, std::size_t dim, double a,
                                         double b, std::span<const double> breakpoints,
                                         const QuadratureSpec& spec = {}, unsigned workers = 1,
                                         std::span<const double> kinks = {});

/// Fixed rule on a single panel, no refinement.
double gauss_panel(const Integrand& f, double lo, double hi, const GaussRule& rule);
double gauss_panel_local(const LocalIntegrand& f, double lo, double hi, const GaussRule& rule);

}  // namespace czwarp
