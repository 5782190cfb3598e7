// SPDX-License-Identifier: Apache-2.0
#include "czwarp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "czwarp/errors.hpp"
#include "czwarp/kernels.hpp"
#include "czwarp/parallel.hpp"

namespace czwarp {

void QuadratureSpec::validate() const {
  if (base_order < 2) throw Error(ErrorKind::invalid_argument, "base_order must be >= 2");
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "rel_tol must be > 0");
  if (!(abs_tol >= 0.0)) throw Error(ErrorKind::invalid_argument, "abs_tol must be >= 0");
  if (max_depth < 1) throw Error(ErrorKind::invalid_argument, "max_depth must be >= 1");
}

void BoundAudit::add(AuditEntry e) {
  overall_pass = overall_pass && e.pass;
  entries.push_back(std::move(e));
}

void BoundAudit::merge(const BoundAudit& other) {
  for (const auto& e : other.entries) add(e);
}

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node for the weight
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // symmetrize so the rule is exact on odd polynomials to the last bit
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (std::abs(rule.nodes[i]) + std::abs(rule.nodes[n - 1 - i]));
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.nodes[i] = x;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

constexpr std::size_t kMaxDim = 8;
using Vec = std::array<double, kMaxDim>;

struct PanelSum {
  Vec value{};
  Vec abs_value{};
};

PanelSum panel_sums(const FieldIntegrand& f, std::size_t dim, double lo, double hi,
                    const GaussRule& rule) {
  const std::size_t n = rule.nodes.size();
  const double half = 0.5 * (hi - lo);
  double stack_vals[512], stack_abs[512];
  std::vector<double> heap_vals, heap_abs;
  double* vals = stack_vals;
  double* abs_vals = stack_abs;
  if (n * dim > 512) {
    heap_vals.resize(n * dim);
    heap_abs.resize(n * dim);
    vals = heap_vals.data();
    abs_vals = heap_abs.data();
  }
  Vec point{};
  for (std::size_t i = 0; i < n; ++i) {
    f(lo, half + half * rule.nodes[i], point.data());
    for (std::size_t c = 0; c < dim; ++c) {
      vals[c * n + i] = point[c];
      abs_vals[c * n + i] = std::abs(point[c]);
    }
  }
  const std::span<const double> w(rule.weights);
  PanelSum out;
  for (std::size_t c = 0; c < dim; ++c) {
    out.value[c] = half * kernels::dot(w, {vals + c * n, n});
    out.abs_value[c] = half * kernels::dot(w, {abs_vals + c * n, n});
  }
  return out;
}

// Below this many ulps across, node positions are too coarse to resolve the
// integrand any further by bisection.
constexpr double kResolvableUlps = 1024.0;

struct Estimate {
  double lo = 0.0, hi = 0.0;
  Vec coarse{};  // rule on the whole panel
  PanelSum left, right;
  double value(std::size_t c) const { return left.value[c] + right.value[c]; }
  double diff(std::size_t c) const { return std::abs(coarse[c] - value(c)); }
  double floor(std::size_t c) const {
    return 50.0 * std::numeric_limits<double>::epsilon() * (left.abs_value[c] + right.abs_value[c]);
  }
  double err(std::size_t c) const { return std::max(diff(c), floor(c)); }
};

Estimate estimate(const FieldIntegrand& f, std::size_t dim, double lo, double hi, const Vec& coarse,
                  const GaussRule& rule) {
  const double mid = lo + 0.5 * (hi - lo);
  return {lo, hi, coarse, panel_sums(f, dim, lo, mid, rule), panel_sums(f, dim, mid, hi, rule)};
}

struct PanelOutcome {
  Vec value{};
  Vec err{};
  std::size_t panels = 0;
  std::size_t limited = 0;
};

void accept(const Estimate& e, std::size_t dim, PanelOutcome& out) {
  for (std::size_t c = 0; c < dim; ++c) {
    out.value[c] += e.value(c);
    out.err[c] += e.err(c);
  }
  ++out.panels;
}

bool unresolvable(double lo, double hi) {
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double ulp = scale * std::numeric_limits<double>::epsilon();
  return std::abs(hi - lo) < kResolvableUlps * std::max(ulp, std::numeric_limits<double>::min());
}

void refine(const FieldIntegrand& f, std::size_t dim, const Estimate& e, const Vec& budget,
            int depth, const QuadratureSpec& spec, const GaussRule& rule, PanelOutcome& out) {
  bool done = true;
  std::size_t worst = 0;
  for (std::size_t c = 0; c < dim; ++c) {
    if (e.err(c) <= budget[c] || e.diff(c) <= e.floor(c)) continue;
    if (done || e.err(c) / budget[c] > e.err(worst) / budget[worst]) worst = c;
    done = false;
  }
  if (done) return accept(e, dim, out);
  if (unresolvable(e.lo, e.hi)) {
    ++out.limited;
    return accept(e, dim, out);
  }
  if (depth >= spec.max_depth) throw NotConverged(e.lo, e.hi, e.err(worst), budget[worst]);
  const double mid = e.lo + 0.5 * (e.hi - e.lo);
  Vec half_budget{};
  for (std::size_t c = 0; c < dim; ++c) half_budget[c] = 0.5 * budget[c];
  const Estimate left = estimate(f, dim, e.lo, mid, e.left.value, rule);
  const Estimate right = estimate(f, dim, mid, e.hi, e.right.value, rule);
  refine(f, dim, left, half_budget, depth + 1, spec, rule, out);
  refine(f, dim, right, half_budget, depth + 1, spec, rule, out);
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(compute_rule(order));
  return *slot;
}

double gauss_panel(const Integrand& f, double lo, double hi, const GaussRule& rule) {
  return gauss_panel_local([&f](double o, double x) { return f(o + x); }, lo, hi, rule);
}

double gauss_panel_local(const LocalIntegrand& f, double lo, double hi, const GaussRule& rule) {
  const std::size_t n = rule.nodes.size();
  const double half = 0.5 * (hi - lo);
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = f(lo, half + half * rule.nodes[i]);
  return half * kernels::dot(rule.weights, vals);
}

namespace {

enum class Grading { none, lo, hi, both };

// Integrand on [0, 1] in the graded variable y for the panel [lo, hi].
FieldIntegrand graded(const FieldIntegrand& f, std::size_t dim, Grading kind, double lo, double hi) {
  const double len = hi - lo;
  return [&f, dim, kind, lo, hi, len](double oy, double xy, double* out) {
    const double y = oy + xy;
    double origin, offset, jac;
    switch (kind) {
      case Grading::lo:
        origin = lo, offset = len * y * y, jac = 2.0 * len * y;
        break;
      case Grading::hi: {
        const double z = 1.0 - y;
        origin = hi, offset = -len * z * z, jac = 2.0 * len * z;
        break;
      }
      default:
        if (y <= 0.5) {
          origin = lo, offset = len * y * y * (3.0 - 2.0 * y);
        } else {
          const double z = 1.0 - y;
          origin = hi, offset = -len * z * z * (3.0 - 2.0 * z);
        }
        jac = 6.0 * len * y * (1.0 - y);
        break;
    }
    f(origin, offset, out);
    for (std::size_t c = 0; c < dim; ++c) out[c] *= jac;
  };
}

}  // namespace

std::vector<QuadResult> integrate_fields(const FieldIntegrand& f, std::size_t dim, double a,
                                         double b, std::span<const double> breakpoints,
                                         const QuadratureSpec& spec, unsigned workers,
                                         std::span<const double> kinks) {
  spec.validate();
  if (dim == 0 || dim > kMaxDim)
    throw Error(ErrorKind::invalid_argument, "integrate_fields supports 1 to 8 components");
  if (!(a < b)) throw Error(ErrorKind::invalid_argument, "integrate requires a < b");
  std::vector<double> edges;
  edges.reserve(breakpoints.size() + 2);
  edges.push_back(a);
  for (double x : breakpoints) {
    if (!(x > edges.back()) || !(x < b))
      throw Error(ErrorKind::invalid_argument,
                  "breakpoints must be strictly increasing and inside (a, b)");
    edges.push_back(x);
  }
  edges.push_back(b);
  if (!std::is_sorted(kinks.begin(), kinks.end()))
    throw Error(ErrorKind::invalid_argument, "kinks must be sorted");
  auto is_kink = [&](double x) { return std::binary_search(kinks.begin(), kinks.end(), x); };

  const GaussRule& rule = gauss_legendre(spec.base_order);
  const std::size_t npanels = edges.size() - 1;

  // Each initial panel is integrated either directly on [lo, hi] or on [0, 1]
  // in its graded variable.
  std::vector<Grading> grading(npanels, Grading::none);
  std::vector<FieldIntegrand> mapped(npanels);
  if (!kinks.empty()) {
    for (std::size_t i = 0; i < npanels; ++i) {
      const bool l = is_kink(edges[i]), r = is_kink(edges[i + 1]);
      grading[i] = l && r ? Grading::both : l ? Grading::lo : r ? Grading::hi : Grading::none;
      if (grading[i] != Grading::none)
        mapped[i] = graded(f, dim, grading[i], edges[i], edges[i + 1]);
    }
  }
  auto panel_f = [&](std::size_t i) -> const FieldIntegrand& {
    return grading[i] == Grading::none ? f : mapped[i];
  };
  auto panel_lo = [&](std::size_t i) { return grading[i] == Grading::none ? edges[i] : 0.0; };
  auto panel_hi = [&](std::size_t i) { return grading[i] == Grading::none ? edges[i + 1] : 1.0; };

  std::vector<Estimate> first(npanels);
  parallel_for(npanels, workers, [&](std::size_t i) {
    const FieldIntegrand& g = panel_f(i);
    const double lo = panel_lo(i), hi = panel_hi(i);
    first[i] = estimate(g, dim, lo, hi, panel_sums(g, dim, lo, hi, rule).value, rule);
  });

  std::vector<double> scratch(npanels);
  Vec tol{};
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t i = 0; i < npanels; ++i) scratch[i] = first[i].value(c);
    tol[c] = std::max(spec.rel_tol * std::abs(kernels::sum(scratch)), spec.abs_tol);
  }
  const double length = b - a;

  std::vector<PanelOutcome> outcome(npanels);
  parallel_for(npanels, workers, [&](std::size_t i) {
    Vec budget{};
    const double share = (edges[i + 1] - edges[i]) / length;
    for (std::size_t c = 0; c < dim; ++c) budget[c] = tol[c] * share;
    refine(panel_f(i), dim, first[i], budget, 0, spec, rule, outcome[i]);
  });

  std::vector<QuadResult> results(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t i = 0; i < npanels; ++i) scratch[i] = outcome[i].value[c];
    results[c].value = kernels::sum(scratch);
    for (std::size_t i = 0; i < npanels; ++i) scratch[i] = outcome[i].err[c];
    results[c].err = kernels::sum(scratch);
    for (const auto& o : outcome) {
      results[c].panels += o.panels;
      results[c].resolution_limited += o.limited;
    }
  }
  return results;
}

QuadResult integrate_local(const LocalIntegrand& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureSpec& spec,
                           unsigned workers, std::span<const double> kinks) {
  const FieldIntegrand g = [&f](double o, double x, double* out) { out[0] = f(o, x); };
  return integrate_fields(g, 1, a, b, breakpoints, spec, workers, kinks).front();
}

QuadResult integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                     const QuadratureSpec& spec, unsigned workers) {
  return integrate_local([&f](double o, double x) { return f(o + x); }, a, b, breakpoints, spec,
                         workers);
}

}  // namespace czwarp
