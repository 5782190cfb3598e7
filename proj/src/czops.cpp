// SPDX-License-Identifier: Apache-2.0
#include "czwarp/czops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "czwarp/errors.hpp"
#include "czwarp/numeric.hpp"

namespace czwarp {

namespace {

std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b,
                                      double lo, double hi) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  std::erase_if(out, [&](double x) { return !(x > lo && x < hi); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double abs_pow(double x, double p) {
  const double a = std::abs(x);
  const double twice = 2.0 * p;
  if (twice == std::floor(twice) && twice <= 64.0) {
    const int whole = static_cast<int>(p);
    const double v = ipow(a, whole);
    return whole == p ? v : v * std::sqrt(a);
  }
  return std::pow(a, p);
}

}  // namespace

CutoffFunction::CutoffFunction(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta < 0.5))
    throw Error(ErrorKind::invalid_delta, "cutoff plateau delta must lie in (0, 1/2)");
  // phi = s w is not symmetric about 1/2, so both transitions are scanned.
  const int grid = 20000;
  const double half = 0.5 * delta_;
  for (double start : {half, 1.0 - delta_}) {
    const double dx = half / grid;
    int best = 0;
    double best_v = 0.0;
    for (int i = 0; i <= grid; ++i) {
      const double v = std::abs(at(start + i * dx).d2);
      if (v > best_v) best_v = v, best = i;
    }
    double a = start + std::max(best - 1, 0) * dx, b = start + std::min(best + 1, grid) * dx;
    for (int it = 0; it < 100; ++it) {
      const double c = a + (b - a) / 3.0, d = b - (b - a) / 3.0;
      if (std::abs(at(c).d2) < std::abs(at(d).d2))
        a = c;
      else
        b = d;
    }
    sup_d2_ = std::max({sup_d2_, best_v, std::abs(at(0.5 * (a + b)).d2)});
  }
}

Jet CutoffFunction::window(double s) const {
  const double half = 0.5 * delta_;
  if (s <= half || s >= 1.0 - half) return {0.0, 0.0, 0.0};
  if (s >= delta_ && s <= 1.0 - delta_) return {1.0, 0.0, 0.0};
  const double inv = 1.0 / half;
  if (s < delta_) {
    const Jet j = smooth_step((s - half) * inv);
    return {j.v, j.d1 * inv, j.d2 * inv * inv};
  }
  const Jet j = smooth_step((1.0 - half - s) * inv);
  return {j.v, -j.d1 * inv, j.d2 * inv * inv};
}

Jet CutoffFunction::at(double s) const {
  const Jet w = window(s);
  if (w.v == 1.0 && w.d1 == 0.0 && w.d2 == 0.0) return {s, 1.0, 0.0};
  return {s * w.v, w.v + s * w.d1, 2.0 * w.d1 + s * w.d2};
}

CutoffFunction build_cutoff(double delta) { return CutoffFunction(delta); }

TestFunction::TestFunction(std::shared_ptr<const GreenFunction> green, double k,
                           CutoffFunction cutoff)
    : green_(std::move(green)), k_(k), cutoff_(cutoff) {
  if (!(k >= 0.0)) throw Error(ErrorKind::invalid_argument, "test function index k must be >= 0");
  support_ = {green_->inverse(k), green_->inverse(k + 1.0)};
  const double d = cutoff_.delta();
  const std::vector<double> images{green_->inverse(k + 0.5 * d), green_->inverse(k + d),
                                   green_->inverse(k + 1.0 - d),
                                   green_->inverse(k + 1.0 - 0.5 * d)};
  const auto& profile = green_->profile();
  kinks_ = profile.stationary_points_in(support_.lo, support_.hi);
  breaks_ = merge_breakpoints(profile.breakpoints_in(support_.lo, support_.hi), images,
                              support_.lo, support_.hi);
}

TestFunction make_test_function(std::shared_ptr<const GreenFunction> green, double k) {
  return TestFunction(std::move(green), k, CutoffFunction(kUniversalDelta));
}

namespace {

struct Point {
  Jet sigma;
  Jet phi;  // at s = G(r) - k
  Jet u;
};

Point point_at(const TestFunction& tf, double origin, double offset) {
  const double r = origin + offset;
  const Interval sup = tf.support_r();
  const Jet sigma = tf.profile().eval(origin, offset);
  if (!(r > sup.lo && r < sup.hi)) return {sigma, {}, {}};
  const Jet phi = tf.cutoff().at(tf.green().value(r) - tf.k());
  if (phi.v == 0.0 && phi.d1 == 0.0 && phi.d2 == 0.0) return {sigma, phi, {}};
  const int m = tf.profile().config().m;
  const double g1 = ipow(sigma.v, 1 - m);
  const double g2 = (1.0 - m) * g1 / sigma.v * sigma.d1;
  return {sigma, phi, {phi.v, phi.d1 * g1, phi.d2 * g1 * g1 + phi.d1 * g2}};
}

double green_identity(const Point& pt, int m) {
  if (pt.phi.d2 == 0.0) return 0.0;
  return pt.phi.d2 * ipow(pt.sigma.v, 2 - 2 * m);
}

}  // namespace

Jet TestFunction::u(double r) const { return point_at(*this, r, 0.0).u; }

Jet u_eval(const TestFunction& tf, double r) { return tf.u(r); }

double HessianValue::norm() const {
  return std::sqrt(radial * radial + multiplicity * tangential * tangential);
}

HessianValue hessian_of_radial(const Jet& sigma, const Jet& u, int m) {
  return {u.d2, sigma.d1 * u.d1 / sigma.v, m - 1};
}

HessianValue hessian_at(const TestFunction& tf, double r) {
  const Point pt = point_at(tf, r, 0.0);
  return hessian_of_radial(pt.sigma, pt.u, tf.profile().config().m);
}

double laplacian_at(const TestFunction& tf, double r, LaplacianRoute route) {
  if (route == LaplacianRoute::direct) return hessian_at(tf, r).trace();
  return green_identity(point_at(tf, r, 0.0), tf.profile().config().m);
}

double laplacian_discrepancy(const TestFunction& tf, double r) {
  const HessianValue h = hessian_at(tf, r);
  const double scale = std::abs(h.radial) + h.multiplicity * std::abs(h.tangential);
  const double diff = std::abs(h.trace() - laplacian_at(tf, r, LaplacianRoute::green_identity));
  if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / scale;
}

void check_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error(ErrorKind::invalid_argument,
                "p must lie in (1, inf); the Calderon-Zygmund estimate is known to fail at "
                "p = 1 and p = inf, so those endpoints are not sampled");
}

NormValue radial_lp_norm_pow(const WarpingProfile& profile, const Integrand& f, double a,
                             double b, double p, const QuadratureSpec& quad,
                             std::span<const double> extra, unsigned workers) {
  check_exponent(p);
  std::vector<double> sorted(extra.begin(), extra.end());
  std::sort(sorted.begin(), sorted.end());
  const auto breaks = merge_breakpoints(profile.breakpoints_in(a, b), sorted, a, b);
  const auto kinks = profile.stationary_points_in(a, b);
  const int m = profile.config().m;
  const auto g = [&](double o, double x) {
    const double v = f(o + x);
    if (v == 0.0) return 0.0;
    return abs_pow(v, p) * ipow(profile.eval(o, x).v, m - 1);
  };
  const QuadResult q = integrate_local(g, a, b, breaks, quad, workers, kinks);
  const double gamma = profile.config().gamma_m;
  return {gamma * q.value, gamma * q.err, q.panels};
}

NormValue lp_norm_pow(const TestFunction& tf, Field field, double p, const QuadratureSpec& quad,
                      unsigned workers) {
  check_exponent(p);
  const int m = tf.profile().config().m;
  const auto g = [&](double o, double x) {
    const Point pt = point_at(tf, o, x);
    double v = 0.0;
    switch (field) {
      case Field::u: v = pt.u.v; break;
      case Field::laplacian: v = green_identity(pt, m); break;
      case Field::hessian: v = hessian_of_radial(pt.sigma, pt.u, m).norm(); break;
    }
    if (v == 0.0) return 0.0;
    return abs_pow(v, p) * ipow(pt.sigma.v, m - 1);
  };
  const Interval sup = tf.support_r();
  const QuadResult q =
      integrate_local(g, sup.lo, sup.hi, tf.breakpoints(), quad, workers, tf.kinks());
  const double gamma = tf.profile().config().gamma_m;
  return {gamma * q.value, gamma * q.err, q.panels};
}

namespace {

std::vector<double> s_breakpoints(const TestFunction& tf) {
  std::vector<double> out;
  const double lo = tf.k(), hi = tf.k() + 1.0;
  out.reserve(tf.breakpoints().size());
  for (double r : tf.breakpoints()) out.push_back(tf.green().value(r));
  std::sort(out.begin(), out.end());
  std::erase_if(out, [&](double s) { return !(s > lo && s < hi); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class F>
NormValue s_integral(const TestFunction& tf, double p, const QuadratureSpec& quad,
                     unsigned workers, F&& weight) {
  check_exponent(p);
  const auto breaks = s_breakpoints(tf);
  const auto g = [&](double s) {
    const Jet phi = tf.cutoff().at(s - tf.k());
    const double sigma = tf.profile().eval(tf.green().inverse(s)).v;
    return weight(phi, sigma);
  };
  const QuadResult q = integrate(g, tf.k(), tf.k() + 1.0, breaks, quad, workers);
  return {q.value, q.err, q.panels};
}

}  // namespace

NormValue s_integral_u(const TestFunction& tf, double p, const QuadratureSpec& quad,
                       unsigned workers) {
  const int m = tf.profile().config().m;
  return s_integral(tf, p, quad, workers, [&](const Jet& phi, double sigma) {
    return phi.v == 0.0 ? 0.0 : abs_pow(phi.v, p) * ipow(sigma, 2 * (m - 1));
  });
}

NormValue s_integral_laplacian(const TestFunction& tf, double p, const QuadratureSpec& quad,
                               unsigned workers) {
  const int m = tf.profile().config().m;
  return s_integral(tf, p, quad, workers, [&](const Jet& phi, double sigma) {
    return phi.d2 == 0.0 ? 0.0 : abs_pow(phi.d2, p) * std::pow(sigma, 2.0 * (p - 1.0) * (1 - m));
  });
}

NormValue slope_integral(const WarpingProfile& profile, double a, double b, double p,
                         const QuadratureSpec& quad, unsigned workers) {
  const auto g = [&](double o, double x) { return abs_pow(profile.eval(o, x).d1, p); };
  const QuadResult q = integrate_local(g, a, b, profile.breakpoints_in(a, b), quad, workers,
                                      profile.stationary_points_in(a, b));
  return {q.value, q.err, q.panels};
}

NormReport norms_report(const TestFunction& tf, double p, const QuadratureSpec& quad,
                        unsigned workers) {
  check_exponent(p);
  const int m = tf.profile().config().m;
  const FieldIntegrand g = [&](double o, double x, double* out) {
    const Point pt = point_at(tf, o, x);
    const double w = ipow(pt.sigma.v, m - 1);
    const double lap = green_identity(pt, m);
    const double hess = hessian_of_radial(pt.sigma, pt.u, m).norm();
    out[0] = pt.u.v == 0.0 ? 0.0 : abs_pow(pt.u.v, p) * w;
    out[1] = lap == 0.0 ? 0.0 : abs_pow(lap, p) * w;
    out[2] = hess == 0.0 ? 0.0 : abs_pow(hess, p) * w;
  };
  const Interval sup = tf.support_r();
  const auto q =
      integrate_fields(g, 3, sup.lo, sup.hi, tf.breakpoints(), quad, workers, tf.kinks());
  const double gamma = tf.profile().config().gamma_m;
  NormReport rep;
  rep.p = p;
  rep.norm_u_p_pow = gamma * q[0].value;
  rep.norm_lap_p_pow = gamma * q[1].value;
  rep.norm_hess_p_pow = gamma * q[2].value;
  rep.quadrature_error = gamma * std::max({q[0].err, q[1].err, q[2].err});
  rep.panels = q[0].panels;
  return rep;
}

}  // namespace czwarp
