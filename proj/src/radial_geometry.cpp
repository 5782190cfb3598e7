// SPDX-License-Identifier: Apache-2.0
#include "czwarp/radial_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "czwarp/errors.hpp"
#include "czwarp/kernels.hpp"
#include "czwarp/numeric.hpp"

namespace czwarp {

namespace {

double line_integral(const Line& l, int m, double a, double b) {
  const double sa = l.y0 + l.slope * (a - l.t0);
  if (l.slope == 0.0) return ipow(sa, 1 - m) * (b - a);
  const double x = std::log1p(l.slope * (b - a) / sa);
  const double q = 2.0 - m;
  if (m == 2) return x / l.slope;
  return std::pow(sa, q) * std::expm1(q * x) / (q * l.slope);
}

double power_integral(const PowerLaw& p, int m, double a, double b) {
  const double base = a + p.shift;
  const double x = std::log1p((b - a) / base);
  const double q1 = 1.0 + p.exponent * (1.0 - m);
  if (q1 == 0.0) return x;
  return std::pow(base, q1) * std::expm1(q1 * x) / q1;
}

// Point evaluation inside a blend: one fixed panel in local coordinates. The
// integrand varies by a small relative amount across the blend, so a single
// 8-node panel is well below the table's own accuracy.
double blend_partial(const Piece& piece, int m, double a, double b) {
  static const GaussRule& rule = gauss_legendre(4);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * ipow(eval_piece_value(piece, a, half + half * rule.nodes[i]), 1 - m);
  return half * acc;
}

double partial_integral(const Piece& piece, int m, double a, double b) {
  if (std::holds_alternative<Blend>(piece)) return blend_partial(piece, m, a, b);
  return piece_green_integral(piece, m, a, b);
}

}  // namespace

double piece_green_integral(const Piece& piece, int m, double a, double b) {
  if (a == b) return 0.0;
  if (const auto* l = std::get_if<Line>(&piece)) return line_integral(*l, m, a, b);
  if (const auto* p = std::get_if<PowerLaw>(&piece)) return power_integral(*p, m, a, b);
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  const auto f = [&](double o, double x) { return ipow(eval_piece_value(piece, o, x), 1 - m); };
  return integrate_local(f, a, b, {}, spec).value;
}

GreenFunction::GreenFunction(std::shared_ptr<const WarpingProfile> profile, double r_max,
                             double fill_spacing)
    : profile_(std::move(profile)), m_(profile_->config().m) {
  if (!(r_max > 1.0) || !std::isfinite(r_max))
    throw Error(ErrorKind::out_of_range, "Green's function range must be a finite r_max > 1");
  if (!(fill_spacing > 0.0)) throw Error(ErrorKind::invalid_argument, "fill_spacing must be > 0");
  if ((r_max - 1.0) / fill_spacing > 5e7)
    throw Error(ErrorKind::out_of_range, "Green's function table would exceed 5e7 checkpoints");

  std::vector<double> anchors{1.0};
  for (double k : profile_->knots_in(1.0, r_max)) anchors.push_back(k);
  anchors.push_back(r_max);
  r_.reserve(anchors.size() + static_cast<std::size_t>((r_max - 1.0) / fill_spacing) + 1);
  r_.push_back(1.0);
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const double lo = anchors[i - 1], hi = anchors[i];
    const auto parts = static_cast<long>(std::ceil((hi - lo) / fill_spacing));
    for (long j = 1; j < parts; ++j) r_.push_back(lo + (hi - lo) * j / parts);
    r_.push_back(hi);
  }

  g_.resize(r_.size());
  seg_.resize(r_.size());
  g_[0] = 0.0;
  double total = 0.0, carry = 0.0;  // Neumaier summation
  for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
    seg_[i] = profile_->segment_index(r_[i]);
    const double piece = piece_green_integral(profile_->segments()[seg_[i]].piece, m_, r_[i], r_[i + 1]);
    const double t = total + piece;
    carry += (std::abs(total) >= std::abs(piece)) ? (total - t) + piece : (piece - t) + total;
    total = t;
    g_[i + 1] = total + carry;
  }
  seg_.back() = profile_->segment_index(r_.back());
}

double GreenFunction::value(double r) const {
  if (!(r >= 1.0) || r > r_.back())
    throw Error(ErrorKind::out_of_range, "G(r) requested outside the tabulated range [1, r_max]");
  // Integrands walk r monotonically; try the last interval first.
  thread_local const GreenFunction* owner = nullptr;
  thread_local std::size_t hint = 0;
  std::size_t i;
  if (owner == this && hint + 1 < r_.size() && r >= r_[hint] && r < r_[hint + 1]) {
    i = hint;
  } else if (owner == this && hint + 2 < r_.size() && r >= r_[hint + 1] && r < r_[hint + 2]) {
    i = ++hint;
  } else {
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    i = std::min(static_cast<std::size_t>(it - r_.begin()), r_.size() - 1) - 1;
    owner = this;
    hint = i;
  }
  if (r == r_[i]) return g_[i];
  return g_[i] + partial_integral(profile_->segments()[seg_[i]].piece, m_, r_[i], r);
}

double GreenFunction::inverse(double s) const {
  if (!(s >= 0.0)) throw Error(ErrorKind::invalid_argument, "G^{-1}(s) requires s >= 0");
  if (s > g_.back())
    throw Error(ErrorKind::out_of_range,
                "G^{-1}(s) beyond the tabulated range; build the profile over a longer interval");
  auto it = std::upper_bound(g_.begin(), g_.end(), s);
  std::size_t i = std::min(static_cast<std::size_t>(it - g_.begin()), g_.size() - 1) - 1;
  if (s == g_[i]) return r_[i];
  if (s == g_[i + 1]) return r_[i + 1];
  const Piece& piece = profile_->segments()[seg_[i]].piece;
  const double target = s - g_[i];
  double lo = r_[i], hi = r_[i + 1];
  auto residual = [&](double r) { return partial_integral(piece, m_, r_[i], r) - target; };
  auto slope = [&](double r) { return ipow(eval_piece(piece, r).v, 1 - m_); };
  double r = lo + target / slope(lo);
  if (!(r > lo && r < hi)) r = 0.5 * (lo + hi);
  const double tol = 1e-14 * std::max(1.0, s);
  for (int it_count = 0; it_count < 100; ++it_count) {
    const double f = residual(r);
    if (std::abs(f) <= tol) break;
    (f < 0.0 ? lo : hi) = r;
    double next = r - f / slope(r);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == r || hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) {
      r = next;
      break;
    }
    r = next;
  }
  return r;
}

Jet GreenFunction::jet(double r) const {
  const Jet s = profile_->eval(r);
  const double d1 = ipow(s.v, 1 - m_);
  return {value(r), d1, (1.0 - m_) * d1 / s.v * s.d1};
}

double find_h(const GreenFunction& gf, double k) {
  if (!(k >= 1.0)) throw Error(ErrorKind::invalid_argument, "window index k must be >= 1");
  const double h = gf.inverse(k + kUniversalDelta);
  if (!(h > k)) throw Error(ErrorKind::window_too_narrow, "h(k) does not exceed k");
  if (gf.value(h + 1.0) > k + 1.0 - kUniversalDelta)
    throw Error(ErrorKind::window_too_narrow,
                "[h, h+1] does not fit inside [G^-1(k+delta), G^-1(k+1-delta)]");
  return h;
}

BoundAudit audit_green_bounds(const GreenFunction& gf, double s_max, int samples, double tol) {
  if (samples < 2 || !(s_max > 0.0))
    throw Error(ErrorKind::invalid_argument, "audit_green_bounds needs s_max > 0, samples >= 2");
  if (s_max > gf.s_max())
    throw Error(ErrorKind::out_of_range, "audit range exceeds the tabulated Green's function");
  const double alpha = gf.profile().config().alpha;
  const std::size_t n = static_cast<std::size_t>(samples);
  std::vector<double> s(n), t(n);
  std::vector<double> g(n), g_lo(n), g_hi(n), g_sc(n);
  std::vector<double> r_lo(n), r_hi(n), r_sc(n);
  std::vector<double> sig(n), sig_lo(n), sig_hi(n), sig_sc(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = (i + 1 == n) ? s_max : s_max * static_cast<double>(i) / (n - 1);
    t[i] = gf.inverse(s[i]);
    g[i] = gf.value(t[i]);
    g_lo[i] = std::log((t[i] + 1.0) / 2.0);
    g_hi[i] = std::log(t[i]);
    g_sc[i] = std::max(1.0, std::abs(g_hi[i]));
    r_lo[i] = std::exp(s[i]);
    r_hi[i] = 2.0 * std::exp(s[i]) - 1.0;
    r_sc[i] = std::max(1.0, r_hi[i]);
    sig[i] = gf.profile().eval(t[i]).v;
    sig_lo[i] = std::exp(alpha * s[i]);
    sig_hi[i] = std::pow(2.0, alpha) * sig_lo[i];
    sig_sc[i] = std::max(1.0, sig_hi[i]);
  }
  BoundAudit audit;
  auto check = [&](const char* lo_name, const char* hi_name, const std::vector<double>& v,
                   const std::vector<double>& lo, const std::vector<double>& hi,
                   const std::vector<double>& sc) {
    const auto ex = kernels::bound_excess(v, lo, hi, sc);
    auto where = [&](bool lower, double worst) {
      for (std::size_t i = 0; i < n; ++i) {
        const double e = lower ? (lo[i] - v[i]) / sc[i] : (v[i] - hi[i]) / sc[i];
        if (e == worst) return s[i];
      }
      return std::numeric_limits<double>::quiet_NaN();
    };
    audit.add({lo_name, ex.below, where(true, ex.below), tol, ex.below <= tol});
    audit.add({hi_name, ex.above, where(false, ex.above), tol, ex.above <= tol});
  };
  check("G lower: log((t+1)/2) <= G(t)", "G upper: G(t) <= log t", g, g_lo, g_hi, g_sc);
  check("G^-1 lower: e^s <= G^-1(s)", "G^-1 upper: G^-1(s) <= 2e^s - 1", t, r_lo, r_hi, r_sc);
  check("sigma lower: e^(alpha s) <= sigma(G^-1(s))",
        "sigma upper: sigma(G^-1(s)) <= 2^alpha e^(alpha s)", sig, sig_lo, sig_hi, sig_sc);
  return audit;
}

}  // namespace czwarp
