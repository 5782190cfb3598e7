// SPDX-License-Identifier: Apache-2.0
#include "czwarp/warping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "czwarp/errors.hpp"
#include "czwarp/kernels.hpp"

namespace czwarp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ManifoldConfig ManifoldConfig::make(int m) {
  if (m < 2) throw Error(ErrorKind::invalid_argument, "dimension m must be >= 2");
  ManifoldConfig c;
  c.m = m;
  c.alpha = 1.0 / (m - 1);
  c.gamma_m = 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
  return c;
}

Jet Line::at(double t) const {
  return {y0 + slope * (t - t0), slope, 0.0};
}

Jet Line::at(double origin, double offset) const {
  return {y0 + slope * ((origin - t0) + offset), slope, 0.0};
}

Jet PowerLaw::at(double t) const { return at(t, 0.0); }

Jet PowerLaw::at(double origin, double offset) const {
  const double x = (origin + shift) + offset;
  const double v = std::pow(x, exponent);
  const double d1 = exponent * v / x;
  return {v, d1, (exponent - 1.0) * d1 / x};
}

Jet Polynomial::at(double t) const {
  double v = c[5], d1 = 5.0 * c[5], d2 = 20.0 * c[5];
  for (int i = 4; i >= 0; --i) v = v * t + c[i];
  for (int i = 4; i >= 1; --i) d1 = d1 * t + i * c[i];
  for (int i = 4; i >= 2; --i) d2 = d2 * t + i * (i - 1) * c[i];
  return {v, d1, d2};
}

Jet eval_carrier(const Carrier& c, double t) {
  return std::visit([t](const auto& p) { return p.at(t); }, c);
}

Jet eval_carrier(const Carrier& c, double origin, double offset) {
  return std::visit([=](const auto& p) { return p.at(origin, offset); }, c);
}

Blend Blend::make(Carrier from, Carrier to, double a, double b) {
  const double fa = eval_carrier(from, a).v, ga = eval_carrier(to, a).v;
  return {std::move(from), std::move(to), a, b, fa, ga};
}

Jet Blend::at(double t) const { return at(t, 0.0); }

namespace {

// Carrier at a + u as (c(a + u) - c(a), c', c''), with the increment computed
// without cancellation.
Jet carrier_increment(const Carrier& c, double a, double u) {
  if (const auto* l = std::get_if<Line>(&c)) return {l->slope * u, l->slope, 0.0};
  const auto& p = std::get<PowerLaw>(c);
  const double x = a + p.shift;
  const double inc = std::pow(x, p.exponent) * std::expm1(p.exponent * std::log1p(u / x));
  const Jet j = p.at(a, u);
  return {inc, j.d1, j.d2};
}

}  // namespace

// The carriers are expanded about the blend start, so the gap between them
// is a smooth function of the local coordinate even where they nearly meet.
Jet Blend::at(double origin, double offset) const {
  const double inv = 1.0 / (b - a);
  const double u = (origin - a) + offset;
  const Jet s = smooth_step(u * inv);
  const double fa = from_a, ga = to_a;
  const Jet fi = carrier_increment(from, a, u), gi = carrier_increment(to, a, u);
  const double f = fa + fi.v;
  const double dv = (ga - fa) + (gi.v - fi.v);
  const double dd = gi.d1 - fi.d1;
  return {f + s.v * dv, fi.d1 + s.v * dd + s.d1 * inv * dv,
          (1.0 - s.v) * fi.d2 + s.v * gi.d2 + 2.0 * s.d1 * inv * dd + s.d2 * inv * inv * dv};
}

double Blend::value(double origin, double offset) const {
  const double u = (origin - a) + offset;
  const double s = smooth_step_value(u / (b - a));
  const double fa = from_a, ga = to_a;
  const double fi = carrier_increment(from, a, u).v, gi = carrier_increment(to, a, u).v;
  return fa + fi + s * ((ga - fa) + (gi - fi));
}

double eval_piece_value(const Piece& p, double origin, double offset) {
  if (const auto* b = std::get_if<Blend>(&p)) return b->value(origin, offset);
  return eval_piece(p, origin, offset).v;
}

Jet eval_piece(const Piece& p, double t) {
  return std::visit([t](const auto& q) { return q.at(t); }, p);
}

Jet eval_piece(const Piece& p, double origin, double offset) {
  return std::visit([=](const auto& q) { return q.at(origin, offset); }, p);
}

double SawtoothWindow::min_slope() const {
  return std::min(std::abs(rise_slope()), std::abs(fall_slope()));
}

WarpingProfile WarpingProfile::from_segments(ManifoldConfig config, std::vector<Segment> segments,
                                             std::vector<SawtoothWindow> windows,
                                             std::optional<std::array<double, 6>> cap) {
  if (segments.empty()) throw Error(ErrorKind::invalid_argument, "profile needs segments");
  if (segments.front().lo != 0.0)
    throw Error(ErrorKind::invalid_argument, "first segment must start at 0");
  if (segments.back().hi != kInf)
    throw Error(ErrorKind::invalid_argument, "last segment must extend to infinity");
  WarpingProfile p;
  p.config_ = config;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].lo < segments[i].hi))
      throw Error(ErrorKind::invalid_argument, "segment with empty range");
    if (i > 0) {
      if (segments[i].lo != segments[i - 1].hi)
        throw Error(ErrorKind::invalid_argument, "segments must tile without gaps or overlaps");
      p.knots_.push_back(segments[i].lo);
    }
  }
  p.segments_ = std::move(segments);
  for (const auto& w : windows) p.extents_.push_back({w.z, w.z + w.width});
  p.windows_ = std::move(windows);
  p.cap_ = cap;
  return p;
}

std::size_t WarpingProfile::segment_index(double t) const {
  // Quadrature and table builds walk t monotonically; try the last hit first.
  thread_local const WarpingProfile* owner = nullptr;
  thread_local std::size_t hint = 0;
  if (owner == this && hint < segments_.size()) {
    const Segment& s = segments_[hint];
    if (t >= s.lo && t < s.hi) return hint;
    if (hint + 1 < segments_.size() && t >= s.hi && t < segments_[hint + 1].hi) return ++hint;
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  owner = this;
  hint = static_cast<std::size_t>(it - knots_.begin());
  return hint;
}

Jet WarpingProfile::eval(double t) const {
  return eval_piece(segments_[segment_index(t)].piece, t);
}

Jet WarpingProfile::eval(double origin, double offset) const {
  return eval_piece(segments_[segment_index(origin + offset)].piece, origin, offset);
}

std::span<const double> WarpingProfile::knots_in(double a, double b) const {
  const auto lo = std::upper_bound(knots_.begin(), knots_.end(), a);
  const auto hi = std::lower_bound(lo, knots_.end(), b);
  return {knots_.data() + (lo - knots_.begin()), static_cast<std::size_t>(hi - lo)};
}

std::vector<double> WarpingProfile::stationary_points_in(double a, double b) const {
  std::vector<double> out;
  if (!(a < b)) return out;
  const std::size_t first = segment_index(a), last = segment_index(b);
  for (std::size_t i = first; i <= last && i < segments_.size(); ++i) {
    const auto* blend = std::get_if<Blend>(&segments_[i].piece);
    if (!blend) continue;
    const double lo = segments_[i].lo, width = segments_[i].hi - lo;
    auto d1 = [&](double x) { return blend->at(lo, x).d1; };
    constexpr int kScan = 32;
    double x0 = 0.0, f0 = d1(0.0);
    for (int j = 1; j <= kScan; ++j) {
      const double x1 = width * j / kScan, f1 = d1(x1);
      if ((f0 < 0.0) != (f1 < 0.0) && f0 != 0.0) {
        double l = x0, r = x1, fl = f0;
        for (int it = 0; it < 200 && r - l > 0.0; ++it) {
          const double mid = l + 0.5 * (r - l);
          if (mid == l || mid == r) break;
          const double fm = d1(mid);
          if ((fm < 0.0) == (fl < 0.0)) {
            l = mid;
            fl = fm;
          } else {
            r = mid;
          }
        }
        const double t = lo + 0.5 * (l + r);
        if (t > a && t < b) out.push_back(t);
      }
      x0 = x1;
      f0 = f1;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> WarpingProfile::breakpoints_in(double a, double b) const {
  const auto knots = knots_in(a, b);
  const auto stat = stationary_points_in(a, b);
  std::vector<double> out;
  out.reserve(knots.size() + stat.size());
  std::merge(knots.begin(), knots.end(), stat.begin(), stat.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::array<double, 6> cap_coefficients(double alpha) {
  // sigma = t + c3 t^3 + c4 t^4 + c5 t^5, matching value, slope and curvature
  // of (t + 1/2)^alpha at t = 1.
  const double v = std::pow(1.5, alpha);
  const double s = alpha * v / 1.5;
  const double k = (alpha - 1.0) * s / 1.5;
  const double A = v - 1.0, B = s - 1.0, C = k;
  // rows: [1 1 1], [3 4 5], [6 12 20]
  const double r2 = B - 3.0 * A;  // c4 + 2 c5
  const double r3 = C - 6.0 * A;  // 6 c4 + 14 c5
  const double c5 = (r3 - 6.0 * r2) / 2.0;
  const double c4 = r2 - 2.0 * c5;
  const double c3 = A - c4 - c5;
  return {0.0, 1.0, 0.0, c3, c4, c5};
}

WarpingProfile build_base_profile(const ManifoldConfig& config) {
  const auto cap = cap_coefficients(config.alpha);
  std::vector<Segment> segs;
  segs.push_back({0.0, 1.0, Polynomial{cap}});
  segs.push_back({1.0, kInf, PowerLaw{0.5, config.alpha}});
  return WarpingProfile::from_segments(config, std::move(segs), {}, cap);
}

double default_smooth_halfwidth(double step) {
  // step^10 is far below double resolution for any useful tooth count
  return std::max(step / 100.0, std::pow(step, 10.0));
}

double cube_side(double alpha, double h) {
  return std::pow(h + 1.0, alpha) * std::expm1(alpha * std::log1p(1.0 / (h + 1.0))) / 10.0;
}

SawtoothWindow plan_window(const ManifoldConfig& config, double h, int n_teeth,
                           std::optional<double> smooth_halfwidth) {
  if (!(h >= 1.0)) throw Error(ErrorKind::invalid_argument, "window anchor h must be >= 1");
  if (n_teeth < 1) throw Error(ErrorKind::invalid_argument, "n_teeth must be >= 1");
  SawtoothWindow w;
  w.z = h;
  w.n_teeth = n_teeth;
  if (config.m == 2) {
    w.width = 1.0;
    w.amplitude = 1.0;
    w.base = h;
    w.drift = 1.0;
  } else {
    const double eta = cube_side(config.alpha, h);
    w.width = eta;
    w.amplitude = eta;
    w.base = std::pow(h + eta, config.alpha);
    w.drift = 0.0;
    const double floor_at_right = std::pow(w.z + w.width, config.alpha);
    const double ceiling_at_left = std::pow(w.z + 1.0, config.alpha);
    if (w.base < floor_at_right || w.base + w.amplitude > ceiling_at_left)
      throw Error(ErrorKind::cube_does_not_fit, "oscillation cube leaves the strip at h");
  }
  w.step = w.width / (2.0 * n_teeth);
  w.smooth_halfwidth = smooth_halfwidth.value_or(default_smooth_halfwidth(w.step));
  if (!(w.smooth_halfwidth > 0.0) || !(w.smooth_halfwidth < 0.5 * w.step))
    throw Error(ErrorKind::invalid_argument, "smooth_halfwidth must lie in (0, step/2)");
  return w;
}

namespace {

bool is_carrier(const Piece& p) {
  return std::holds_alternative<Line>(p) || std::holds_alternative<PowerLaw>(p);
}

Carrier as_carrier(const Piece& p) {
  if (const auto* l = std::get_if<Line>(&p)) return *l;
  return std::get<PowerLaw>(p);
}

// Where a tooth line leaves the start/end point and meets the carrier.
// `dir` = -1 searches left of t_start, +1 right of it.
double meet_carrier(const Line& line, const Carrier& carrier, double t_start, double dir,
                    double step) {
  auto gap = [&](double t) { return line.at(t).v - eval_carrier(carrier, t).v; };
  if (!(gap(t_start) < 0.0))
    throw Error(ErrorKind::footprint_out_of_range,
                "window start/end lies on or above the surrounding profile");
  double reach = step;
  double far = t_start + dir * reach;
  while (gap(far) < 0.0) {
    reach *= 2.0;
    far = t_start + dir * reach;
    if (far < 1.0 || reach > 1e6)
      throw Error(ErrorKind::footprint_out_of_range, "lead line does not meet the profile");
  }
  double inside = t_start;  // gap < 0
  double outside = far;     // gap >= 0
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    (gap(mid) < 0.0 ? inside : outside) = mid;
  }
  return 0.5 * (inside + outside);
}

}  // namespace

WarpingProfile insert_sawtooth(const WarpingProfile& profile, const SawtoothWindow& win) {
  const double S = win.step;
  const double w = win.smooth_halfwidth;
  const int n = win.n_teeth;
  if (n < 1 || !(S > 0.0) || !(w > 0.0) || !(w < 0.5 * S))
    throw Error(ErrorKind::invalid_argument, "malformed sawtooth window");
  if (!(win.z >= 1.0))
    throw Error(ErrorKind::footprint_out_of_range, "window footprint must lie in [1, inf)");

  // Corner j sits at t_j = z + j S; even corners are valleys, odd ones peaks.
  auto corner_t = [&](int j) { return win.z + j * S; };
  auto corner_y = [&](int j) {
    return win.base + win.drift * j * S + ((j % 2 == 1) ? win.amplitude : 0.0);
  };
  std::vector<Line> lines;
  lines.reserve(2 * n + 2);
  lines.push_back({corner_t(0), corner_y(0), win.fall_slope()});  // virtual lead-in
  for (int j = 0; j < 2 * n; ++j)
    lines.push_back({corner_t(j), corner_y(j), j % 2 == 0 ? win.rise_slope() : win.fall_slope()});
  lines.push_back({corner_t(2 * n), corner_y(2 * n), win.rise_slope()});  // virtual lead-out

  const double t_first = corner_t(0), t_last = corner_t(2 * n);
  const std::size_t host_left = profile.segment_index(t_first);
  const std::size_t host_right = profile.segment_index(t_last);
  const auto& segs = profile.segments();
  auto overlaps = [&](double lo, double hi) {
    for (const auto& e : profile.extents())
      if (lo <= e.hi && e.lo <= hi) return true;
    return false;
  };
  if (overlaps(t_first, t_last))
    throw Error(ErrorKind::overlapping_window, "window footprint overlaps an existing window");
  if (host_left != host_right || !is_carrier(segs[host_left].piece))
    throw Error(ErrorKind::footprint_out_of_range,
                "window footprint must sit on a single smooth base piece");
  const Segment& host = segs[host_left];
  const Carrier carrier = as_carrier(host.piece);

  const double t_in = meet_carrier(lines.front(), carrier, t_first, -1.0, S);
  const double t_out = meet_carrier(lines.back(), carrier, t_last, +1.0, S);
  if (!(t_first - t_in > 2.0 * w) || !(t_out - t_last > 2.0 * w))
    throw Error(ErrorKind::footprint_out_of_range, "lead lines shorter than the corner blends");
  const Footprint extent{t_in - w, t_out + w};
  if (overlaps(extent.lo, extent.hi))
    throw Error(ErrorKind::overlapping_window, "window footprint overlaps an existing window");
  if (!(extent.lo > host.lo) || !(extent.hi < host.hi) || extent.lo < 1.0)
    throw Error(ErrorKind::footprint_out_of_range,
                "window footprint does not fit inside its base piece");

  std::vector<Segment> out;
  out.reserve(segs.size() + 4 * n + 8);
  for (std::size_t i = 0; i < host_left; ++i) out.push_back(segs[i]);

  auto blend = [&](const Carrier& from, const Carrier& to, double c) {
    out.push_back({c - w, c + w, Blend::make(from, to, c - w, c + w)});
  };
  out.push_back({host.lo, t_in - w, host.piece});
  blend(carrier, lines.front(), t_in);
  out.push_back({t_in + w, t_first - w, lines.front()});
  for (std::size_t j = 1; j < lines.size(); ++j) {
    const double c = corner_t(static_cast<int>(j) - 1);
    blend(lines[j - 1], lines[j], c);
    const double next = (j + 1 < lines.size()) ? corner_t(static_cast<int>(j)) : t_out;
    out.push_back({c + w, next - w, lines[j]});
  }
  blend(lines.back(), carrier, t_out);
  out.push_back({t_out + w, host.hi, host.piece});
  for (std::size_t i = host_left + 1; i < segs.size(); ++i) out.push_back(segs[i]);

  WarpingProfile result = WarpingProfile::from_segments(profile.config(), std::move(out), {},
                                                        profile.cap_coefficients());
  result.windows_ = profile.windows();
  result.extents_ = profile.extents();
  result.windows_.push_back(win);
  result.extents_.push_back(extent);
  return result;
}

BoundAudit audit_strip(const WarpingProfile& profile, double t_min, double t_max, int samples,
                       double tol) {
  if (!(t_min >= 1.0) || !(t_min < t_max) || samples < 2)
    throw Error(ErrorKind::invalid_argument, "audit_strip needs 1 <= t_min < t_max, samples >= 2");
  const double alpha = profile.config().alpha;
  std::vector<double> ts;
  const auto knots = profile.knots_in(t_min, t_max);
  ts.reserve(samples + knots.size());
  for (int i = 0; i < samples; ++i)
    ts.push_back(i + 1 == samples ? t_max : t_min + (t_max - t_min) * i / (samples - 1));
  ts.insert(ts.end(), knots.begin(), knots.end());
  std::sort(ts.begin(), ts.end());

  const std::size_t n = ts.size();
  std::vector<double> v(n), lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = profile.eval(ts[i]).v;
    lo[i] = std::pow(ts[i], alpha);
    hi[i] = std::pow(ts[i] + 1.0, alpha);
  }
  const kernels::Excess ex = kernels::bound_excess(v, lo, hi, lo);

  auto locate = [&](auto excess_at, double worst) {
    for (std::size_t i = 0; i < n; ++i)
      if (excess_at(i) == worst) return ts[i];
    return std::numeric_limits<double>::quiet_NaN();
  };
  BoundAudit audit;
  audit.add({"strip lower: t^alpha <= sigma(t)", ex.below,
             locate([&](std::size_t i) { return (lo[i] - v[i]) / lo[i]; }, ex.below), tol,
             ex.below <= tol});
  audit.add({"strip upper: sigma(t) <= (t+1)^alpha", ex.above,
             locate([&](std::size_t i) { return (v[i] - hi[i]) / lo[i]; }, ex.above), tol,
             ex.above <= tol});
  for (double x : v) {
    if (!std::isfinite(x)) {
      audit.add({"sigma finite", kInf, 0.0, 0.0, false});
      break;
    }
  }
  return audit;
}

}  // namespace czwarp
