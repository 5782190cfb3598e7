#include <doctest.h>

#include <cmath>
#include <numbers>
#include <variant>

#include "czwarp/errors.hpp"
#include "czwarp/warping.hpp"

using namespace czwarp;
using doctest::Approx;

namespace {

WarpingProfile base(int m) { return build_base_profile(ManifoldConfig::make(m)); }

WarpingProfile windowed(int m, double h, int n) {
  return insert_sawtooth(base(m), plan_window(ManifoldConfig::make(m), h, n));
}

}  // namespace

TEST_SUITE("warping") {

TEST_CASE("manifold constants") {
  const auto c2 = ManifoldConfig::make(2);
  const auto c3 = ManifoldConfig::make(3);
  const auto c5 = ManifoldConfig::make(5);
  CHECK(c2.alpha == 1.0);
  CHECK(c3.alpha == 0.5);
  CHECK(c5.alpha == 0.25);
  CHECK(c2.gamma_m == Approx(2 * std::numbers::pi).epsilon(1e-15));
  CHECK(c3.gamma_m == Approx(4 * std::numbers::pi).epsilon(1e-15));
  CHECK(c5.gamma_m == Approx(8 * std::numbers::pi * std::numbers::pi / 3).epsilon(1e-14));
  CHECK_THROWS_AS(ManifoldConfig::make(1), Error);
}

TEST_CASE("base profile m=2 is t + 1/2 past the cap") {
  const WarpingProfile p = base(2);
  const Jet s = p.eval(2.0);
  CHECK(s.v == 2.5);
  CHECK(s.d1 == 1.0);
  const Jet s10 = p.eval(10.0);
  CHECK(s10.v == 10.5);
  CHECK(s10.d1 == 1.0);
  CHECK(s10.d2 == 0.0);
  const Jet s0 = p.eval(0.0);
  CHECK(s0.v == 0.0);
  CHECK(s0.d1 == Approx(1.0).epsilon(1e-15));
  CHECK(s0.d2 == Approx(0.0));
}

TEST_CASE("base profile m=3 sits inside the strip") {
  const WarpingProfile p = base(3);
  const double s4 = p.eval(4.0).v;
  CHECK(s4 == Approx(std::sqrt(4.5)).epsilon(1e-15));
  CHECK(s4 == Approx(2.1213).epsilon(1e-4));
  CHECK(2.0 <= s4);
  CHECK(s4 <= std::sqrt(5.0));
  const Jet s3 = p.eval(3.0);
  CHECK(s3.v == Approx(std::sqrt(3.5)).epsilon(1e-15));
  CHECK(s3.d1 == Approx(0.5 / std::sqrt(3.5)).epsilon(1e-15));
  CHECK(s3.d2 == Approx(-0.25 * std::pow(3.5, -1.5)).epsilon(1e-14));
}

TEST_CASE("cap joins the power law with C2 contact") {
  for (int m : {2, 3, 4, 6}) {
    CAPTURE(m);
    const WarpingProfile p = base(m);
    const double alpha = p.config().alpha;
    const Jet left = p.segments().front().piece.index() == 0
                         ? std::get<Polynomial>(p.segments().front().piece).at(1.0)
                         : p.eval(1.0);
    const Jet right = p.eval(1.0);
    CHECK(right.v == Approx(std::pow(1.5, alpha)).epsilon(1e-15));
    CHECK(left.v == Approx(right.v).epsilon(1e-13));
    CHECK(left.d1 == Approx(right.d1).epsilon(1e-12));
    CHECK(left.d2 == Approx(right.d2).epsilon(1e-11));
    for (int i = 1; i <= 100; ++i) {
      const double t = i / 100.0;
      const double v = p.eval(t).v;
      CHECK(v > 0.0);
      CHECK(v <= std::pow(t + 1.0, alpha));
    }
  }
}

TEST_CASE("m=3 cube at h=4") {
  const SawtoothWindow w = plan_window(ManifoldConfig::make(3), 4.0, 7);
  const double eta = (std::sqrt(6.0) - std::sqrt(5.0)) / 10.0;
  CHECK(w.width == Approx(eta).epsilon(1e-13));
  CHECK(w.width == Approx(0.021341).epsilon(1e-4));
  CHECK(w.amplitude == w.width);
  CHECK(w.base == Approx(std::sqrt(4.0 + eta)).epsilon(1e-14));
  CHECK(w.base == Approx(2.005329).epsilon(1e-6));
  CHECK(w.z == 4.0);
  CHECK(2 * w.n_teeth * w.step == Approx(w.width).epsilon(1e-15));
}

TEST_CASE("m=2 window geometry") {
  const SawtoothWindow w = plan_window(ManifoldConfig::make(2), 3.0, 5);
  CHECK(w.z == 3.0);
  CHECK(w.width == 1.0);
  CHECK(w.step == Approx(0.1));
  CHECK(w.amplitude == 1.0);
  CHECK(w.base == 3.0);
  CHECK(w.smooth_halfwidth == Approx(0.001));
  CHECK(w.smooth_halfwidth < 0.5 * w.step);

  const SawtoothWindow one = plan_window(ManifoldConfig::make(2), 3.0, 1);
  CHECK(one.step == 0.5);
  CHECK(one.rise_slope() == 3.0);
  CHECK(std::abs(one.fall_slope()) == 1.0);
}

TEST_CASE("plan_window rejects bad input") {
  const auto c = ManifoldConfig::make(3);
  CHECK_THROWS_AS(plan_window(c, 0.5, 4), Error);
  CHECK_THROWS_AS(plan_window(c, 4.0, 0), Error);
  CHECK_THROWS_AS(plan_window(c, 4.0, 4, 1.0), Error);
}

TEST_CASE("m=2 teeth slopes are 2n+1 and -(2n-1)") {
  const WarpingProfile p = windowed(2, 3.0, 5);
  const SawtoothWindow& w = p.windows().front();
  for (int j = 0; j < 10; ++j) {
    const double mid = 3.0 + (j + 0.5) * w.step;
    CHECK(p.eval(mid).d1 == Approx(j % 2 == 0 ? 11.0 : -9.0).epsilon(1e-13));
  }
}

TEST_CASE("corner values lie on the diagonal drift") {
  const WarpingProfile p = windowed(2, 3.0, 1);
  CHECK(p.eval(3.0).v == Approx(3.0).epsilon(1e-15));
  CHECK(p.eval(4.0).v == Approx(4.0).epsilon(1e-15));
  CHECK(p.eval(3.5).v == Approx(4.5).epsilon(1e-15));

  const WarpingProfile q = windowed(3, 4.0, 3);
  const SawtoothWindow& w = q.windows().front();
  CHECK(q.eval(w.z).v == Approx(w.base).epsilon(1e-14));
  CHECK(q.eval(w.z + w.step).v == Approx(w.base + w.amplitude).epsilon(1e-14));
  CHECK(q.eval(w.z + 2 * w.step).v == Approx(w.base).epsilon(1e-14));
}

TEST_CASE("blend values stay between the adjoining lines") {
  const WarpingProfile p = windowed(2, 3.0, 4);
  int blends = 0;
  for (const Segment& s : p.segments()) {
    const auto* b = std::get_if<Blend>(&s.piece);
    if (!b) continue;
    ++blends;
    for (int i = 0; i <= 20; ++i) {
      const double t = s.lo + (s.hi - s.lo) * i / 20.0;
      const double f = eval_carrier(b->from, t).v, g = eval_carrier(b->to, t).v;
      const double v = p.eval(t).v;
      const double tol = 1e-14 * std::abs(v);
      CHECK(v >= std::min(f, g) - tol);
      CHECK(v <= std::max(f, g) + tol);
    }
  }
  CHECK(blends == 2 * 4 + 3);
}

TEST_CASE("sigma and sigma' are continuous at every knot") {
  for (int m : {2, 3, 4}) {
    CAPTURE(m);
    const WarpingProfile p = windowed(m, 20.0, 16);
    for (std::size_t i = 1; i < p.segments().size(); ++i) {
      const Segment& l = p.segments()[i - 1];
      const Segment& r = p.segments()[i];
      const double t = r.lo;
      const Jet a = eval_piece(l.piece, t);
      const Jet b = eval_piece(r.piece, t);
      CHECK(std::abs(a.v - b.v) <= 1e-12 * std::abs(b.v));
      CHECK(std::abs(a.d1 - b.d1) <= 1e-12 * std::max(1.0, std::abs(b.d1)));
    }
  }
}

TEST_CASE("slope floor holds piece by piece") {
  const int n = 32;
  const WarpingProfile p = windowed(2, 10.0, n);
  const SawtoothWindow& w = p.windows().front();
  int fast = 0;
  for (const Segment& s : p.segments()) {
    const auto* l = std::get_if<Line>(&s.piece);
    if (!l || s.lo < w.z - 1e-12 || s.hi > w.z + w.width + 1e-12) continue;
    if (std::abs(l->slope) >= 2 * n - 1 - 1e-9 && s.hi - s.lo >= w.step - 2 * w.smooth_halfwidth - 1e-12)
      ++fast;
  }
  CHECK(fast >= n);

  const WarpingProfile q = windowed(4, 10.0, n);
  const SawtoothWindow& v = q.windows().front();
  for (const Segment& s : q.segments()) {
    const auto* l = std::get_if<Line>(&s.piece);
    if (!l || s.lo < v.z - 1e-12 || s.hi > v.z + v.width + 1e-12) continue;
    CHECK(std::abs(l->slope) == Approx(v.amplitude / v.step).epsilon(1e-12));
  }
}

TEST_CASE("stationary points sit where sigma' vanishes") {
  const WarpingProfile p = windowed(3, 10.0, 8);
  const auto& e = p.extents().front();
  const auto pts = p.stationary_points_in(e.lo, e.hi);
  // One per tooth corner including both window ends. The lead blends add
  // more: a value blend of two lines overshoots in slope.
  const SawtoothWindow& w = p.windows().front();
  const auto corners =
      p.stationary_points_in(w.z - w.smooth_halfwidth, w.z + w.width + w.smooth_halfwidth);
  CHECK(corners.size() == 17);
  CHECK(pts.size() >= 18);
  const double slope = p.windows().front().amplitude / p.windows().front().step;
  for (double t : pts) CHECK(std::abs(p.eval(t).d1) <= 1e-9 * slope);
  const auto all = p.breakpoints_in(e.lo, e.hi);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(all.size() == p.knots_in(e.lo, e.hi).size() + pts.size());
}

TEST_CASE("knot lookup") {
  const WarpingProfile p = windowed(2, 5.0, 3);
  const auto& knots = p.knots();
  CHECK(std::is_sorted(knots.begin(), knots.end()));
  for (std::size_t i = 0; i < knots.size(); ++i) {
    CHECK(p.segment_index(knots[i]) == i + 1);
    CHECK(p.segments()[i + 1].lo == knots[i]);
  }
  CHECK(p.knots_in(5.0, 6.0).size() > 0);
}

TEST_CASE("evaluation is pure") {
  const WarpingProfile p = windowed(2, 5.0, 50);
  const double a = p.eval(5.37).d1;
  p.eval(900.0);
  p.eval(0.3);
  CHECK(p.eval(5.37).d1 == a);
}

TEST_CASE("overlapping and misplaced windows are rejected") {
  const auto c = ManifoldConfig::make(2);
  const WarpingProfile p = windowed(2, 5.0, 3);
  try {
    insert_sawtooth(p, plan_window(c, 5.5, 3));
    FAIL("expected OverlappingWindow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::overlapping_window);
  }
  try {
    insert_sawtooth(base(2), plan_window(c, 1.0, 3));
    FAIL("expected FootprintOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::footprint_out_of_range);
  }
  const WarpingProfile two = insert_sawtooth(p, plan_window(c, 12.0, 4));
  CHECK(two.windows().size() == 2);
}

TEST_CASE("strip audit") {
  const BoundAudit clean = audit_strip(base(3), 1.0, 100.0, 1000);
  CHECK(clean.overall_pass);
  for (const auto& e : clean.entries) CHECK(e.worst < 0.0);

  for (int m : {2, 3, 5}) {
    const WarpingProfile p = windowed(m, 8.0, 64);
    CHECK(audit_strip(p, 1.0, 20.0, 2000).overall_pass);
    // Dense check at ten times the resolution, independent of the audit.
    const double alpha = p.config().alpha;
    bool inside = true;
    for (int i = 0; i <= 200000; ++i) {
      const double t = 7.0 + 3.0 * i / 200000.0;
      const double v = p.eval(t).v;
      inside = inside && v >= std::pow(t, alpha) * (1 - 1e-12) && v <= std::pow(t + 1, alpha) * (1 + 1e-12);
    }
    CHECK(inside);
  }
}

TEST_CASE("strip audit catches a corrupted piece") {
  const auto c = ManifoldConfig::make(2);
  std::vector<Segment> segs{{0.0, 1.0, Line{0.0, 0.0, 0.9}},
                            {1.0, 2.0, Line{1.0, 0.9, 1.0}},
                            {2.0, std::numeric_limits<double>::infinity(), PowerLaw{0.5, 1.0}}};
  const WarpingProfile p = WarpingProfile::from_segments(c, segs);
  const BoundAudit a = audit_strip(p, 1.0, 2.0, 101);
  CHECK_FALSE(a.overall_pass);
  CHECK(a.entries.front().worst == Approx(0.1).epsilon(1e-12));
  CHECK(a.entries.front().location == 1.0);
}

TEST_CASE("from_segments validates the tiling") {
  const auto c = ManifoldConfig::make(2);
  std::vector<Segment> gap{{0.0, 1.0, Line{0, 0, 1}},
                           {1.5, std::numeric_limits<double>::infinity(), Line{0, 0, 1}}};
  CHECK_THROWS_AS(WarpingProfile::from_segments(c, gap), Error);
}

}
