#include <doctest.h>

#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "czwarp/czops.hpp"
#include "czwarp/errors.hpp"
#include "czwarp/quadrature.hpp"
#include "czwarp/radial_geometry.hpp"
#include "closed_form.hpp"

using namespace czwarp;
using czwarp::testing::honesty_suite;
using czwarp::testing::pi;

TEST_SUITE("quadrature") {

TEST_CASE("x^2 on [0,1] is exact") {
  const QuadResult r = integrate([](double x) { return x * x; }, 0, 1, {});
  CHECK(std::abs(r.value - 1.0 / 3.0) <= 1e-14);
}

TEST_CASE("kink isolated at a breakpoint") {
  const double bp[] = {1.0 / 3.0};
  const QuadResult r = integrate([](double x) { return std::abs(x - 1.0 / 3.0); }, 0, 1, bp);
  CHECK(std::abs(r.value - 5.0 / 18.0) <= 1e-12);
}

TEST_CASE("error estimates are honest on the closed-form suite") {
  const auto suite = honesty_suite();
  REQUIRE(suite.size() == 20);
  for (const auto& c : suite) {
    CAPTURE(c.name);
    const QuadResult r = czwarp::testing::integrate_case(c);
    CHECK(std::abs(r.value - c.truth) <= 10.0 * r.err);
    CHECK(std::abs(r.value - c.truth) <= 1e-9 * std::max(1.0, std::abs(c.truth)));
  }
}

TEST_CASE("graded panels remove an endpoint kink") {
  const double kinks[] = {0.0};
  const auto f = [](double o, double x) { return std::pow(std::abs(o + x), 1.5); };
  const double bp[] = {0.0};
  const QuadResult graded = integrate_local(f, -1, 1, bp, {}, 1, kinks);
  const QuadResult plain = integrate_local(f, -1, 1, bp);
  CHECK(graded.value == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(graded.panels < plain.panels);
}

TEST_CASE("field components share panels and match scalar integration") {
  const FieldIntegrand f = [](double o, double x, double* out) {
    const double t = o + x;
    out[0] = t * t;
    out[1] = std::exp(t);
  };
  const auto r = integrate_fields(f, 2, 0, 2, {});
  REQUIRE(r.size() == 2);
  CHECK(r[0].value == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(r[1].value == doctest::Approx(std::expm1(2.0)).epsilon(1e-14));
}

TEST_CASE("results do not depend on the worker count") {
  std::vector<double> knots;
  for (int i = 1; i < 200; ++i) knots.push_back(i * 0.05);
  const auto f = [](double x) { return std::abs(std::sin(40 * x)) * std::exp(-x); };
  const QuadResult one = integrate(f, 0, 10, knots, {}, 1);
  const QuadResult three = integrate(f, 0, 10, knots, {}, 3);
  CHECK(std::bit_cast<std::uint64_t>(one.value) == std::bit_cast<std::uint64_t>(three.value));
  CHECK(std::bit_cast<std::uint64_t>(one.err) == std::bit_cast<std::uint64_t>(three.err));
  CHECK(one.panels == three.panels);
}

TEST_CASE("sawtooth slope integral matches a tighter reference") {
  const auto base = std::make_shared<const WarpingProfile>(build_base_profile(ManifoldConfig::make(2)));
  const GreenFunction g(base, 300.0);
  const double h = find_h(g, 3.0);
  const WarpingProfile prof =
      insert_sawtooth(*base, plan_window(ManifoldConfig::make(2), h, 1000));
  const NormValue v = slope_integral(prof, h, h + 1, 2.0, {});
  QuadratureSpec tight;
  tight.rel_tol = 1e-13;
  tight.base_order = 32;
  const NormValue ref = slope_integral(prof, h, h + 1, 2.0, tight);
  CHECK(std::abs(v.value - ref.value) <= 1e-9 * ref.value);
}

TEST_CASE("unregistered tooth knots force refinement but still converge") {
  const auto base = std::make_shared<const WarpingProfile>(build_base_profile(ManifoldConfig::make(2)));
  const WarpingProfile prof = insert_sawtooth(*base, plan_window(ManifoldConfig::make(2), 20.0, 1));
  // With several teeth the blind rule can alias on the periodic pattern and
  // stop early, so one tooth is used here.
  const auto f = [&](double t) { return std::pow(std::abs(prof.eval(t).d1), 1.5); };
  const auto knots = prof.knots_in(20, 21);
  const std::vector<double> kv(knots.begin(), knots.end());
  const QuadResult aware = integrate(f, 20, 21, kv);
  const QuadResult blind = integrate(f, 20, 21, {});
  CHECK(blind.panels > aware.panels);
  CHECK(std::abs(blind.value - aware.value) <= blind.err + aware.err + 1e-10 * aware.value);
}

TEST_CASE("an unreachable tolerance raises NotConverged with the panel") {
  QuadratureSpec spec;
  spec.max_depth = 2;
  const auto step = [](double x) { return x < 0.3 ? 0.0 : 1.0; };
  try {
    integrate(step, 0, 1, {}, spec);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK(e.kind() == ErrorKind::not_converged);
    CHECK(e.panel_lo() <= 0.3);
    CHECK(e.panel_hi() >= 0.3);
  }
}

TEST_CASE("invalid inputs are rejected") {
  const auto f = [](double x) { return x; };
  QuadratureSpec bad;
  bad.base_order = 1;
  CHECK_THROWS_AS(integrate(f, 0, 1, {}, bad), Error);
  bad = {};
  bad.rel_tol = 0;
  CHECK_THROWS_AS(integrate(f, 0, 1, {}, bad), Error);
  bad = {};
  bad.max_depth = 0;
  CHECK_THROWS_AS(integrate(f, 0, 1, {}, bad), Error);
  CHECK_THROWS_AS(integrate(f, 1, 0, {}), Error);
  const double outside[] = {2.0};
  CHECK_THROWS_AS(integrate(f, 0, 1, outside), Error);
  const double unsorted[] = {0.6, 0.4};
  CHECK_THROWS_AS(integrate(f, 0, 1, unsorted), Error);
}

TEST_CASE("audit overall flag is the conjunction of entries") {
  BoundAudit a;
  a.add({"x", -1.0, 0.0, 0.0, true});
  CHECK(a.overall_pass);
  BoundAudit b;
  b.add({"y", 1.0, 0.0, 0.0, false});
  a.merge(b);
  CHECK_FALSE(a.overall_pass);
  CHECK(a.entries.size() == 2);
}

}
