#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "greenlevel/level_trace.hpp"

using namespace greenlevel;

TEST_CASE("seeds lie on the level curve") {
  const GreenParams p;
  for (double t : {-3.0, -0.5, -0.05}) {
    const auto seeds = find_seeds(t, 256, p);
    REQUIRE_FALSE(seeds.empty());
    for (const auto& s : seeds) CHECK(std::fabs(eval_G(s, p) - t) <= 1e-12);
  }
  CHECK_THROWS_AS(find_seeds(0.5, 256, p), std::invalid_argument);
  CHECK_THROWS_AS(find_seeds(-0.5, 8, p), std::invalid_argument);
}

TEST_CASE("traced vertices satisfy the on-curve tolerance") {
  const GreenParams p;
  const TraceOptions o;
  const LevelMeasure m = level_measure(-0.3, p, o);
  REQUIRE(m.n_components == m.components.size());
  for (const auto& c : m.components) {
    CHECK(c.closed);
    REQUIRE(c.vertices.size() >= 10);
    CHECK(std::hypot(c.vertices.front().re - c.vertices.back().re,
                     c.vertices.front().im - c.vertices.back().im) <= o.closure_tol);
    for (const auto& v : c.vertices) REQUIRE(std::fabs(eval_G(v, p) - (-0.3)) <= o.tau_on);
    CHECK(c.min_grad > o.grad_min);
  }
}

TEST_CASE("small levels are circles around the pole") {
  const GreenParams p;
  const double t = -5.0;
  const LevelMeasure m = level_measure(t, p);
  const double radius = std::exp(t + 1.0 / 9.0);
  CHECK(m.n_components == 1);
  CHECK(m.area == doctest::Approx(std::numbers::pi * radius * radius).epsilon(1e-3));
  // On a circle |grad G| ~ 1/radius, so the co-area integral is ~ 2 pi radius^2.
  CHECK(m.dArea_dt == doctest::Approx(2.0 * std::numbers::pi * radius * radius).epsilon(1e-3));
  CHECK(m.components[0].arclength == doctest::Approx(2.0 * std::numbers::pi * radius).epsilon(1e-3));
}

TEST_CASE("orientation keeps the sublevel set on the left") {
  const GreenParams p;
  const LevelMeasure m = level_measure(-0.5, p);
  REQUIRE(m.n_components == 1);
  CHECK(m.components[0].signed_area > 0.0);
}

TEST_CASE("topology changes at the critical value") {
  const GreenParams p;
  CHECK(level_measure(-0.05, p).n_components == 3);
  CHECK(level_measure(-0.11, p).n_components == 3);
  CHECK(level_measure(-0.12, p).n_components == 1);
  CHECK(level_measure(-0.5, p).n_components == 1);
}

TEST_CASE("dArea/dt matches differences of the area") {
  const GreenParams p;
  const double h = 1e-5;
  for (double t : {-2.0, -0.5, -0.2, -0.05}) {
    const LevelMeasure m = level_measure(t, p);
    const double fd = (level_measure(t + h, p).area - level_measure(t - h, p).area) / (2 * h);
    CHECK(m.dArea_dt == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("error estimates are small away from the critical point") {
  const GreenParams p;
  const LevelMeasure m = level_measure(-0.3, p);
  CHECK(m.error_estimate < 1e-6);
  CHECK(m.slope_error_estimate < 1e-3 * m.dArea_dt);
}

TEST_CASE("near-critical levels are refused") {
  const GreenParams p;
  try {
    level_measure(p.critical_value(), p);
    FAIL("expected a near-critical error");
  } catch (const TraceError& e) {
    CHECK(e.kind() == TraceErrorKind::NearCritical);
  }
  CHECK(to_string(TraceErrorKind::NearCritical) == "near-critical");
  CHECK_THROWS_AS(level_measure(0.1, p), std::invalid_argument);
}

TEST_CASE("area profile records failures and keeps going") {
  const GreenParams p;
  const auto prof = area_profile({-1.0, p.critical_value(), -0.05}, p);
  REQUIRE(prof.size() == 3);
  CHECK(prof[0].measure.has_value());
  CHECK_FALSE(prof[1].measure.has_value());
  CHECK_FALSE(prof[1].error.empty());
  CHECK(prof[2].measure.has_value());
  CHECK(prof[0].measure->area < prof[2].measure->area);
}

TEST_CASE("profile is independent of the thread count") {
  const GreenParams p;
  TraceOptions one, four;
  four.threads = 4;
  const std::vector<double> ts = {-1.5, -0.7, -0.3, -0.08};
  const auto a = area_profile(ts, p, one);
  const auto b = area_profile(ts, p, four);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(a[i].measure->area == b[i].measure->area);
    CHECK(a[i].measure->dArea_dt == b[i].measure->dArea_dt);
  }
}
