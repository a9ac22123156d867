#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "greenlevel/analysis.hpp"

using namespace greenlevel;

TEST_CASE("critical point check") {
  const Lemma1Report r = lemma1_check(GreenParams{});
  CHECK(r.status == CheckStatus::Pass);
  CHECK(r.g_at_1_error <= 1e-12);
  CHECK(r.f1_abs <= 1e-12);
  CHECK(r.f2_abs <= 1e-12);
  CHECK(std::fabs(r.f3_divided_difference - 6.0) <= 1e-6);
  CHECK(r.taylor_max_deviation <= 1e-3);
  CHECK(r.taylor.size() == 24);
}

TEST_CASE("sector geometry") {
  const SectorSpec s{1e-3};
  CHECK(s.r_max() == doctest::Approx(0.05));
  CHECK(SectorSpec::theta_hi() - SectorSpec::theta_lo() == doctest::Approx(std::numbers::pi / 6));
  // pi eps^(2/3) / 48
  CHECK(sector_area(1e-3) == doctest::Approx(std::numbers::pi * 1e-2 / 48.0).epsilon(1e-14));
  CHECK(sector_area(1e-2) == doctest::Approx(3.0379e-3).epsilon(1e-4));
  CHECK(sector_area_enclosure(1e-3).contains(sector_area(1e-3)));
  CHECK(sector_area_enclosure(1e-3).width() < 1e-17);
}

TEST_CASE("sector lies in the band below t0") {
  const GreenParams p;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const SectorReport r = sector_check(eps, 10'000, p);
    CHECK(r.status == CheckStatus::Pass);
    CHECK(r.violations == 0);
    CHECK(r.all_inside_omega);
    CHECK(r.min_offset > -eps);
    CHECK(r.max_offset < 0.0);
    // On the outer arc G - t0 is at most about -sqrt(2) eps / 48.
    CHECK(r.max_offset_at_rmax <= -std::sqrt(2.0) * eps / 48.0 * 0.99);
  }
  CHECK(sector_check(1e-3, 10'000, p, 5).n_samples == sector_check(1e-3, 10'000, p, 5).n_samples);
}

TEST_CASE("empirical eps0") {
  const GreenParams p;
  const auto e = empirical_eps0({0.5, 0.1, 0.01}, 2000, p);
  REQUIRE(e.has_value());
  CHECK(*e >= 0.01);
}

TEST_CASE("band area beats the sector area") {
  const GreenParams p;
  const CorollaryReport r = corollary_check(1e-2, p, AreaSettings{1e-6, 40, 2'000'000});
  CHECK(r.status == CheckStatus::Pass);
  CHECK(r.band.lower >= r.sector.hi());
  CHECK(r.margin > 0.0);
}

TEST_CASE("slope violations straddling t0") {
  const GreenParams p;
  const double t0 = p.critical_value();
  const SlopeReport r = slope_check(t0 - 1e-4, t0 + 0.05, p);
  REQUIRE(r.plain.has_value());
  REQUIRE(r.log.has_value());
  CHECK(r.plain->margin > 0.0);
  CHECK(r.log->margin > 0.0);
  CHECK(r.plain->form == ViolationForm::Slope);
  CHECK(r.a.dArea_dt > r.b.dArea_dt);

  // Away from t0 the profile is convex: no slope violation.
  CHECK_FALSE(slope_violation(-1.0, -0.5, ConvexityKind::Plain, p).has_value());
  CHECK_THROWS(slope_check(-0.05, -0.2, p));
}

TEST_CASE("secant search") {
  const GreenParams p;
  const SecantSearchResult r = secant_violation_search(p, {1e-2, 1e-3}, 0.05, AreaSettings{1e-4});
  REQUIRE_FALSE(r.attempts.empty());
  CHECK(r.tolerance_wall > 0.0);
  REQUIRE(r.log.has_value());
  CHECK(r.log->certified);
  CHECK(r.log->margin > 0.0);
  for (const auto& a : r.attempts) {
    CHECK(a.t1 < a.t2);
    CHECK(a.t2 < a.t3);
    CHECK(a.s1.upper <= a.s2.upper);
  }
}

TEST_CASE("secant search away from t0 finds nothing") {
  const GreenParams p;
  const SecantSearchResult r =
      secant_violation_search(p, {1e-2, 1e-3}, 0.05, AreaSettings{1e-3, 40, 2'000'000}, -0.5);
  CHECK_FALSE(r.plain.has_value());
  CHECK_FALSE(r.log.has_value());
  CHECK(r.best_plain_margin < 0.0);
}

TEST_CASE("Monte Carlo chord margin") {
  const GreenParams p;
  const double t0 = p.critical_value();
  const MonteCarloMargin a =
      monte_carlo_chord_margin(ConvexityKind::Log, t0 - 1e-2, t0, t0 + 0.05, 1'000'000, 3, p, 1);
  const MonteCarloMargin b =
      monte_carlo_chord_margin(ConvexityKind::Log, t0 - 1e-2, t0, t0 + 0.05, 1'000'000, 3, p, 2);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ > 0.0);
  CHECK(a.estimate > 0.0);
}

TEST_CASE("status names") {
  CHECK(to_string(CheckStatus::Inconclusive) == "inconclusive");
  CHECK(to_string(ConvexityKind::Log) == "log");
  CHECK(to_string(ViolationForm::Secant) == "secant");
}
