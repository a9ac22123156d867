#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "greenlevel/level_trace.hpp"
#include "greenlevel/region_area.hpp"

using namespace greenlevel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CertifiedArea sublevel(double t, double tol, std::uint64_t budget = 2'000'000, int threads = 1) {
  const GreenParams p;
  auto q = AreaQuery::sublevel(Level::exact(t), certified_box(p), tol);
  q.cell_budget = budget;
  q.threads = threads;
  return certified_area(q, p);
}

}  // namespace

TEST_CASE("verified bounding box") {
  const BboxCertificate c = verified_bbox(GreenParams{});
  CHECK(c.box.x.lo() == -6.0);
  CHECK(c.box.x.hi() == 6.0);
  CHECK(c.min_lower_bound > 0.0);
  CHECK(c.tiles > 0);
  // G(-5) < 0, so a frame reaching in to |x| = 5 could not be certified.
  CHECK(c.frame_inner > 5.0);
  CHECK(certified_box(GreenParams{}).area() == 144.0);
}

TEST_CASE("classify_cell on simple boxes") {
  const GreenParams p;
  const PlaneBox near_pole{ScalarInterval(-0.01, 0.01), ScalarInterval(-0.01, 0.01)};
  CHECK(classify_cell(near_pole, -kInf, -1.0, p) == CellClass::Inside);
  const PlaneBox far{ScalarInterval(5.8, 5.9), ScalarInterval(5.8, 5.9)};
  CHECK(classify_cell(far, -kInf, 0.0, p) == CellClass::Outside);
  const PlaneBox across{ScalarInterval(-0.5, 0.5), ScalarInterval(-0.5, 0.5)};
  CHECK(classify_cell(across, -kInf, -1.0, p) == CellClass::Boundary);
  // Band excludes the pole neighbourhood.
  CHECK(classify_cell(near_pole, -2.0, -1.0, p) == CellClass::Outside);
  CHECK_THROWS_AS(classify_cell(near_pole, -1.0, -2.0, p), std::invalid_argument);
}

TEST_CASE("Inside and Outside cells are sound") {
  const GreenParams p;
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> c(-6.0, 6.0);
  std::uniform_real_distribution<double> s(1e-4, 0.3);
  std::uniform_real_distribution<double> f(0.0, 1.0);
  std::uniform_real_distribution<double> lv(-1.0, -0.01);
  int decided = 0;
  for (int i = 0; i < 20'000; ++i) {
    const double x0 = c(rng), y0 = c(rng), w = s(rng);
    const double t_hi = lv(rng);
    const double t_lo = (i % 2 == 0) ? -std::numeric_limits<double>::infinity() : t_hi - 0.2;
    const PlaneBox box{ScalarInterval(x0, x0 + w), ScalarInterval(y0, y0 + w)};
    const CellClass cls = classify_cell(box, t_lo, t_hi, p);
    if (cls == CellClass::Boundary) continue;
    ++decided;
    for (int k = 0; k < 8; ++k) {
      const double g = eval_G({x0 + f(rng) * w, y0 + f(rng) * w}, p);
      const bool in_band = g > t_lo && g < t_hi;
      REQUIRE(in_band == (cls == CellClass::Inside));
    }
  }
  CHECK(decided > 10'000);
}

TEST_CASE("cells at the critical point resolve with the offset form") {
  const GreenParams p;
  const Level t0 = Level::critical(p);
  const LevelThreshold hi = LevelThreshold::from(t0, p);
  // G - t0 ~ (1/3) rho^3 cos 3 theta: negative along theta = pi.
  const double rho = 1e-3;
  const double h = rho / 16;
  const PlaneBox left{ScalarInterval(1 - rho - h, 1 - rho + h), ScalarInterval(-h, h)};
  const PlaneBox right{ScalarInterval(1 + rho - h, 1 + rho + h), ScalarInterval(-h, h)};
  CHECK(classify_cell(left, std::nullopt, hi) == CellClass::Inside);
  CHECK(classify_cell(right, std::nullopt, hi) == CellClass::Outside);
}

TEST_CASE("small sublevel sets are discs around the pole") {
  // G = log|w| + t0 + O(|w|), so s(t) ~ pi exp(2(t - t0)).
  const CertifiedArea a = sublevel(-4.0, 1e-6);
  const double disc = std::numbers::pi * std::exp(2.0 * (-4.0 + 1.0 / 9.0));
  CHECK(a.tolerance_met());
  CHECK(a.lower <= a.upper);
  CHECK(a.mid() == doctest::Approx(disc).epsilon(0.01));
}

TEST_CASE("certified interval contains the traced area") {
  const GreenParams p;
  for (double t : {-1.0, -0.3, -0.05}) {
    const CertifiedArea a = sublevel(t, 1e-4);
    const LevelMeasure m = level_measure(t, p);
    CHECK(a.lower <= m.area);
    CHECK(m.area <= a.upper);
  }
}

TEST_CASE("sublevel areas are monotone") {
  double prev_lower = 0.0;
  for (double t : {-2.0, -1.0, -0.5, -0.2, -0.05}) {
    const CertifiedArea a = sublevel(t, 1e-3, 500'000);
    CHECK(a.upper >= prev_lower);
    prev_lower = a.lower;
  }
}

TEST_CASE("band area equals the difference of sublevel areas") {
  const GreenParams p;
  const PlaneBox box = certified_box(p);
  auto band = AreaQuery::band(Level::exact(-0.5), Level::exact(-0.2), box, 1e-3);
  band.cell_budget = 2'000'000;
  const CertifiedArea b = certified_area(band, p);
  const CertifiedArea lo = sublevel(-0.5, 1e-3);
  const CertifiedArea hi = sublevel(-0.2, 1e-3);
  CHECK(b.lower <= hi.upper - lo.lower);
  CHECK(b.upper >= hi.lower - lo.upper);
}

TEST_CASE("termination order and flags") {
  const CertifiedArea budget = sublevel(-0.2, 1e-9, 100'000);
  CHECK(budget.termination == Termination::BudgetExhausted);
  CHECK(budget.cells_processed <= 100'000);
  CHECK(budget.certified);
  CHECK(budget.lower < budget.upper);

  const GreenParams p;
  auto shallow = AreaQuery::sublevel(Level::exact(-0.2), certified_box(p), 1e-9);
  shallow.max_depth = 4;
  const CertifiedArea d = certified_area(shallow, p);
  CHECK(d.termination == Termination::DepthExhausted);
  CHECK(d.max_depth_reached == 4);

  auto bad = shallow;
  bad.tol = 0.0;
  CHECK_THROWS_AS(certified_area(bad, p), std::invalid_argument);
  CHECK(to_string(Termination::ToleranceMet) == "tolerance-met");
}

TEST_CASE("thread count does not change the result") {
  const CertifiedArea a = sublevel(-0.3, 1e-3, 1'000'000, 1);
  const CertifiedArea b = sublevel(-0.3, 1e-3, 1'000'000, 4);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.cells_processed == b.cells_processed);
}

TEST_CASE("Monte Carlo estimates") {
  const GreenParams p;
  const MonteCarloEstimate a = monte_carlo_area(-std::numeric_limits<double>::infinity(), -0.5,
                                                1'000'000, 42, p, 1);
  const MonteCarloEstimate b = monte_carlo_area(-std::numeric_limits<double>::infinity(), -0.5,
                                                1'000'000, 42, p, 3);
  CHECK(a.estimate == b.estimate);
  CHECK(a.hits == b.hits);
  const LevelMeasure m = level_measure(-0.5, p);
  CHECK(std::fabs(a.estimate - m.area) <= 4.0 * a.stderr_);

  const auto counts = monte_carlo_counts({-1.0, -0.5, -0.2}, 100'000, 1, p);
  REQUIRE(counts.size() == 3);
  CHECK(counts[0] <= counts[1]);
  CHECK(counts[1] <= counts[2]);
  CHECK_THROWS_AS(monte_carlo_counts({-0.5, -1.0}, 100'000, 1, p), std::invalid_argument);
}
