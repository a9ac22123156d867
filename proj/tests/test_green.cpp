#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "greenlevel/green.hpp"

using namespace greenlevel;

namespace {

// Direct evaluation in long double, independent of the library's branches.
long double reference_G(long double x, long double y, long double log_r) {
  const std::complex<long double> w(x, y);
  const std::complex<long double> q = 3.0L * w * w - 3.0L * w + 1.0L;
  return std::log(std::abs(w * w * w / q)) / 3.0L + log_r / 3.0L;
}

}  // namespace

TEST_CASE("closed-form values") {
  const GreenParams p;
  CHECK(eval_G({1.0, 0.0}, p) == doctest::Approx(-1.0 / 9.0).epsilon(1e-15));
  CHECK(eval_G({0.5, 0.0}, p) == doctest::Approx(std::log(0.5) / 3.0 - 1.0 / 9.0).epsilon(1e-14));
  CHECK(eval_G({0.0, 0.0}, p) == -std::numeric_limits<double>::infinity());
  // q has roots 1/2 +- i sqrt(3)/6; G is +inf there.
  CHECK(eval_G({0.5, std::sqrt(3.0) / 6.0}, p) == std::numeric_limits<double>::infinity());
  CHECK(eval_G({-5.0, 0.0}, p) == doctest::Approx(-0.0052930341826).epsilon(1e-9));
  CHECK(eval_G({-6.0, 0.0}, p) == doctest::Approx(0.0659193292974).epsilon(1e-9));
  CHECK(eval_G({3.0, 0.0}, p) == doctest::Approx(0.00602151783485).epsilon(1e-9));
  CHECK(eval_G({2.9, 0.0}, p) == doctest::Approx(-0.00103827376306).epsilon(1e-9));
}

TEST_CASE("eval_G agrees with a long double reference") {
  const GreenParams p;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 10'000; ++i) {
    const double x = u(rng), y = u(rng);
    const long double ref = reference_G(x, y, -1.0L / 3.0L);
    REQUIRE(eval_G({x, y}, p) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("radius parameter") {
  CHECK_THROWS_AS(GreenParams::with_radius(0.0), std::invalid_argument);
  CHECK_THROWS_AS(GreenParams::with_radius(1.0), std::invalid_argument);
  const GreenParams p = GreenParams::with_radius(0.5);
  CHECK_FALSE(p.is_default());
  CHECK(p.critical_value() == doctest::Approx(std::log(0.5) / 3.0));
  CHECK(eval_G({1.0, 0.0}, p) == doctest::Approx(std::log(0.5) / 3.0));
  CHECK(GreenParams{}.critical_value_enclosure().contains(-1.0 / 9.0));
}

TEST_CASE("f' closed form at i") {
  const FDerivatives d = eval_f_derivs({0.0, 1.0});
  CHECK(d.first.real() == doctest::Approx(12.0 / 13.0).epsilon(1e-14));
  CHECK(d.first.imag() == doctest::Approx(-18.0 / 13.0).epsilon(1e-14));
  CHECK_THROWS_AS(eval_f_derivs({0.0, 0.0}), SingularInput);
  CHECK_THROWS_AS(eval_f_derivs({0.5, std::sqrt(3.0) / 6.0}), SingularInput);
}

TEST_CASE("gradient matches central differences") {
  const GreenParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double h = 1e-6;
  int tested = 0;
  while (tested < 1000) {
    const double x = u(rng), y = u(rng);
    if (std::hypot(x, y) < 0.1) continue;
    const std::complex<double> w(x, y);
    if (std::abs(3.0 * w * w - 3.0 * w + 1.0) < 0.1) continue;
    ++tested;
    const Gradient g = eval_gradient({x, y});
    const double dx = (eval_G({x + h, y}, p) - eval_G({x - h, y}, p)) / (2 * h);
    const double dy = (eval_G({x, y + h}, p) - eval_G({x, y - h}, p)) / (2 * h);
    REQUIRE(g.dx == doctest::Approx(dx).epsilon(1e-6).scale(1.0));
    REQUIRE(g.dy == doctest::Approx(dy).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("f'' matches differences of f'") {
  const double h = 1e-6;
  for (const Complex w : {Complex(0.3, 0.7), Complex(-1.2, 0.4), Complex(2.0, -1.0)}) {
    const Complex d = (eval_f_derivs({w.real() + h, w.imag()}).first -
                       eval_f_derivs({w.real() - h, w.imag()}).first) / (2 * h);
    const Complex f2 = eval_f_derivs({w.real(), w.imag()}).second;
    CHECK(std::abs(f2 - d) < 1e-6 * (1.0 + std::abs(f2)));
  }
}

TEST_CASE("conjugation symmetry") {
  const GreenParams p;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 10'000; ++i) {
    const ComplexPoint w{u(rng), u(rng)};
    REQUIRE(eval_G(w, p) == eval_G(w.conj(), p));
    const Gradient a = eval_gradient(w);
    const Gradient b = eval_gradient(w.conj());
    REQUIRE(a.dx == b.dx);
    REQUIRE(a.dy == -b.dy);
  }
}

TEST_CASE("offset form near the critical point") {
  const GreenParams p;
  for (double rho : {1e-2, 1e-4, 1e-6}) {
    for (double th : {0.0, 1.0, 2.0, std::numbers::pi}) {
      const ComplexPoint w{1.0 + rho * std::cos(th), rho * std::sin(th)};
      const double expected = std::pow(rho, 3) * std::cos(3 * th) / 3.0;
      // next Taylor term is O(rho^4)
      CHECK(eval_G_offset(w) == doctest::Approx(expected).epsilon(10 * rho).scale(1e-300));
    }
  }
}

TEST_CASE("critical points: a single double root at 1") {
  const auto cps = critical_points(GreenParams{});
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].multiplicity == 2);
  CHECK(std::hypot(cps[0].point.re - 1.0, cps[0].point.im) <= 1e-10);
  const FDerivatives d = eval_f_derivs({1.0, 0.0});
  CHECK(std::abs(d.first) == 0.0);
  CHECK(std::abs(d.second) == 0.0);
}

TEST_CASE("Taylor ratio tends to cos(3 theta)/3") {
  const GreenParams p;
  for (double th : {0.0, std::numbers::pi / 6, std::numbers::pi / 2, std::numbers::pi}) {
    CHECK(taylor_ratio(1e-4, th, p) == doctest::Approx(std::cos(3 * th) / 3.0).epsilon(1e-3).scale(1.0));
  }
  CHECK_THROWS_AS(taylor_ratio(0.0, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(taylor_ratio(0.6, 0.0, p), std::invalid_argument);
}

TEST_CASE("interval extension encloses point values") {
  const GreenParams p;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-6.0, 6.0);
  std::uniform_real_distribution<double> s(1e-6, 0.5);
  std::uniform_real_distribution<double> f(0.0, 1.0);
  for (int i = 0; i < 100'000; ++i) {
    const double x0 = c(rng), y0 = c(rng), wdt = s(rng), hgt = s(rng);
    const PlaneBox box{ScalarInterval(x0, x0 + wdt), ScalarInterval(y0, y0 + hgt)};
    const ScalarInterval g = eval_G_interval(box, p);
    const double x = x0 + f(rng) * wdt;
    const double y = y0 + f(rng) * hgt;
    const double v = eval_G({x, y}, p);
    if (std::isinf(v)) continue;
    REQUIRE(g.lo() <= v + 1e-12);
    REQUIRE(v - 1e-12 <= g.hi());
  }
}

TEST_CASE("offset-form enclosure contains point values") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> c(0.5, 1.5);
  std::uniform_real_distribution<double> s(1e-8, 0.05);
  std::uniform_real_distribution<double> f(0.0, 1.0);
  for (int i = 0; i < 100'000; ++i) {
    const double x0 = c(rng), y0 = c(rng) - 1.0, wdt = s(rng), hgt = s(rng);
    const PlaneBox box{ScalarInterval(x0, x0 + wdt), ScalarInterval(y0, y0 + hgt)};
    const ScalarInterval d = enclose_offset_form(box);
    const long double x = x0 + f(rng) * wdt;
    const long double y = y0 + f(rng) * hgt;
    const std::complex<long double> w(x, y);
    const std::complex<long double> q = 3.0L * w * w - 3.0L * w + 1.0L;
    const long double ref = std::norm(q) / std::pow(std::norm(w), 3.0L) - 1.0L;
    REQUIRE(d.lo() <= ref + 1e-15);
    REQUIRE(ref - 1e-15 <= d.hi());
  }
  CHECK_THROWS_AS(enclose_offset_form({ScalarInterval(-0.1, 0.1), ScalarInterval(-0.1, 0.1)}),
                  std::invalid_argument);
}

TEST_CASE("membership") {
  const GreenParams p;
  CHECK(membership({1.0, 0.0}, p, 1e-9) == Membership::Inside);
  CHECK(membership({0.0, 0.0}, p, 1e-9) == Membership::Inside);
  CHECK(membership({3.0, 0.0}, p, 1e-9) == Membership::Outside);
  CHECK(membership({0.5, std::sqrt(3.0) / 6.0}, p, 1e-9) == Membership::Outside);
  CHECK(to_string(Membership::NearBoundary) == "near-boundary");
}

TEST_CASE("construction chain agrees with the sign of G") {
  const GreenParams p;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  int n = 0;
  while (n < 10'000) {
    const ComplexPoint w{u(rng), u(rng)};
    const Membership m = membership(w, p, 1e-9);
    if (m == Membership::NearBoundary) continue;
    ++n;
    const ChainResult c = construction_chain(w, p);
    REQUIRE(c.agree());
    REQUIRE(c.in_omega4 == (m == Membership::Inside));
  }
  const ChainResult pole = construction_chain({0.0, 0.0}, p);
  CHECK(pole.pole);
  CHECK(pole.agree());
}
