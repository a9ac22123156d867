#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "greenlevel/report.hpp"

using namespace greenlevel;

TEST_CASE("numbers are written with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-1.0 / 9.0) == "-0.1111111111111111");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");

  const Json j{{"a", 0.1}, {"b", -std::numeric_limits<double>::infinity()}, {"c", 3}, {"d", "x"}};
  CHECK(dump_json(j, -1) == R"({"a":0.10000000000000001,"b":"-inf","c":3,"d":"x"})");
  const Json back = Json::parse(dump_json(j));
  CHECK(back["a"].get<double>() == 0.1);
}

TEST_CASE("complex number syntax") {
  auto check = [](const char* s, double re, double im) {
    const auto w = parse_complex(s);
    REQUIRE(w.has_value());
    CHECK(w->re == re);
    CHECK(w->im == im);
  };
  check("1+0i", 1.0, 0.0);
  check("-0.5-2i", -0.5, -2.0);
  check("+3", 3.0, 0.0);
  check("2i", 0.0, 2.0);
  check("-i", 0.0, -1.0);
  check("1e-3+2.5e1i", 1e-3, 25.0);
  check("0+0i", 0.0, 0.0);
  for (const char* bad : {"", "i1", "1 + 2i", "1+2", "abc", "1+2j", "1++2i"})
    CHECK_FALSE(parse_complex(bad).has_value());
}

TEST_CASE("level syntax") {
  const GreenParams p;
  const auto t0 = parse_level("t0", p);
  REQUIRE(t0.has_value());
  CHECK(t0->t.contains(-1.0 / 9.0));
  CHECK(t0->t.lo() < t0->t.hi());
  const auto off = parse_level("t0-1e-3", p);
  REQUIRE(off.has_value());
  CHECK(off->value() == doctest::Approx(-1.0 / 9.0 - 1e-3).epsilon(1e-15));
  CHECK(parse_level("-0.2", p)->value() == -0.2);
  CHECK_FALSE(parse_level("t1", p).has_value());
  CHECK_FALSE(parse_level("t0*2", p).has_value());
  CHECK_FALSE(parse_level("-0.2x", p).has_value());
}

TEST_CASE("CSV schema") {
  CHECK(csv_header() == "t,area_lower,area_upper,area_est,ds_dt,n_components,engine");
  CHECK(csv_row({-0.5, {}, {}, 4.0, 2.5, 1, "trace"}) == "-0.5,,,4,2.5,1,trace");
  CHECK(csv_row({-0.5, 1.0, 2.0, 1.5, {}, {}, "quadtree"}) == "-0.5,1,2,1.5,,,quadtree");
}

TEST_CASE("verify targets and exit codes") {
  CHECK(parse_verify_target("lemma2") == VerifyTarget::Lemma2);
  CHECK_FALSE(parse_verify_target("lemma3").has_value());
  CHECK(exit_code(CheckStatus::Pass) == 0);
  CHECK(exit_code(CheckStatus::Fail) == 2);
  CHECK(exit_code(CheckStatus::Inconclusive) == 3);
}

TEST_CASE("reports embed the configuration") {
  RunConfig cfg;
  cfg.seed = 9;
  const Json rep = run_verify(VerifyTarget::Lemma1, cfg);
  CHECK(rep["check"] == "lemma1");
  CHECK(rep["status"] == "pass");
  CHECK(rep["config"]["seed"] == 9);
  CHECK(rep["config"]["r_expr"] == "exp(-1/3)");
  CHECK(rep.contains("margins"));
  CHECK_FALSE(rep.contains("wall_clock_s"));
  CHECK(status_of(rep) == CheckStatus::Pass);

  cfg.threads = 4;
  CHECK(dump_json(run_verify(VerifyTarget::Lemma2, cfg)) ==
        dump_json(run_verify(VerifyTarget::Lemma2, RunConfig{.seed = 9})));
}
