#pragma once

// End-to-end checks of the counterexample:
//  - the degenerate critical point at w = 1 (G - G(1) is cubic there),
//  - the sector S_eps = {1 + r e^{i theta} : r < eps^{1/3}/2, |theta - pi| < pi/12}
//    lies in the band {-eps < G - G(1) < 0},
//  - the band area beats the sector area pi eps^{2/3} / 48,
//  - s(t) = area{G < t} and log s(t) are not convex.
//
// Every outcome is Pass, Fail or Inconclusive; Inconclusive means the
// numerics could not separate the two sides, never that the claim failed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "greenlevel/green.hpp"
#include "greenlevel/level_trace.hpp"
#include "greenlevel/region_area.hpp"

namespace greenlevel {

enum class CheckStatus { Pass, Fail, Inconclusive };
std::string to_string(CheckStatus s);

// Quadtree settings shared by every check that needs certified areas.
struct AreaSettings {
  double tol = 1e-5;
  int max_depth = 40;
  std::uint64_t cell_budget = 20'000'000;
  int threads = 1;
};

// --- critical point -------------------------------------------------------

struct TaylorSample {
  double theta = 0.0;
  double rho = 0.0;
  double ratio = 0.0;     // (G(1 + rho e^{i theta}) - G(1)) / rho^3
  double expected = 0.0;  // cos(3 theta) / 3
};

struct Lemma1Report {
  CheckStatus status = CheckStatus::Fail;
  double g_at_1 = 0.0;
  double g_at_1_error = 0.0;  // |G(1) - t0|
  std::vector<CriticalPoint> critical;
  double critical_location_error = 0.0;
  double f1_abs = 0.0;  // |f'(1)|
  double f2_abs = 0.0;  // |f''(1)|
  double f3_divided_difference = 0.0;
  std::vector<TaylorSample> taylor;
  double taylor_max_deviation = 0.0;  // max |ratio - expected| at the smallest rho
  double taylor_constant = 0.0;       // empirical K in |ratio - expected| <= K rho
};
Lemma1Report lemma1_check(const GreenParams& p);

// --- sector ---------------------------------------------------------------

struct SectorSpec {
  double eps = 0.0;
  double r_max() const;
  static double theta_lo();
  static double theta_hi();
  double area() const;
};

// pi (eps^{1/3}/2)^2 / 12 = pi eps^{2/3} / 48.
double sector_area(double eps);
ScalarInterval sector_area_enclosure(double eps);

struct SectorReport {
  double eps = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  CheckStatus status = CheckStatus::Fail;
  double min_offset = 0.0;          // min of G - G(1); must stay above -eps
  double max_offset = 0.0;          // max of G - G(1); must stay below 0
  double max_offset_at_rmax = 0.0;  // max over the outer arc r = r_max
  std::uint64_t violations = 0;
  bool all_inside_omega = true;
};
// Stratified samples in (r^2, theta), plus the extreme corners of the sector.
SectorReport sector_check(double eps, std::uint64_t n_samples, const GreenParams& p,
                          std::uint64_t seed = 0);

// Largest eps in a decreasing list for which sector_check passes.
std::optional<double> empirical_eps0(const std::vector<double>& eps_list, std::uint64_t n_samples,
                                     const GreenParams& p, std::uint64_t seed = 0);

// --- band area ------------------------------------------------------------

struct CorollaryReport {
  double eps = 0.0;
  CheckStatus status = CheckStatus::Fail;
  CertifiedArea band;          // area{t0 - eps < G < t0}
  ScalarInterval sector;       // enclosure of pi eps^{2/3} / 48
  double margin = 0.0;         // band.lower - sector.hi
};
CorollaryReport corollary_check(double eps, const GreenParams& p, const AreaSettings& s = {1e-6});

// --- non-convexity --------------------------------------------------------

enum class ConvexityKind { Plain, Log };
enum class ViolationForm { Slope, Secant };
std::string to_string(ConvexityKind k);
std::string to_string(ViolationForm f);

// A triple t1 < t2 < t3 at which convexity fails. Secant form: lhs is
// (a lower bound for) the function at t2 and rhs (an upper bound for) the
// chord through t1 and t3. Slope form: lhs bounds the derivative at t1 from
// below and rhs the derivative at t3 from above; t2 is their midpoint.
struct ConvexityViolation {
  ConvexityKind kind = ConvexityKind::Plain;
  ViolationForm form = ViolationForm::Secant;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool certified = false;
};

struct SlopeReport {
  double t_a = 0.0;
  double t_b = 0.0;
  LevelMeasure a;
  LevelMeasure b;
  double plain_margin = 0.0;
  double log_margin = 0.0;
  std::optional<ConvexityViolation> plain;
  std::optional<ConvexityViolation> log;
};
// Convexity forces s'(t_a) <= s'(t_b) for t_a < t_b; both kinds are tested
// with three times the step-halving error estimates subtracted.
SlopeReport slope_check(double t_a, double t_b, const GreenParams& p, const TraceOptions& opts = {});
std::optional<ConvexityViolation> slope_violation(double t_a, double t_b, ConvexityKind kind,
                                                  const GreenParams& p,
                                                  const TraceOptions& opts = {});

struct SecantAttempt {
  double eps = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  CertifiedArea s1;
  CertifiedArea s2;
  CertifiedArea s3;
  double plain_margin = 0.0;
  double log_margin = 0.0;
};

struct SecantSearchResult {
  double delta = 0.0;
  std::vector<SecantAttempt> attempts;
  std::optional<ConvexityViolation> plain;
  std::optional<ConvexityViolation> log;
  double best_plain_margin = 0.0;
  double best_log_margin = 0.0;
  // Largest certified-interval width among the attempts; margins smaller
  // than this cannot be resolved at the configured tolerance.
  double tolerance_wall = 0.0;
};
// Tests the chord through t1 = c - eps and t3 = c + delta at t2 = c using
// certified areas, for each eps in turn, where c = t0 unless a center is
// given. Stops at the first eps certifying both kinds.
SecantSearchResult secant_violation_search(const GreenParams& p, const std::vector<double>& eps_list,
                                           double delta, const AreaSettings& s = {1e-3},
                                           std::optional<double> center = std::nullopt);

// Monte Carlo estimate of the chord margin (plain: s2 - chord; log: log s2 -
// chord of log s) with its standard error, from one shared sample.
struct MonteCarloMargin {
  double estimate = 0.0;
  double stderr_ = 0.0;
};
MonteCarloMargin monte_carlo_chord_margin(ConvexityKind kind, double t1, double t2, double t3,
                                          std::uint64_t n, std::uint64_t seed, const GreenParams& p,
                                          int threads = 1);

}  // namespace greenlevel
