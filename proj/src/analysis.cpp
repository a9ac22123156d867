#include "greenlevel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "greenlevel/rigorous.hpp"

namespace greenlevel {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(ConvexityKind k) { return k == ConvexityKind::Plain ? "plain" : "log"; }
std::string to_string(ViolationForm f) { return f == ViolationForm::Slope ? "slope" : "secant"; }

// --- critical point -------------------------------------------------------

Lemma1Report lemma1_check(const GreenParams& p) {
  Lemma1Report rep;
  const ComplexPoint one{1.0, 0.0};
  rep.g_at_1 = eval_G(one, p);
  rep.g_at_1_error = std::fabs(rep.g_at_1 - p.critical_value());

  rep.critical = critical_points(p);
  const bool single_double =
      rep.critical.size() == 1 && rep.critical.front().multiplicity == 2;
  rep.critical_location_error =
      rep.critical.empty() ? INFINITY : std::abs(rep.critical.front().point.value() - 1.0);

  const FDerivatives d = eval_f_derivs(one);
  rep.f1_abs = std::abs(d.first);
  rep.f2_abs = std::abs(d.second);

  // f''' from the second divided difference of f'; truncation error ~60 h^2.
  const double h = 1e-5;
  const Complex fp_plus = eval_f_derivs({1.0 + h, 0.0}).first;
  const Complex fp_minus = eval_f_derivs({1.0 - h, 0.0}).first;
  rep.f3_divided_difference = ((fp_plus - 2.0 * d.first + fp_minus) / (h * h)).real();

  const double pi = std::numbers::pi;
  const double thetas[] = {0.0, pi / 6, pi / 3, pi / 2, 2 * pi / 3, pi, 11 * pi / 12, 13 * pi / 12};
  const double rhos[] = {1e-2, 1e-3, 1e-4};
  for (double rho : rhos) {
    for (double th : thetas) {
      TaylorSample s{th, rho, taylor_ratio(rho, th, p), std::cos(3.0 * th) / 3.0};
      const double dev = std::fabs(s.ratio - s.expected);
      rep.taylor_constant = std::max(rep.taylor_constant, dev / rho);
      if (rho == rhos[2]) rep.taylor_max_deviation = std::max(rep.taylor_max_deviation, dev);
      rep.taylor.push_back(s);
    }
  }

  const bool ok = rep.g_at_1_error <= 1e-12 && single_double &&
                  rep.critical_location_error <= 1e-10 && rep.f1_abs <= 1e-12 &&
                  rep.f2_abs <= 1e-12 && std::fabs(rep.f3_divided_difference - 6.0) <= 1e-6 &&
                  rep.taylor_max_deviation <= 1e-3;
  rep.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

// --- sector ---------------------------------------------------------------

double SectorSpec::r_max() const { return std::cbrt(eps) / 2.0; }
double SectorSpec::theta_lo() { return 11.0 * std::numbers::pi / 12.0; }
double SectorSpec::theta_hi() { return 13.0 * std::numbers::pi / 12.0; }
double SectorSpec::area() const { return sector_area(eps); }

double sector_area(double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("sector needs eps >= 0");
  const double half_r = std::cbrt(eps) / 2.0;
  return std::numbers::pi * half_r * half_r / 12.0;
}

ScalarInterval sector_area_enclosure(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("sector needs eps > 0");
  return rigorous::pi() * rigorous::pow_two_thirds(eps) * rigorous::rational(1, 48);
}

SectorReport sector_check(double eps, std::uint64_t n_samples, const GreenParams& p,
                          std::uint64_t seed) {
  if (!(eps > 0.0)) throw std::invalid_argument("sector_check needs eps > 0");
  if (!p.is_default())
    throw std::invalid_argument("sector_check is stated for the default radius e^(-1/3)");
  if (n_samples == 0) throw std::invalid_argument("sector_check needs samples");

  const SectorSpec spec{eps};
  const double r_max = spec.r_max();
  const double th_lo = SectorSpec::theta_lo();
  const double th_hi = SectorSpec::theta_hi();

  SectorReport rep;
  rep.eps = eps;
  rep.seed = seed;
  rep.min_offset = INFINITY;
  rep.max_offset = -INFINITY;
  rep.max_offset_at_rmax = -INFINITY;

  auto visit = [&](double r, double th, bool outer) {
    const ComplexPoint w{1.0 + r * std::cos(th), r * std::sin(th)};
    const double d = eval_G_offset(w);
    rep.min_offset = std::min(rep.min_offset, d);
    rep.max_offset = std::max(rep.max_offset, d);
    if (outer) rep.max_offset_at_rmax = std::max(rep.max_offset_at_rmax, d);
    if (!(d > -eps && d < 0.0)) ++rep.violations;
    if (membership(w, p, 0.0) != Membership::Inside) rep.all_inside_omega = false;
    ++rep.n_samples;
  };

  const auto n_r = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::sqrt(double(n_samples))));
  const std::uint64_t n_th = (n_samples + n_r - 1) / n_r;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 gen(seq);
  auto u01 = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  // Area-uniform strata: r^2 and theta each split evenly.
  for (std::uint64_t i = 0; i < n_r; ++i) {
    for (std::uint64_t j = 0; j < n_th; ++j) {
      const double r = r_max * std::sqrt((static_cast<double>(i) + u01()) / static_cast<double>(n_r));
      const double th = th_lo + (th_hi - th_lo) * (static_cast<double>(j) + u01()) / static_cast<double>(n_th);
      if (r > 0.0) visit(r, th, false);
    }
  }

  // Extremes: the outer arc, the angular edges, and points close to w = 1.
  const double r_edge = r_max * (1.0 - 1e-12);
  const double th_in = 1e-12;
  for (std::uint64_t j = 0; j <= n_th; ++j) {
    const double th = th_lo + th_in + (th_hi - th_lo - 2 * th_in) * static_cast<double>(j) / static_cast<double>(n_th);
    visit(r_edge, th, true);
  }
  for (double f : {1e-9, 1e-6, 1e-3, 0.5}) {
    visit(r_max * f, th_lo + th_in, false);
    visit(r_max * f, th_hi - th_in, false);
    visit(r_max * f, std::numbers::pi, false);
  }

  rep.status = rep.violations == 0 && rep.all_inside_omega ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

std::optional<double> empirical_eps0(const std::vector<double>& eps_list, std::uint64_t n_samples,
                                     const GreenParams& p, std::uint64_t seed) {
  for (double eps : eps_list)
    if (sector_check(eps, n_samples, p, seed).status == CheckStatus::Pass) return eps;
  return std::nullopt;
}

// --- band area ------------------------------------------------------------

namespace {

AreaQuery configure(AreaQuery q, const AreaSettings& s) {
  q.tol = s.tol;
  q.max_depth = s.max_depth;
  q.cell_budget = s.cell_budget;
  q.threads = s.threads;
  return q;
}

}  // namespace

CorollaryReport corollary_check(double eps, const GreenParams& p, const AreaSettings& s) {
  if (!(eps > 0.0 && eps <= 0.05)) throw std::invalid_argument("corollary_check needs eps in (0, 0.05]");
  CorollaryReport rep;
  rep.eps = eps;
  const PlaneBox box = certified_box(p);
  rep.band = certified_area(
      configure(AreaQuery::band(Level::critical_plus(p, -eps), Level::critical(p), box), s), p);
  rep.sector = sector_area_enclosure(eps);
  rep.margin = next_down(rep.band.lower - rep.sector.hi());
  if (rep.band.lower >= rep.sector.hi())
    rep.status = CheckStatus::Pass;
  else if (rep.band.upper < rep.sector.lo())
    rep.status = CheckStatus::Fail;
  else
    rep.status = CheckStatus::Inconclusive;
  return rep;
}

// --- non-convexity --------------------------------------------------------

SlopeReport slope_check(double t_a, double t_b, const GreenParams& p, const TraceOptions& opts) {
  if (!(t_a < t_b)) throw std::invalid_argument("slope check needs t_a < t_b");
  for (double t : {t_a, t_b}) {
    if (!(t > -3.0 && t < -0.01)) throw std::invalid_argument("slope check levels must lie in (-3, -0.01)");
    if (std::fabs(t - p.critical_value()) < opts.delta_crit)
      throw std::invalid_argument("slope check level is inside the near-critical band");
  }
  SlopeReport rep;
  rep.t_a = t_a;
  rep.t_b = t_b;
  rep.a = level_measure(t_a, p, opts);
  rep.b = level_measure(t_b, p, opts);
  rep.a.components.clear();
  rep.b.components.clear();

  const double mid = 0.5 * (t_a + t_b);
  {
    const double lhs = rep.a.dArea_dt - 3.0 * rep.a.slope_error_estimate;
    const double rhs = rep.b.dArea_dt + 3.0 * rep.b.slope_error_estimate;
    rep.plain_margin = lhs - rhs;
    if (rep.plain_margin > 0.0)
      rep.plain = ConvexityViolation{ConvexityKind::Plain, ViolationForm::Slope, t_a, mid, t_b, lhs, rhs,
                                     rep.plain_margin, false};
  }
  {
    auto ratio = [](const LevelMeasure& m) { return m.dArea_dt / m.area; };
    auto ratio_err = [&](const LevelMeasure& m) {
      return ratio(m) * (m.slope_error_estimate / m.dArea_dt + m.error_estimate / m.area);
    };
    const double lhs = ratio(rep.a) - 3.0 * ratio_err(rep.a);
    const double rhs = ratio(rep.b) + 3.0 * ratio_err(rep.b);
    rep.log_margin = lhs - rhs;
    if (rep.log_margin > 0.0)
      rep.log = ConvexityViolation{ConvexityKind::Log, ViolationForm::Slope, t_a, mid, t_b, lhs, rhs,
                                   rep.log_margin, false};
  }
  return rep;
}

std::optional<ConvexityViolation> slope_violation(double t_a, double t_b, ConvexityKind kind,
                                                  const GreenParams& p, const TraceOptions& opts) {
  const SlopeReport rep = slope_check(t_a, t_b, p, opts);
  return kind == ConvexityKind::Plain ? rep.plain : rep.log;
}

SecantSearchResult secant_violation_search(const GreenParams& p, const std::vector<double>& eps_list,
                                           double delta, const AreaSettings& s,
                                           std::optional<double> center) {
  if (!(delta > 0.0 && delta <= 0.1)) throw std::invalid_argument("secant search needs delta in (0, 0.1]");
  if (eps_list.empty()) throw std::invalid_argument("secant search needs at least one eps");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("secant search eps must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("secant search eps list must be decreasing");
  }

  const PlaneBox box = certified_box(p);
  const Level l2 = center ? Level::exact(*center) : Level::critical(p);
  const Level l3{l2.t + delta};
  if (!(l3.t.hi() < 0.0)) throw std::invalid_argument("secant search: center + delta must stay below 0");

  auto area = [&](const Level& l) {
    return certified_area(configure(AreaQuery::sublevel(l, box), s), p);
  };

  SecantSearchResult out;
  out.delta = delta;
  out.best_plain_margin = -INFINITY;
  out.best_log_margin = -INFINITY;
  const CertifiedArea s2 = area(l2);
  const CertifiedArea s3 = area(l3);

  for (double eps : eps_list) {
    const Level l1{l2.t - eps};
    const CertifiedArea s1 = area(l1);

    // Chord weights (t3 - t2)/(t3 - t1) and (t2 - t1)/(t3 - t1), enclosed.
    const ScalarInterval span = l3.t - l1.t;
    const ScalarInterval w1 = (l3.t - l2.t) / span;
    const ScalarInterval w3 = (l2.t - l1.t) / span;

    SecantAttempt a;
    a.eps = eps;
    a.t1 = l1.value();
    a.t2 = l2.value();
    a.t3 = l3.value();
    a.s1 = s1;
    a.s2 = s2;
    a.s3 = s3;

    const ScalarInterval chord = w1 * ScalarInterval(s1.upper) + w3 * ScalarInterval(s3.upper);
    a.plain_margin = (ScalarInterval(s2.lower) - chord).lo();

    const double log_s2 = rigorous::log_down(s2.lower);
    const ScalarInterval log_chord = w1 * ScalarInterval(rigorous::log_up(s1.upper)) +
                                     w3 * ScalarInterval(rigorous::log_up(s3.upper));
    a.log_margin = (ScalarInterval(log_s2) - log_chord).lo();

    const bool certified = s1.certified && s2.certified && s3.certified;
    if (!out.plain && a.plain_margin > 0.0)
      out.plain = ConvexityViolation{ConvexityKind::Plain, ViolationForm::Secant, a.t1, a.t2, a.t3,
                                     s2.lower, chord.hi(), a.plain_margin, certified};
    if (!out.log && a.log_margin > 0.0)
      out.log = ConvexityViolation{ConvexityKind::Log, ViolationForm::Secant, a.t1, a.t2, a.t3,
                                   log_s2, log_chord.hi(), a.log_margin, certified};

    out.best_plain_margin = std::max(out.best_plain_margin, a.plain_margin);
    out.best_log_margin = std::max(out.best_log_margin, a.log_margin);
    out.tolerance_wall = std::max({out.tolerance_wall, s1.width(), s2.width(), s3.width()});
    out.attempts.push_back(a);
    if (out.plain && out.log) break;
  }
  return out;
}

MonteCarloMargin monte_carlo_chord_margin(ConvexityKind kind, double t1, double t2, double t3,
                                          std::uint64_t n, std::uint64_t seed, const GreenParams& p,
                                          int threads) {
  if (!(t1 < t2 && t2 < t3)) throw std::invalid_argument("chord margin needs t1 < t2 < t3");
  const auto c = monte_carlo_counts({t1, t2, t3}, n, seed, p, threads);
  const double area = certified_box(p).area();
  const double nn = static_cast<double>(n);
  const double w1 = (t3 - t2) / (t3 - t1);
  const double w3 = (t2 - t1) / (t3 - t1);
  const double s1 = area * static_cast<double>(c[0]) / nn;
  const double s2 = area * static_cast<double>(c[1]) / nn;
  const double s3 = area * static_cast<double>(c[2]) / nn;

  // Per-sample contribution by bin: G < t1, t1 <= G < t2, t2 <= G < t3.
  double y[3];
  MonteCarloMargin out;
  if (kind == ConvexityKind::Plain) {
    y[0] = area * (1.0 - w1 - w3);
    y[1] = area * (1.0 - w3);
    y[2] = area * (-w3);
    out.estimate = s2 - w1 * s1 - w3 * s3;
  } else {
    y[0] = area * (1.0 / s2 - w1 / s1 - w3 / s3);
    y[1] = area * (1.0 / s2 - w3 / s3);
    y[2] = area * (-w3 / s3);
    out.estimate = std::log(s2) - w1 * std::log(s1) - w3 * std::log(s3);
  }
  const double f[3] = {static_cast<double>(c[0]) / nn, static_cast<double>(c[1] - c[0]) / nn,
                       static_cast<double>(c[2] - c[1]) / nn};
  double mean = 0.0;
  double second = 0.0;
  for (int k = 0; k < 3; ++k) {
    mean += y[k] * f[k];
    second += y[k] * y[k] * f[k];
  }
  out.stderr_ = std::sqrt(std::max(0.0, second - mean * mean) / nn);
  return out;
}

}  // namespace greenlevel
