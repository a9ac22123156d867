#include "greenlevel/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <regex>
#include <sstream>

namespace greenlevel {

GreenParams RunConfig::params() const { return r ? GreenParams::with_radius(*r) : GreenParams{}; }

AreaSettings RunConfig::area_settings(double default_tol) const {
  return AreaSettings{tol.value_or(default_tol), max_depth, cell_budget, threads};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

Json num(double v) { return Json(v); }

Json opt_num(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void write(std::ostringstream& os, const Json& j, int indent, int level) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (level + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * level), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, level + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write(os, v, indent, level + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << format_number(v);
      else
        os << '"' << format_number(v) << '"';
      return;
    }
    default:
      os << j.dump();
  }
}

std::string eps_key(const std::string& prefix, double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0e", eps);
  return prefix + "@" + buf;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

Json to_json(const RunConfig& c) {
  Json j;
  if (c.r) {
    j["r"] = num(*c.r);
  } else {
    j["r"] = num(std::exp(-1.0 / 3.0));
    j["r_expr"] = "exp(-1/3)";
  }
  j["tol"] = opt_num(c.tol);
  j["max_depth"] = c.max_depth;
  j["cell_budget"] = c.cell_budget;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["out"] = c.out.empty() ? "-" : c.out;
  return j;
}

Json to_json(const CertifiedArea& a) {
  return Json{{"lower", num(a.lower)},
              {"upper", num(a.upper)},
              {"boundary_area", num(a.boundary_area)},
              {"cells_inside", a.cells_inside},
              {"cells_boundary", a.cells_boundary},
              {"cells_processed", a.cells_processed},
              {"max_depth_reached", a.max_depth_reached},
              {"certified", a.certified},
              {"termination", to_string(a.termination)}};
}

Json to_json(const MonteCarloEstimate& e) {
  return Json{{"estimate", num(e.estimate)}, {"stderr", num(e.stderr_)}, {"n", e.n},
              {"hits", e.hits},              {"seed", e.seed}};
}

Json to_json(const LevelMeasure& m) {
  return Json{{"t", num(m.t)},
              {"area", num(m.area)},
              {"dArea_dt", num(m.dArea_dt)},
              {"n_components", m.n_components},
              {"error_estimate", num(m.error_estimate)},
              {"slope_error_estimate", num(m.slope_error_estimate)},
              {"engine", m.engine}};
}

Json to_json(const Lemma1Report& r) {
  Json crit = Json::array();
  for (const auto& c : r.critical)
    crit.push_back(Json{{"re", num(c.point.re)}, {"im", num(c.point.im)}, {"multiplicity", c.multiplicity}});
  Json taylor = Json::array();
  for (const auto& s : r.taylor)
    taylor.push_back(Json{{"theta", num(s.theta)}, {"rho", num(s.rho)}, {"ratio", num(s.ratio)},
                          {"expected", num(s.expected)}});
  return Json{{"status", to_string(r.status)},
              {"g_at_1", num(r.g_at_1)},
              {"g_at_1_error", num(r.g_at_1_error)},
              {"critical_points", crit},
              {"critical_location_error", num(r.critical_location_error)},
              {"f1_abs", num(r.f1_abs)},
              {"f2_abs", num(r.f2_abs)},
              {"f3_divided_difference", num(r.f3_divided_difference)},
              {"taylor_max_deviation", num(r.taylor_max_deviation)},
              {"taylor_constant", num(r.taylor_constant)},
              {"taylor", taylor}};
}

Json to_json(const SectorReport& r) {
  return Json{{"eps", num(r.eps)},
              {"status", to_string(r.status)},
              {"n_samples", r.n_samples},
              {"seed", r.seed},
              {"min_offset", num(r.min_offset)},
              {"max_offset", num(r.max_offset)},
              {"max_offset_at_rmax", num(r.max_offset_at_rmax)},
              {"proof_upper_bound", num(-std::sqrt(2.0) * r.eps / 48.0)},
              {"violations", r.violations},
              {"all_inside_omega", r.all_inside_omega}};
}

Json to_json(const CorollaryReport& r) {
  return Json{{"eps", num(r.eps)},
              {"status", to_string(r.status)},
              {"band", to_json(r.band)},
              {"sector_area_lo", num(r.sector.lo())},
              {"sector_area_hi", num(r.sector.hi())},
              {"margin", num(r.margin)}};
}

Json to_json(const ConvexityViolation& v) {
  return Json{{"kind", to_string(v.kind)}, {"form", to_string(v.form)}, {"t1", num(v.t1)},
              {"t2", num(v.t2)},           {"t3", num(v.t3)},           {"lhs", num(v.lhs)},
              {"rhs", num(v.rhs)},         {"margin", num(v.margin)},   {"certified", v.certified}};
}

namespace {
Json opt_violation(const std::optional<ConvexityViolation>& v) {
  return v ? to_json(*v) : Json(nullptr);
}
}  // namespace

Json to_json(const SlopeReport& r) {
  return Json{{"t_a", num(r.t_a)},
              {"t_b", num(r.t_b)},
              {"a", to_json(r.a)},
              {"b", to_json(r.b)},
              {"plain_margin", num(r.plain_margin)},
              {"log_margin", num(r.log_margin)},
              {"plain", opt_violation(r.plain)},
              {"log", opt_violation(r.log)}};
}

Json to_json(const SecantSearchResult& r) {
  Json attempts = Json::array();
  for (const auto& a : r.attempts)
    attempts.push_back(Json{{"eps", num(a.eps)},
                            {"t1", num(a.t1)},
                            {"t2", num(a.t2)},
                            {"t3", num(a.t3)},
                            {"s1", to_json(a.s1)},
                            {"s2", to_json(a.s2)},
                            {"s3", to_json(a.s3)},
                            {"plain_margin", num(a.plain_margin)},
                            {"log_margin", num(a.log_margin)}});
  return Json{{"delta", num(r.delta)},
              {"attempts", attempts},
              {"plain", opt_violation(r.plain)},
              {"log", opt_violation(r.log)},
              {"best_plain_margin", num(r.best_plain_margin)},
              {"best_log_margin", num(r.best_log_margin)},
              {"tolerance_wall", num(r.tolerance_wall)}};
}

std::optional<ComplexPoint> parse_complex(const std::string& s) {
  static const std::regex re(
      R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i)?$)");
  std::smatch m;
  if (s.empty() || !std::regex_match(s, m, re)) return std::nullopt;
  const bool has_real = m[1].matched;
  const bool has_imag = s.back() == 'i';
  if (!has_real && !has_imag) return std::nullopt;
  // The pattern binds the digits of "2i" to the real part.
  if (has_real && has_imag && m[2].length() == 0) {
    if (m[3].matched) return std::nullopt;
    return ComplexPoint{0.0, std::strtod(m[1].str().c_str(), nullptr)};
  }
  ComplexPoint w;
  if (has_real) w.re = std::strtod(m[1].str().c_str(), nullptr);
  if (has_imag) {
    const double mag = m[3].matched ? std::strtod(m[3].str().c_str(), nullptr) : 1.0;
    w.im = m[2].str() == "-" ? -mag : mag;
  }
  return w;
}

std::optional<Level> parse_level(const std::string& s, const GreenParams& p) {
  auto parse_double = [](const std::string& str) -> std::optional<double> {
    if (str.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (end != str.c_str() + str.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  };
  if (s.rfind("t0", 0) == 0) {
    const std::string rest = s.substr(2);
    if (rest.empty()) return Level::critical(p);
    if (rest[0] != '+' && rest[0] != '-') return std::nullopt;
    const auto off = parse_double(rest);
    if (!off) return std::nullopt;
    return Level::critical_plus(p, *off);
  }
  const auto v = parse_double(s);
  if (!v) return std::nullopt;
  return Level::exact(*v);
}

std::string csv_header() { return "t,area_lower,area_upper,area_est,ds_dt,n_components,engine"; }

std::string csv_row(const SweepRow& row) {
  auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::string out = format_number(row.t);
  out += ',' + cell(row.area_lower);
  out += ',' + cell(row.area_upper);
  out += ',' + cell(row.area_est);
  out += ',' + cell(row.ds_dt);
  out += ',' + (row.n_components ? std::to_string(*row.n_components) : std::string());
  out += ',' + row.engine;
  return out;
}

std::optional<VerifyTarget> parse_verify_target(const std::string& s) {
  if (s == "lemma1") return VerifyTarget::Lemma1;
  if (s == "lemma2") return VerifyTarget::Lemma2;
  if (s == "corollary") return VerifyTarget::Corollary;
  if (s == "nonconvexity") return VerifyTarget::Nonconvexity;
  if (s == "all") return VerifyTarget::All;
  return std::nullopt;
}

CheckStatus status_of(const Json& report) {
  const std::string s = report.at("status").get<std::string>();
  if (s == "pass") return CheckStatus::Pass;
  if (s == "inconclusive") return CheckStatus::Inconclusive;
  return CheckStatus::Fail;
}

int exit_code(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return 0;
    case CheckStatus::Fail: return 2;
    case CheckStatus::Inconclusive: return 3;
  }
  return 1;
}

namespace {

CheckStatus combine(const std::vector<CheckStatus>& all) {
  bool inconclusive = false;
  for (auto s : all) {
    if (s == CheckStatus::Fail) return CheckStatus::Fail;
    if (s == CheckStatus::Inconclusive) inconclusive = true;
  }
  return inconclusive ? CheckStatus::Inconclusive : CheckStatus::Pass;
}

Json report(const std::string& check, CheckStatus status, Json margins, const RunConfig& cfg,
            Json details) {
  return Json{{"check", check},
              {"status", to_string(status)},
              {"margins", std::move(margins)},
              {"config", to_json(cfg)},
              {"details", std::move(details)},
              {"version", GREENLEVEL_VERSION}};
}

Json verify_lemma1(const RunConfig& cfg) {
  const Lemma1Report r = lemma1_check(cfg.params());
  Json margins{{"g_at_1_error", num(r.g_at_1_error)},
               {"critical_location_error", num(r.critical_location_error)},
               {"f1_abs", num(r.f1_abs)},
               {"f2_abs", num(r.f2_abs)},
               {"f3_minus_6", num(r.f3_divided_difference - 6.0)},
               {"taylor_max_deviation", num(r.taylor_max_deviation)}};
  return report("lemma1", r.status, std::move(margins), cfg, to_json(r));
}

Json verify_lemma2(const RunConfig& cfg, const VerifyOptions& o) {
  const GreenParams p = cfg.params();
  const std::vector<double> eps = o.eps.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : o.eps;
  Json margins = Json::object();
  Json sectors = Json::array();
  std::vector<CheckStatus> st;
  for (double e : eps) {
    const SectorReport r = sector_check(e, o.sector_samples, p, cfg.seed);
    margins[eps_key("lower_margin", e)] = num(r.min_offset + e);
    margins[eps_key("upper_margin", e)] = num(-r.max_offset);
    sectors.push_back(to_json(r));
    st.push_back(r.status);
  }
  const std::vector<double> ladder = {0.9, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  const auto eps0 = empirical_eps0(ladder, o.sector_samples, p, cfg.seed);
  Json details{{"sectors", sectors}, {"empirical_eps0_lower_bound", opt_num(eps0)}};
  return report("lemma2", combine(st), std::move(margins), cfg, std::move(details));
}

Json verify_corollary(const RunConfig& cfg, const VerifyOptions& o) {
  const GreenParams p = cfg.params();
  const std::vector<double> eps = o.eps.empty() ? std::vector<double>{1e-2, 1e-3} : o.eps;
  Json margins = Json::object();
  Json bands = Json::array();
  std::vector<CheckStatus> st;
  for (double e : eps) {
    const CorollaryReport r = corollary_check(e, p, cfg.area_settings(1e-6));
    margins[eps_key("margin", e)] = num(r.margin);
    bands.push_back(to_json(r));
    st.push_back(r.status);
  }
  return report("corollary", combine(st), std::move(margins), cfg, Json{{"bands", bands}});
}

Json verify_nonconvexity(const RunConfig& cfg, const VerifyOptions& o) {
  const GreenParams p = cfg.params();
  const double t0 = p.critical_value();
  TraceOptions topts;
  topts.threads = cfg.threads;
  const SlopeReport slope = slope_check(t0 - 1e-4, t0 + 0.05, p, topts);

  const std::vector<double> eps = o.eps.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : o.eps;
  const SecantSearchResult secant = secant_violation_search(p, eps, o.delta, cfg.area_settings(1e-4));

  // Every certified secant violation must survive replacing the certified
  // areas by Monte Carlo estimates +- 4 sigma.
  Json mc = Json::object();
  bool mc_ok = true;
  for (const auto* v : {&secant.plain, &secant.log}) {
    if (!*v) continue;
    const auto m = monte_carlo_chord_margin((*v)->kind, (*v)->t1, (*v)->t2, (*v)->t3, o.mc_samples,
                                            cfg.seed, p, cfg.threads);
    const bool confirmed = m.estimate - 4.0 * m.stderr_ > 0.0;
    mc_ok = mc_ok && confirmed;
    mc[to_string((*v)->kind)] =
        Json{{"estimate", num(m.estimate)}, {"stderr", num(m.stderr_)}, {"confirmed", confirmed}};
  }

  // The slope violations are the gate; the certified secant search is
  // reported either way, with its tolerance wall when it finds nothing.
  CheckStatus status = CheckStatus::Pass;
  if (!slope.plain || !slope.log) status = CheckStatus::Fail;
  if (!mc_ok) status = CheckStatus::Fail;

  Json margins{{"slope_plain", num(slope.plain_margin)},
               {"slope_log", num(slope.log_margin)},
               {"secant_plain_best", num(secant.best_plain_margin)},
               {"secant_log_best", num(secant.best_log_margin)},
               {"secant_tolerance_wall", num(secant.tolerance_wall)}};
  Json details{{"slope", to_json(slope)},
               {"secant", to_json(secant)},
               {"secant_certified", secant.plain.has_value() && secant.log.has_value()},
               {"monte_carlo_confirmation", mc}};
  return report("nonconvexity", status, std::move(margins), cfg, std::move(details));
}

}  // namespace

Json run_verify(VerifyTarget which, const RunConfig& cfg, const VerifyOptions& opts) {
  switch (which) {
    case VerifyTarget::Lemma1: return verify_lemma1(cfg);
    case VerifyTarget::Lemma2: return verify_lemma2(cfg, opts);
    case VerifyTarget::Corollary: return verify_corollary(cfg, opts);
    case VerifyTarget::Nonconvexity: return verify_nonconvexity(cfg, opts);
    case VerifyTarget::All: break;
  }
  // eps lists differ per check, so "all" always runs each check's defaults.
  const VerifyOptions defaults{{}, opts.sector_samples, opts.mc_samples, opts.delta};
  std::vector<Json> parts = {verify_lemma1(cfg), verify_lemma2(cfg, defaults),
                             verify_corollary(cfg, defaults), verify_nonconvexity(cfg, defaults)};
  std::vector<CheckStatus> st;
  Json margins = Json::object();
  Json reports = Json::array();
  for (auto& part : parts) {
    st.push_back(status_of(part));
    margins[part["check"].get<std::string>()] = part["margins"];
    part.erase("config");
    part.erase("version");
    reports.push_back(std::move(part));
  }
  return report("all", combine(st), std::move(margins), cfg, Json{{"reports", reports}});
}

}  // namespace greenlevel
