// greenlevel: command-line front end.
//
//   greenlevel eval   --w 1+0i
//   greenlevel area   --t -0.2 --engine quadtree --tol 1e-5
//   greenlevel area   --band -0.12111:-0.11111
//   greenlevel sweep  --t-min -2 --t-max -0.02 --steps 100 --engine trace
//   greenlevel verify all --seed 7
//
// Exit codes: 0 ok, 1 runtime error, 2 verification failed, 3 inconclusive
// (or a quadtree stopped before its tolerance), 64 usage error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "greenlevel/report.hpp"

namespace gl = greenlevel;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Emitter {
  const gl::RunConfig& cfg;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  void write(const std::string& body) const {
    if (cfg.out.empty() || cfg.out == "-") {
      std::cout << body;
      std::cout.flush();
      return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + cfg.out);
    f << body;
  }

  void json(gl::Json j) const {
    if (!j.contains("config")) j["config"] = gl::to_json(cfg);
    if (!j.contains("version")) j["version"] = GREENLEVEL_VERSION;
    j["wall_clock_s"] = elapsed();
    write(gl::dump_json(j) + "\n");
  }

  // CSV body followed by '#' metadata lines, so the body stays a plain table.
  void csv(const std::string& body) const {
    std::ostringstream os;
    os << body;
    os << "# config: " << gl::dump_json(gl::to_json(cfg), -1) << "\n";
    os << "# version: " << GREENLEVEL_VERSION << "\n";
    os << "# wall_clock_s: " << gl::format_number(elapsed()) << "\n";
    write(os.str());
  }
};

gl::Level level_arg(const std::string& s, const gl::GreenParams& p) {
  auto l = gl::parse_level(s, p);
  if (!l) throw UsageError("bad level '" + s + "' (expected a decimal or t0[+-offset])");
  return *l;
}

std::uint64_t count_arg(double v, const char* name) {
  if (!(v >= 1.0) || v > 1e15 || v != std::floor(v))
    throw UsageError(std::string(name) + " must be a positive integer");
  return static_cast<std::uint64_t>(v);
}

int cmd_eval(const std::string& w_text, const gl::RunConfig& cfg) {
  const Emitter out{cfg};
  const auto w = gl::parse_complex(w_text);
  if (!w) throw UsageError("bad complex number '" + w_text + "' (expected a+bi)");
  const gl::GreenParams p = cfg.params();

  const double g = gl::eval_G(*w, p);
  const bool pole = w->re == 0.0 && w->im == 0.0;
  gl::Json j{{"check", "eval"},
             {"w", gl::Json{{"re", w->re}, {"im", w->im}}},
             {"G", g},
             {"pole", pole}};
  int code = 0;
  try {
    const auto d = gl::eval_f_derivs(*w);
    const auto grad = gl::eval_gradient(*w);
    j["f_prime"] = gl::Json{{"re", d.first.real()}, {"im", d.first.imag()}};
    j["grad"] = gl::Json{{"dx", grad.dx}, {"dy", grad.dy}};
  } catch (const gl::SingularInput& e) {
    j["f_prime"] = nullptr;
    j["grad"] = nullptr;
    j["note"] = e.what();
    if (!pole && !std::isinf(g)) code = kRuntimeError;
  }
  j["membership"] = gl::to_string(gl::membership(*w, p, 1e-12));

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "w_re,w_im,G,membership\n"
       << gl::format_number(w->re) << ',' << gl::format_number(w->im) << ','
       << gl::format_number(g) << ',' << j["membership"].get<std::string>() << "\n";
    out.csv(os.str());
  } else {
    out.json(std::move(j));
  }
  return code;
}

struct AreaArgs {
  std::string t;
  std::string band;
  std::string engine = "quadtree";
  double n = 1e7;
};

int cmd_area(const AreaArgs& a, const gl::RunConfig& cfg) {
  const Emitter out{cfg};
  const gl::GreenParams p = cfg.params();
  if (a.t.empty() == a.band.empty()) throw UsageError("exactly one of --t and --band is required");

  std::optional<gl::Level> lo;
  gl::Level hi;
  if (!a.t.empty()) {
    hi = level_arg(a.t, p);
  } else {
    const auto colon = a.band.find(':');
    if (colon == std::string::npos) throw UsageError("--band expects lo:hi");
    lo = level_arg(a.band.substr(0, colon), p);
    hi = level_arg(a.band.substr(colon + 1), p);
    if (!(lo->value() < hi.value())) throw UsageError("--band needs lo < hi");
  }

  gl::Json j{{"check", "area"},
             {"engine", a.engine},
             {"t_lo", lo ? gl::Json(lo->value()) : gl::Json("-inf")},
             {"t_hi", hi.value()}};
  int code = 0;
  std::ostringstream csv;
  if (a.engine == "quadtree") {
    gl::AreaQuery q = lo ? gl::AreaQuery::band(*lo, hi, gl::certified_box(p))
                         : gl::AreaQuery::sublevel(hi, gl::certified_box(p));
    if (cfg.tol) q.tol = *cfg.tol;
    q.max_depth = cfg.max_depth;
    q.cell_budget = cfg.cell_budget;
    q.threads = cfg.threads;
    const gl::CertifiedArea r = gl::certified_area(q, p);
    j["result"] = gl::to_json(r);
    if (!r.tolerance_met()) code = 3;
    csv << "area_lower,area_upper,termination\n"
        << gl::format_number(r.lower) << ',' << gl::format_number(r.upper) << ','
        << gl::to_string(r.termination) << "\n";
  } else if (a.engine == "trace") {
    gl::TraceOptions o;
    o.threads = cfg.threads;
    const gl::LevelMeasure m_hi = gl::level_measure(hi.value(), p, o);
    double area = m_hi.area;
    double err = m_hi.error_estimate;
    gl::Json res{{"hi", gl::to_json(m_hi)}};
    if (lo) {
      const gl::LevelMeasure m_lo = gl::level_measure(lo->value(), p, o);
      area -= m_lo.area;
      err += m_lo.error_estimate;
      res["lo"] = gl::to_json(m_lo);
    }
    res["area"] = area;
    res["error_estimate"] = err;
    j["result"] = std::move(res);
    csv << "area_est,error_estimate\n" << gl::format_number(area) << ',' << gl::format_number(err)
        << "\n";
  } else if (a.engine == "mc") {
    const double t_lo = lo ? lo->value() : -std::numeric_limits<double>::infinity();
    const auto e = gl::monte_carlo_area(t_lo, hi.value(), count_arg(a.n, "--n"), cfg.seed, p,
                                        cfg.threads);
    j["result"] = gl::to_json(e);
    csv << "area_est,stderr,n,seed\n"
        << gl::format_number(e.estimate) << ',' << gl::format_number(e.stderr_) << ',' << e.n << ','
        << e.seed << "\n";
  } else {
    throw UsageError("unknown engine '" + a.engine + "' (quadtree|trace|mc)");
  }
  if (cfg.format == "csv")
    out.csv(csv.str());
  else
    out.json(std::move(j));
  return code;
}

struct SweepArgs {
  double t_min = -2.0;
  double t_max = -0.02;
  int steps = 100;
  std::string engine = "trace";
  double n = 1e6;
};

int cmd_sweep(const SweepArgs& a, const gl::RunConfig& cfg) {
  const Emitter out{cfg};
  if (a.steps < 1) throw UsageError("--steps must be at least 1");
  if (!(a.t_min <= a.t_max)) throw UsageError("--t-min must not exceed --t-max");
  if (a.steps > 1 && !(a.t_min < a.t_max)) throw UsageError("--t-min must be below --t-max");
  const gl::GreenParams p = cfg.params();

  std::vector<double> ts(static_cast<std::size_t>(a.steps));
  for (int i = 0; i < a.steps; ++i)
    ts[static_cast<std::size_t>(i)] =
        a.steps == 1 ? a.t_min : a.t_min + (a.t_max - a.t_min) * i / (a.steps - 1);

  std::vector<gl::SweepRow> rows;
  int code = 0;
  if (a.engine == "trace") {
    gl::TraceOptions o;
    o.threads = cfg.threads;
    for (const auto& e : gl::area_profile(ts, p, o)) {
      gl::SweepRow row{e.t, {}, {}, {}, {}, {}, "trace"};
      if (e.measure) {
        row.area_est = e.measure->area;
        row.ds_dt = e.measure->dArea_dt;
        row.n_components = e.measure->n_components;
      }
      rows.push_back(row);
    }
  } else if (a.engine == "quadtree") {
    for (double t : ts) {
      auto q = gl::AreaQuery::sublevel(gl::Level::exact(t), gl::certified_box(p),
                                       cfg.tol.value_or(1e-4));
      q.max_depth = cfg.max_depth;
      q.cell_budget = cfg.cell_budget;
      q.threads = cfg.threads;
      const auto r = gl::certified_area(q, p);
      if (!r.tolerance_met()) code = 3;
      rows.push_back({t, r.lower, r.upper, r.mid(), {}, {}, "quadtree"});
    }
  } else if (a.engine == "mc") {
    const std::uint64_t n = count_arg(a.n, "--n");
    const auto counts = gl::monte_carlo_counts(ts, n, cfg.seed, p, cfg.threads);
    const double box_area = gl::certified_box(p).area();
    for (std::size_t i = 0; i < ts.size(); ++i)
      rows.push_back({ts[i], {}, {}, box_area * static_cast<double>(counts[i]) / static_cast<double>(n),
                      {}, {}, "mc"});
  } else {
    throw UsageError("unknown engine '" + a.engine + "' (quadtree|trace|mc)");
  }

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << gl::csv_header() << "\n";
    for (const auto& r : rows) os << gl::csv_row(r) << "\n";
    out.csv(os.str());
  } else {
    auto opt = [](const auto& v) { return v ? gl::Json(*v) : gl::Json(nullptr); };
    gl::Json arr = gl::Json::array();
    for (const auto& r : rows)
      arr.push_back(gl::Json{{"t", r.t},
                             {"area_lower", opt(r.area_lower)},
                             {"area_upper", opt(r.area_upper)},
                             {"area_est", opt(r.area_est)},
                             {"ds_dt", opt(r.ds_dt)},
                             {"n_components", opt(r.n_components)},
                             {"engine", r.engine}});
    out.json(gl::Json{{"check", "sweep"}, {"engine", a.engine}, {"rows", arr}});
  }
  return code;
}

struct VerifyArgs {
  std::string which = "all";
  std::vector<double> eps;
  double samples = 1e4;
  double n = 1e7;
  double delta = 0.05;
};

int cmd_verify(const VerifyArgs& a, const gl::RunConfig& cfg) {
  const Emitter out{cfg};
  const auto target = gl::parse_verify_target(a.which);
  if (!target) throw UsageError("unknown check '" + a.which + "'");
  if (cfg.format != "json") throw UsageError("verify only writes JSON reports");
  gl::VerifyOptions opts{a.eps, count_arg(a.samples, "--samples"), count_arg(a.n, "--n"), a.delta};
  gl::Json rep = gl::run_verify(*target, cfg, opts);
  const int code = gl::exit_code(gl::status_of(rep));
  out.json(std::move(rep));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green function level-set areas and convexity checks"};
  app.set_version_flag("--version", std::string(GREENLEVEL_VERSION));
  app.require_subcommand(1);

  gl::RunConfig cfg;
  double r = 0.0;
  double tol = 0.0;
  double cell_budget = 2e7;
  auto* r_opt = app.add_option("--r", r, "hole radius in (0,1); default exp(-1/3)");
  auto* tol_opt = app.add_option("--tol", tol, "quadtree stopping tolerance")
                      ->check(CLI::PositiveNumber);
  app.add_option("--max-depth", cfg.max_depth, "quadtree depth limit")->check(CLI::Range(1, 60));
  app.add_option("--cell-budget", cell_budget, "quadtree cell budget");
  app.add_option("--seed", cfg.seed, "Monte Carlo seed");
  app.add_option("--threads", cfg.threads, "worker threads (speed only)")->check(CLI::Range(1, 1024));
  app.add_option("--format", cfg.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "output file (default: standard output)");
  app.fallthrough();

  auto* eval = app.add_subcommand("eval", "evaluate G, f' and membership at a point");
  std::string w_text;
  eval->add_option("--w", w_text, "point a+bi")->required();

  auto* area = app.add_subcommand("area", "area of a sublevel set or band");
  AreaArgs area_args;
  area->add_option("--t", area_args.t, "level (decimal or t0[+-offset])");
  area->add_option("--band", area_args.band, "lo:hi");
  area->add_option("--engine", area_args.engine, "quadtree|trace|mc");
  area->add_option("--n", area_args.n, "Monte Carlo samples");

  auto* sweep = app.add_subcommand("sweep", "area profile over a range of levels");
  SweepArgs sweep_args;
  sweep->add_option("--t-min", sweep_args.t_min);
  sweep->add_option("--t-max", sweep_args.t_max);
  sweep->add_option("--steps", sweep_args.steps);
  sweep->add_option("--engine", sweep_args.engine, "quadtree|trace|mc");
  sweep->add_option("--n", sweep_args.n, "Monte Carlo samples");

  auto* verify = app.add_subcommand("verify", "run verification checks");
  VerifyArgs verify_args;
  verify->add_option("which", verify_args.which, "lemma1|lemma2|corollary|nonconvexity|all");
  verify->add_option("--eps", verify_args.eps, "override the eps list")->delimiter(',');
  verify->add_option("--samples", verify_args.samples, "sector samples per eps");
  verify->add_option("--n", verify_args.n, "Monte Carlo samples for the chord confirmation");
  verify->add_option("--delta", verify_args.delta, "secant right offset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*r_opt) cfg.r = r;
    if (*tol_opt) cfg.tol = tol;
    cfg.cell_budget = count_arg(cell_budget, "--cell-budget");
    cfg.params();  // validates r

    if (*eval) return cmd_eval(w_text, cfg);
    if (*area) return cmd_area(area_args, cfg);
    if (*sweep) return cmd_sweep(sweep_args, cfg);
    if (*verify) return cmd_verify(verify_args, cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kRuntimeError;
}
