#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "greenlevel/report.hpp"

namespace py = pybind11;
namespace gl = greenlevel;

namespace {

gl::GreenParams params(std::optional<double> r) {
  return r ? gl::GreenParams::with_radius(*r) : gl::GreenParams{};
}

gl::Level level(const py::object& t, const gl::GreenParams& p) {
  if (py::isinstance<py::str>(t)) {
    const auto l = gl::parse_level(t.cast<std::string>(), p);
    if (!l) throw py::value_error("bad level: " + t.cast<std::string>());
    return *l;
  }
  return gl::Level::exact(t.cast<double>());
}

// Structured results cross the boundary as JSON text; the Python side
// turns them into dicts.
std::string area_json(const py::object& t, const py::object& t_lo, std::optional<double> r,
                      double tol, int max_depth, std::uint64_t cell_budget, int threads) {
  const gl::GreenParams p = params(r);
  gl::AreaQuery q = t_lo.is_none()
                        ? gl::AreaQuery::sublevel(level(t, p), gl::certified_box(p), tol)
                        : gl::AreaQuery::band(level(t_lo, p), level(t, p), gl::certified_box(p), tol);
  q.max_depth = max_depth;
  q.cell_budget = cell_budget;
  q.threads = threads;
  gl::CertifiedArea a;
  {
    py::gil_scoped_release release;
    a = gl::certified_area(q, p);
  }
  return gl::dump_json(gl::to_json(a), -1);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = GREENLEVEL_VERSION;

  py::register_exception<gl::SingularInput>(m, "SingularInput", PyExc_ValueError);
  py::register_exception<gl::TraceError>(m, "TraceError", PyExc_RuntimeError);

  m.def("eval_G", [](double re, double im, std::optional<double> r) {
    return gl::eval_G({re, im}, params(r));
  }, py::arg("re"), py::arg("im") = 0.0, py::arg("r") = py::none());

  m.def("gradient", [](double re, double im) {
    const auto g = gl::eval_gradient({re, im});
    return py::make_tuple(g.dx, g.dy);
  }, py::arg("re"), py::arg("im") = 0.0);

  m.def("f_prime", [](double re, double im) { return gl::eval_f_derivs({re, im}).first; },
        py::arg("re"), py::arg("im") = 0.0);

  m.def("critical_points", [](std::optional<double> r) {
    py::list out;
    for (const auto& c : gl::critical_points(params(r)))
      out.append(py::make_tuple(std::complex<double>(c.point.re, c.point.im), c.multiplicity));
    return out;
  }, py::arg("r") = py::none());

  m.def("membership", [](double re, double im, double tol, std::optional<double> r) {
    return gl::to_string(gl::membership({re, im}, params(r), tol));
  }, py::arg("re"), py::arg("im") = 0.0, py::arg("tol") = 1e-12, py::arg("r") = py::none());

  m.def("critical_value", [](std::optional<double> r) { return params(r).critical_value(); },
        py::arg("r") = py::none());

  m.def("_certified_area", &area_json, py::arg("t"), py::arg("t_lo") = py::none(),
        py::arg("r") = py::none(), py::arg("tol") = 1e-5, py::arg("max_depth") = 40,
        py::arg("cell_budget") = 20'000'000, py::arg("threads") = 1);

  m.def("_level_measure", [](double t, std::optional<double> r, int threads) {
    gl::TraceOptions o;
    o.threads = threads;
    gl::LevelMeasure lm;
    {
      py::gil_scoped_release release;
      lm = gl::level_measure(t, params(r), o);
    }
    return gl::dump_json(gl::to_json(lm), -1);
  }, py::arg("t"), py::arg("r") = py::none(), py::arg("threads") = 1);

  m.def("_monte_carlo_area", [](double t_lo, double t_hi, std::uint64_t n, std::uint64_t seed,
                                std::optional<double> r, int threads) {
    gl::MonteCarloEstimate e;
    {
      py::gil_scoped_release release;
      e = gl::monte_carlo_area(t_lo, t_hi, n, seed, params(r), threads);
    }
    return gl::dump_json(gl::to_json(e), -1);
  }, py::arg("t_lo"), py::arg("t_hi"), py::arg("n"), py::arg("seed") = 0, py::arg("r") = py::none(),
     py::arg("threads") = 1);

  m.def("_verify", [](const std::string& which, std::optional<double> r, std::optional<double> tol,
                      std::uint64_t seed, int threads, std::vector<double> eps) {
    const auto target = gl::parse_verify_target(which);
    if (!target) throw py::value_error("unknown check: " + which);
    gl::RunConfig cfg;
    cfg.r = r;
    cfg.tol = tol;
    cfg.seed = seed;
    cfg.threads = threads;
    gl::VerifyOptions opts;
    opts.eps = std::move(eps);
    gl::Json rep;
    {
      py::gil_scoped_release release;
      rep = gl::run_verify(*target, cfg, opts);
    }
    return gl::dump_json(rep, -1);
  }, py::arg("which"), py::arg("r") = py::none(), py::arg("tol") = py::none(), py::arg("seed") = 0,
     py::arg("threads") = 1, py::arg("eps") = std::vector<double>{});
}
