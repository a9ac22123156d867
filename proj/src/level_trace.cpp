#include "greenlevel/level_trace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>

#include "greenlevel/region_area.hpp"

namespace greenlevel {

namespace {

struct Vec {
  double x;
  double y;
};

Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
Vec operator*(double s, Vec a) { return {s * a.x, s * a.y}; }
double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }
double cross(Vec a, Vec b) { return a.x * b.y - a.y * b.x; }
double norm(Vec a) { return std::hypot(a.x, a.y); }

Vec as_vec(const ComplexPoint& p) { return {p.re, p.im}; }
ComplexPoint as_point(Vec v) { return {v.x, v.y}; }

struct Sample {
  Vec w;
  Vec grad;
  double grad_norm;
  Vec tangent;  // grad rotated by +90 degrees, unit length
};

Sample sample_at(Vec w) {
  const Gradient g = eval_gradient(as_point(w));
  const double n = g.norm();
  return {w, {g.dx, g.dy}, n, {-g.dy / n, g.dx / n}};
}

double residual(Vec w, double t, const GreenParams& p) { return eval_G(as_point(w), p) - t; }

// Newton projection onto {G = t} along the gradient.
std::optional<Vec> correct(Vec w, double t, const GreenParams& p, const TraceOptions& o) {
  for (int it = 0; it < 40; ++it) {
    const double r = residual(w, t, p);
    if (!std::isfinite(r)) return std::nullopt;
    if (std::fabs(r) <= o.tau_on) return w;
    const Gradient g = eval_gradient(as_point(w));
    const double n2 = g.dx * g.dx + g.dy * g.dy;
    if (!(n2 > o.grad_min * o.grad_min)) return std::nullopt;
    w = w - (r / n2) * Vec{g.dx, g.dy};
  }
  return std::nullopt;
}

// Cubic Hermite segment between two on-curve vertices with unit tangents.
// The tangent magnitude c / cos^2(phi/4) reproduces circular arcs of turning
// angle phi to sixth order.
class HermiteSegment {
 public:
  HermiteSegment(Vec p0, Vec t0, Vec p1, Vec t1) : p0_(p0), p1_(p1) {
    const double c = norm(p1 - p0);
    const double phi = std::atan2(cross(t0, t1), dot(t0, t1));
    const double cq = std::cos(0.25 * phi);
    const double m = c / (cq * cq);
    m0_ = m * t0;
    m1_ = m * t1;
  }

  Vec at(double u) const {
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p0_ + (u3 - 2 * u2 + u) * m0_ + (-2 * u3 + 3 * u2) * p1_ +
           (u3 - u2) * m1_;
  }

  Vec derivative(double u) const {
    const double u2 = u * u;
    return (6 * u2 - 6 * u) * p0_ + (3 * u2 - 4 * u + 1) * m0_ + (-6 * u2 + 6 * u) * p1_ +
           (3 * u2 - 2 * u) * m1_;
  }

 private:
  Vec p0_;
  Vec p1_;
  Vec m0_{};
  Vec m1_{};
};

// Gauss-Legendre on [0, 1].
constexpr std::array<double, 5> kGaussNodes = {
    0.04691007703066800, 0.23076534494715845, 0.5, 0.76923465505284155, 0.95308992296933200};
constexpr std::array<double, 5> kGaussWeights = {
    0.11846344252809454, 0.23931433524968324, 0.28444444444444444, 0.23931433524968324,
    0.11846344252809454};

struct CurveIntegrals {
  double area = 0.0;
  double length = 0.0;
  double coarea = 0.0;
};

// Integrals over the Hermite interpolant through vertices idx[0], idx[1], ...
CurveIntegrals integrate(const std::vector<Vec>& v, const std::vector<Vec>& tan,
                         const std::vector<std::size_t>& idx) {
  CurveIntegrals out;
  const Vec origin = v[idx.front()];
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const std::size_t i = idx[k];
    const std::size_t j = idx[k + 1];
    const HermiteSegment seg(v[i] - origin, tan[i], v[j] - origin, tan[j]);
    for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
      const double u = kGaussNodes[g];
      const Vec pos = seg.at(u);
      const Vec d = seg.derivative(u);
      const double speed = norm(d);
      out.area += kGaussWeights[g] * 0.5 * cross(pos, d);
      out.length += kGaussWeights[g] * speed;
      const Gradient gr = eval_gradient(as_point(pos + origin));
      out.coarea += kGaussWeights[g] * speed / gr.norm();
    }
  }
  return out;
}

void measure(LevelSetComponent& c) {
  std::vector<Vec> v;
  std::vector<Vec> tan;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    v.push_back(as_vec(c.vertices[i]));
    tan.push_back(as_vec(c.tangents[i]));
  }
  std::vector<std::size_t> fine(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) fine[i] = i;
  std::vector<std::size_t> coarse;
  for (std::size_t i = 0; i < v.size(); i += 2) coarse.push_back(i);
  if (coarse.back() != v.size() - 1) coarse.push_back(v.size() - 1);

  const CurveIntegrals f = integrate(v, tan, fine);
  const CurveIntegrals g = integrate(v, tan, coarse);
  c.signed_area = f.area;
  c.arclength = f.length;
  c.coarea = f.coarea;
  // Fourth-order rule: halving the step divides the error by about 16.
  c.area_error = std::fabs(g.area - f.area) / 15.0;
  c.coarea_error = std::fabs(g.coarea - f.coarea) / 15.0;
}

double point_segment_distance(Vec p, Vec a, Vec b) {
  const Vec ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return norm(p - (a + s * ab));
}

// Whether p lies on the traced curve, allowing for the chord sagitta.
bool near_component(Vec p, const LevelSetComponent& c) {
  for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i) {
    const Vec a = as_vec(c.vertices[i]);
    const Vec b = as_vec(c.vertices[i + 1]);
    if (point_segment_distance(p, a, b) <= 0.05 * norm(b - a) + 1e-6) return true;
  }
  return false;
}

}  // namespace

std::string to_string(TraceErrorKind k) {
  switch (k) {
    case TraceErrorKind::Stalled: return "stalled";
    case TraceErrorKind::MaxStepsExceeded: return "max-steps-exceeded";
    case TraceErrorKind::NoSeedsFound: return "no-seeds-found";
    case TraceErrorKind::NearCritical: return "near-critical";
    case TraceErrorKind::BadSeed: return "bad-seed";
  }
  return "unknown";
}

std::vector<ComplexPoint> find_seeds(double t, int grid_n, const GreenParams& p,
                                     const TraceOptions& opts) {
  if (!(t < 0.0)) throw std::invalid_argument("find_seeds needs t < 0");
  if (grid_n < 64) throw std::invalid_argument("find_seeds needs grid_n >= 64");

  PlaneBox box = certified_box(p);
  if (t < -2.0) {
    // Around the pole G = log|w| + t0 + O(|w|), so the curve has radius
    // close to exp(t - t0).
    const double rho = std::exp(t - p.critical_value());
    const double half = 2.0 * rho;
    if (!(half > 0.0) || !std::isfinite(half))
      throw TraceError(TraceErrorKind::NoSeedsFound, "level curve is below representable size");
    box = PlaneBox{{-half, half}, {-half, half}};
  }

  const double x0 = box.x.lo();
  const double y0 = box.y.lo();
  const double hx = (box.x.hi() - x0) / grid_n;
  const double hy = (box.y.hi() - y0) / grid_n;
  const int n = grid_n + 1;
  std::vector<double> val(static_cast<std::size_t>(n) * n);
  auto node = [&](int i, int j) { return Vec{x0 + i * hx, y0 + j * hy}; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) val[static_cast<std::size_t>(j) * n + i] = residual(node(i, j), t, p);

  std::vector<ComplexPoint> seeds;
  const double min_sep = 0.25 * std::min(hx, hy);
  auto add_edge = [&](Vec a, double fa, Vec b, double fb) {
    if (!((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))) return;
    if (fa > 0.0) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
    // invariant: G(a) < t < G(b)
    Vec m = a;
    for (int it = 0; it < 200; ++it) {
      m = 0.5 * (a + b);
      const double fm = residual(m, t, p);
      if (std::fabs(fm) <= opts.tau_on) break;
      if (fm < 0.0)
        a = m;
      else
        b = m;
      if (norm(b - a) == 0.0) break;
    }
    if (auto polished = correct(m, t, p, opts)) m = *polished;
    if (!(std::fabs(residual(m, t, p)) <= opts.tau_on)) return;
    for (const auto& s : seeds)
      if (norm(as_vec(s) - m) < min_sep) return;
    seeds.push_back(as_point(m));
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double f = val[static_cast<std::size_t>(j) * n + i];
      if (i + 1 < n) add_edge(node(i, j), f, node(i + 1, j), val[static_cast<std::size_t>(j) * n + i + 1]);
      if (j + 1 < n) add_edge(node(i, j), f, node(i, j + 1), val[static_cast<std::size_t>(j + 1) * n + i]);
    }
  }
  if (seeds.empty())
    throw TraceError(TraceErrorKind::NoSeedsFound, "no sign change of G - t on the seed grid");
  return seeds;
}

LevelSetComponent trace_component(const ComplexPoint& seed, double t, const GreenParams& p,
                                  const TraceOptions& o) {
  Vec start = as_vec(seed);
  if (!(std::fabs(residual(start, t, p)) <= o.tau_on)) {
    auto c = correct(start, t, p, o);
    if (!c) throw TraceError(TraceErrorKind::BadSeed, "seed is not on the level curve");
    start = *c;
  }
  Sample cur = sample_at(start);
  if (!(cur.grad_norm > o.grad_min))
    throw TraceError(TraceErrorKind::Stalled, "gradient vanishes at the seed");

  // The tangent already keeps {G < t} on the left; the probe confirms it.
  const Vec probe = start + o.orientation_probe * Vec{-cur.tangent.y, cur.tangent.x};
  const bool reverse = !(residual(probe, t, p) < 0.0);

  const Sample first = cur;
  LevelSetComponent comp;
  comp.vertices.push_back(as_point(start));
  comp.tangents.push_back(as_point(cur.tangent));
  comp.min_grad = cur.grad_norm;

  const double cos_align = std::cos(2.0 * o.theta_max);
  double h = 0.1 * o.step_max;
  std::size_t steps = 0;
  for (;;) {
    if (steps >= o.max_steps)
      throw TraceError(TraceErrorKind::MaxStepsExceeded, "level curve did not close");

    if (steps >= 10) {
      const Vec gap = first.w - cur.w;
      const double d = norm(gap);
      if (d <= o.closure_tol ||
          (d <= h && dot(gap, cur.tangent) > 0.0 && dot(cur.tangent, first.tangent) > cos_align)) {
        comp.vertices.push_back(as_point(first.w));
        comp.tangents.push_back(as_point(first.tangent));
        comp.closed = true;
        break;
      }
    }

    auto shrink = [&] {
      h *= 0.5;
      if (h < o.step_min)
        throw TraceError(TraceErrorKind::Stalled,
                         "step fell below step_min; level curve is near-critical");
    };

    const Vec predicted = cur.w + h * cur.tangent;
    const auto corrected = correct(predicted, t, p, o);
    if (!corrected || norm(*corrected - predicted) > 0.25 * h) {
      shrink();
      continue;
    }
    Sample next = sample_at(*corrected);
    if (!(next.grad_norm > o.grad_min))
      throw TraceError(TraceErrorKind::Stalled, "gradient vanishes along the level curve");
    const double turn = std::fabs(std::atan2(cross(cur.tangent, next.tangent), dot(cur.tangent, next.tangent)));
    const double ratio = next.grad_norm / cur.grad_norm;
    if (turn > o.theta_max || ratio > 2.0 || ratio < 0.5) {
      shrink();
      continue;
    }

    comp.vertices.push_back(as_point(next.w));
    comp.tangents.push_back(as_point(next.tangent));
    comp.min_grad = std::min(comp.min_grad, next.grad_norm);
    cur = next;
    ++steps;
    if (turn < o.theta_max / 3.0 && ratio > 0.8 && ratio < 1.25) h = std::min(1.5 * h, o.step_max);
  }

  if (reverse) {
    std::reverse(comp.vertices.begin(), comp.vertices.end());
    std::reverse(comp.tangents.begin(), comp.tangents.end());
    for (auto& tv : comp.tangents) tv = {-tv.re, -tv.im};
  }
  measure(comp);
  return comp;
}

LevelMeasure level_measure(double t, const GreenParams& p, const TraceOptions& opts) {
  if (!(t < 0.0)) throw std::invalid_argument("level_measure needs t < 0");
  if (std::fabs(t - p.critical_value()) < opts.delta_crit)
    throw TraceError(TraceErrorKind::NearCritical, "level is inside the near-critical band");

  const std::vector<ComplexPoint> seeds = find_seeds(t, opts.grid_n, p, opts);
  LevelMeasure m;
  m.t = t;
  for (const auto& s : seeds) {
    const Vec sv = as_vec(s);
    bool known = false;
    for (const auto& c : m.components) {
      if (near_component(sv, c)) {
        known = true;
        break;
      }
    }
    if (known) continue;
    m.components.push_back(trace_component(s, t, p, opts));
  }

  auto key = [](const LevelSetComponent& c) {
    const auto it = std::min_element(c.vertices.begin(), c.vertices.end(), [](const auto& a, const auto& b) {
      return a.re < b.re || (a.re == b.re && a.im < b.im);
    });
    return std::make_pair(it->re, it->im);
  };
  std::sort(m.components.begin(), m.components.end(),
            [&](const auto& a, const auto& b) { return key(a) < key(b); });

  for (const auto& c : m.components) {
    m.area += c.signed_area;
    m.dArea_dt += c.coarea;
    m.error_estimate += c.area_error;
    m.slope_error_estimate += c.coarea_error;
  }
  m.n_components = m.components.size();
  return m;
}

std::vector<ProfileEntry> area_profile(const std::vector<double>& t_list, const GreenParams& p,
                                       const TraceOptions& opts) {
  std::vector<ProfileEntry> out(t_list.size());
  auto run = [&](std::size_t i) {
    out[i].t = t_list[i];
    try {
      LevelMeasure m = level_measure(t_list[i], p, opts);
      m.components.clear();
      out[i].measure = std::move(m);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  };
  const std::size_t workers = std::max(1, opts.threads);
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < t_list.size(); i += workers) run(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace greenlevel
