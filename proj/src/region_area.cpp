#include "greenlevel/region_area.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "greenlevel/rigorous.hpp"

namespace greenlevel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Every point of the cell satisfies G < t.
bool all_below(const PolynomialEnclosure& e, const LevelThreshold& t) {
  if (e.denominator.lo() <= 0.0) return false;
  return e.numerator.hi() < next_down(t.factor.lo() * e.denominator.lo());
}

// Every point of the cell satisfies G > t.
bool all_above(const PolynomialEnclosure& e, const LevelThreshold& t) {
  return e.numerator.lo() > next_up(t.factor.hi() * e.denominator.hi());
}

// Runs fn(begin, end) over [0, n) split into contiguous ranges.
void parallel_ranges(std::size_t n, int threads, std::size_t min_per_worker,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, n / min_per_worker + 1));
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
}

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Cell {
  double x0;
  double y0;
};

}  // namespace

LevelThreshold LevelThreshold::from(const Level& level, const GreenParams& p) {
  const ScalarInterval k = 6.0 * level.t - 2.0 * p.log_r_enclosure();
  const ScalarInterval c = level.t - p.critical_value_enclosure();
  return {rigorous::exp(k), rigorous::exp(-6.0 * c) - 1.0};
}

AreaQuery AreaQuery::sublevel(const Level& t, const PlaneBox& bbox, double tol) {
  AreaQuery q;
  q.t_hi = t;
  q.bbox = bbox;
  q.tol = tol;
  return q;
}

AreaQuery AreaQuery::band(const Level& lo, const Level& hi, const PlaneBox& bbox, double tol) {
  AreaQuery q;
  q.t_lo = lo;
  q.t_hi = hi;
  q.bbox = bbox;
  q.tol = tol;
  return q;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ToleranceMet: return "tolerance-met";
    case Termination::BudgetExhausted: return "budget-exhausted";
    case Termination::DepthExhausted: return "depth-exhausted";
  }
  return "unknown";
}

namespace {

// Cells this close to the critical point retry with the offset form.
bool near_critical(const PlaneBox& box) {
  return box.x.lo() >= 0.5 && box.x.hi() <= 1.5 && box.y.lo() >= -0.5 && box.y.hi() <= 0.5;
}

CellClass classify(bool below_hi, bool above_hi, std::optional<bool> below_lo,
                   std::optional<bool> above_lo) {
  if (!below_lo) {
    if (below_hi) return CellClass::Inside;
    if (above_hi) return CellClass::Outside;
    return CellClass::Boundary;
  }
  if (above_hi || *below_lo) return CellClass::Outside;
  if (below_hi && *above_lo) return CellClass::Inside;
  return CellClass::Boundary;
}

}  // namespace

CellClass classify_cell(const PlaneBox& box, const std::optional<LevelThreshold>& lo,
                        const LevelThreshold& hi) {
  const PolynomialEnclosure e = enclose_polynomials(box);
  std::optional<bool> below_lo;
  std::optional<bool> above_lo;
  if (lo) {
    below_lo = all_below(e, *lo);
    above_lo = all_above(e, *lo);
  }
  const CellClass c = classify(all_below(e, hi), all_above(e, hi), below_lo, above_lo);
  if (c != CellClass::Boundary || !near_critical(box)) return c;

  // G < t  <=>  D > offset(t)
  const ScalarInterval d = enclose_offset_form(box);
  if (lo) {
    below_lo = d.lo() > lo->offset.hi();
    above_lo = d.hi() < lo->offset.lo();
  }
  return classify(d.lo() > hi.offset.hi(), d.hi() < hi.offset.lo(), below_lo, above_lo);
}

CellClass classify_cell(const PlaneBox& box, double t_lo, double t_hi, const GreenParams& p) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("band requires t_lo < t_hi");
  const LevelThreshold hi = LevelThreshold::from(Level::exact(t_hi), p);
  if (t_lo == -kInf) return classify_cell(box, std::nullopt, hi);
  return classify_cell(box, LevelThreshold::from(Level::exact(t_lo), p), hi);
}

CertifiedArea certified_area(const AreaQuery& q, const GreenParams& p) {
  if (!(q.tol > 0.0)) throw std::invalid_argument("area tolerance must be positive");
  if (q.t_lo && !(q.t_lo->t.hi() < q.t_hi.t.lo()))
    throw std::invalid_argument("band requires t_lo < t_hi");
  if (q.max_depth < 0 || q.max_depth > 60) throw std::invalid_argument("max_depth out of range");

  const LevelThreshold hi = LevelThreshold::from(q.t_hi, p);
  std::optional<LevelThreshold> lo;
  if (q.t_lo) lo = LevelThreshold::from(*q.t_lo, p);

  const double x0 = q.bbox.x.lo();
  const double y0 = q.bbox.y.lo();
  double wx = q.bbox.x.hi() - x0;
  double wy = q.bbox.y.hi() - y0;

  CertifiedArea out;
  CompensatedSum inside_area;
  std::vector<Cell> frontier{{x0, y0}};
  std::vector<CellClass> cls;
  int depth = 0;

  for (;;) {
    const double cell_area = wx * wy;  // exact: box sides are scaled by powers of two
    cls.resize(frontier.size());
    parallel_ranges(frontier.size(), q.threads, 4096, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const Cell& c = frontier[i];
        const PlaneBox box{{c.x0, c.x0 + wx}, {c.y0, c.y0 + wy}};
        cls[i] = classify_cell(box, lo, hi);
      }
    });
    out.cells_processed += frontier.size();
    out.max_depth_reached = depth;

    std::uint64_t n_inside = 0;
    std::size_t n_boundary = 0;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (cls[i] == CellClass::Inside) {
        ++n_inside;
      } else if (cls[i] == CellClass::Boundary) {
        frontier[n_boundary++] = frontier[i];
      }
    }
    frontier.resize(n_boundary);
    out.cells_inside += n_inside;
    inside_area.add(static_cast<double>(n_inside) * cell_area);
    out.cells_boundary = n_boundary;
    out.boundary_area = static_cast<double>(n_boundary) * cell_area;

    if (out.boundary_area <= q.tol) {
      out.termination = Termination::ToleranceMet;
      break;
    }
    if (out.cells_processed + 4 * static_cast<std::uint64_t>(n_boundary) > q.cell_budget) {
      out.termination = Termination::BudgetExhausted;
      break;
    }
    if (depth >= q.max_depth) {
      out.termination = Termination::DepthExhausted;
      break;
    }

    // Children of cell i land at 4i..4i+3; filling from the back never
    // overwrites a parent that has not been expanded yet.
    wx *= 0.5;
    wy *= 0.5;
    frontier.resize(4 * n_boundary);
    for (std::size_t i = n_boundary; i-- > 0;) {
      const Cell c = frontier[i];
      frontier[4 * i + 0] = {c.x0, c.y0};
      frontier[4 * i + 1] = {c.x0 + wx, c.y0};
      frontier[4 * i + 2] = {c.x0, c.y0 + wy};
      frontier[4 * i + 3] = {c.x0 + wx, c.y0 + wy};
    }
    ++depth;
  }

  const double lower = inside_area.value();
  out.lower = std::max(0.0, next_down(next_down(lower)));
  out.upper = next_up(next_up(lower + out.boundary_area));
  return out;
}

BboxCertificate verified_bbox(const GreenParams& p) {
  BboxCertificate cert;
  cert.box = PlaneBox{{-6.0, 6.0}, {-6.0, 6.0}};
  cert.min_lower_bound = kInf;
  const int n = static_cast<int>(std::lround(12.0 / cert.tile));
  auto edge = [&](int k) { return -6.0 + 12.0 * k / n; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const PlaneBox tile{{edge(i), edge(i + 1)}, {edge(j), edge(j + 1)}};
      const bool interior = tile.x.lo() >= -cert.frame_inner && tile.x.hi() <= cert.frame_inner &&
                            tile.y.lo() >= -cert.frame_inner && tile.y.hi() <= cert.frame_inner;
      if (interior) continue;
      const ScalarInterval g = eval_G_interval(tile, p);
      ++cert.tiles;
      cert.min_lower_bound = std::min(cert.min_lower_bound, g.lo());
      if (!(g.lo() > 0.0))
        throw CertificationFailed("G > 0 could not be certified on the bounding frame");
    }
  }
  return cert;
}

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

}  // namespace

PlaneBox certified_box(const GreenParams& p) {
  static std::mutex mu;
  static std::map<std::pair<bool, double>, PlaneBox> cache;
  const auto key = std::make_pair(p.is_default(), p.r());
  std::scoped_lock lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, verified_bbox(p).box).first;
  return it->second;
}

namespace {

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<std::uint64_t> monte_carlo_counts(const std::vector<double>& levels, std::uint64_t n,
                                              std::uint64_t seed, const GreenParams& p,
                                              int threads) {
  if (n < 1000) throw std::invalid_argument("Monte Carlo needs n >= 1000 samples");
  if (!std::is_sorted(levels.begin(), levels.end()))
    throw std::invalid_argument("Monte Carlo levels must be ascending");
  const PlaneBox box = certified_box(p);

  // |w|^6 < factor_j |q|^2  <=>  G < t_j
  std::vector<double> factor;
  for (double t : levels) factor.push_back(std::exp(6.0 * t - 2.0 * p.log_r()));

  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  // bins[c][j]: samples of chunk c whose first satisfied level is j
  std::vector<std::vector<std::uint64_t>> bins(n_chunks, std::vector<std::uint64_t>(levels.size() + 1, 0));
  const double x0 = box.x.lo();
  const double y0 = box.y.lo();
  const double wx = box.x.hi() - x0;
  const double wy = box.y.hi() - y0;

  parallel_ranges(n_chunks, threads, 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
      std::mt19937_64 gen(seq);
      const std::uint64_t m = std::min(kChunk, n - c * kChunk);
      for (std::uint64_t s = 0; s < m; ++s) {
        const double x = x0 + wx * uniform01(gen);
        const double y = y0 + wy * uniform01(gen);
        const double mod2 = x * x + y * y;
        const double num = mod2 * mod2 * mod2;
        const double re_q = 3.0 * (x * x - y * y) - 3.0 * x + 1.0;
        const double im_q = 3.0 * y * (2.0 * x - 1.0);
        const double den = re_q * re_q + im_q * im_q;
        std::size_t j = 0;
        while (j < factor.size() && !(num < factor[j] * den)) ++j;
        ++bins[c][j];
      }
    }
  });

  std::vector<std::uint64_t> counts(levels.size(), 0);
  for (const auto& chunk : bins) {
    std::uint64_t below = 0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      below += chunk[j];
      counts[j] += below;
    }
  }
  return counts;
}

MonteCarloEstimate monte_carlo_area(double t_lo, double t_hi, std::uint64_t n, std::uint64_t seed,
                                    const GreenParams& p, int threads) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("band requires t_lo < t_hi");
  const PlaneBox box = certified_box(p);
  std::uint64_t hits = 0;
  if (t_lo == -kInf) {
    hits = monte_carlo_counts({t_hi}, n, seed, p, threads)[0];
  } else {
    const auto c = monte_carlo_counts({t_lo, t_hi}, n, seed, p, threads);
    hits = c[1] - c[0];
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(n);
  MonteCarloEstimate est;
  est.n = n;
  est.hits = hits;
  est.seed = seed;
  est.estimate = box.area() * frac;
  est.stderr_ = box.area() * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n));
  return est;
}

}  // namespace greenlevel
