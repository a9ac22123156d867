#pragma once

// Certified areas of sublevel sets {G < t} and bands {t_lo < G < t_hi}.
//
// The bounding box is split into a quadtree, level by level. A cell is
// Inside when the interval enclosure of G over the whole cell lies in the
// band, Outside when it misses the band, and Boundary otherwise; only
// Boundary cells are refined. Inside cells sum to a lower bound and
// Inside + Boundary to an upper bound on the true area.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenlevel/green.hpp"
#include "greenlevel/interval.hpp"

namespace greenlevel {

enum class CellClass : std::uint8_t { Inside, Outside, Boundary };

// A level threshold t, carried as an enclosure of its exact value so that
// thresholds like (1/3) log r can be used without decimal truncation.
struct Level {
  ScalarInterval t;

  static Level exact(double v) { return {ScalarInterval(v)}; }
  static Level critical(const GreenParams& p) { return {p.critical_value_enclosure()}; }
  // t0 + offset, enclosed.
  static Level critical_plus(const GreenParams& p, double offset) {
    return {p.critical_value_enclosure() + offset};
  }
  double value() const { return t.mid(); }
};

// factor = exp(6t - 2 log r): G < t holds exactly where |w|^6 < T |q(w)|^2.
// offset = exp(-6(t - t0)) - 1: near w = 1 the same test reads
// enclose_offset_form(box) > offset.
struct LevelThreshold {
  ScalarInterval factor;
  ScalarInterval offset;
  static LevelThreshold from(const Level& level, const GreenParams& p);
};

struct AreaQuery {
  std::optional<Level> t_lo;  // empty: plain sublevel query (t_lo = -inf)
  Level t_hi;
  PlaneBox bbox;
  double tol = 1e-5;
  int max_depth = 40;
  std::uint64_t cell_budget = 20'000'000;
  int threads = 1;

  static AreaQuery sublevel(const Level& t, const PlaneBox& bbox, double tol = 1e-5);
  static AreaQuery band(const Level& lo, const Level& hi, const PlaneBox& bbox, double tol = 1e-6);
};

enum class Termination { ToleranceMet, BudgetExhausted, DepthExhausted };
std::string to_string(Termination t);

struct CertifiedArea {
  double lower = 0.0;
  double upper = 0.0;
  double boundary_area = 0.0;  // total area of Boundary cells left at termination
  std::uint64_t cells_inside = 0;
  std::uint64_t cells_boundary = 0;
  std::uint64_t cells_processed = 0;
  int max_depth_reached = 0;
  bool certified = true;  // outward rounding throughout; false never happens today
  Termination termination = Termination::ToleranceMet;

  bool tolerance_met() const { return termination == Termination::ToleranceMet; }
  double width() const { return upper - lower; }
  double mid() const { return 0.5 * (lower + upper); }
};

CellClass classify_cell(const PlaneBox& box, const std::optional<LevelThreshold>& lo,
                        const LevelThreshold& hi);
// Convenience overload with plain thresholds; t_lo = -inf gives a sublevel
// query. Throws std::invalid_argument unless t_lo < t_hi.
CellClass classify_cell(const PlaneBox& box, double t_lo, double t_hi, const GreenParams& p);

CertifiedArea certified_area(const AreaQuery& q, const GreenParams& p);

class CertificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The fixed box [-6, 6]^2 together with the evidence that it contains every
// sublevel set {G < t}, t < 0: G > 0 on a frame of tiles surrounding the
// origin, and every component of {G < t} contains the pole.
struct BboxCertificate {
  PlaneBox box;
  double frame_inner = 5.5;  // frame is { frame_inner <= max(|x|, |y|) <= 6 }
  double tile = 0.05;
  std::uint64_t tiles = 0;
  double min_lower_bound = 0.0;  // smallest certified lower bound of G over the tiles
};
BboxCertificate verified_bbox(const GreenParams& p);

// verified_bbox(p).box, certified once per radius and cached.
PlaneBox certified_box(const GreenParams& p);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
};

// Uniform sampling of the verified box. Deterministic in (n, seed); the
// thread count only changes speed.
MonteCarloEstimate monte_carlo_area(double t_lo, double t_hi, std::uint64_t n, std::uint64_t seed,
                                    const GreenParams& p, int threads = 1);

// For ascending levels t_1 < ... < t_k, the number of samples with G < t_j.
// Nested sublevel sets make these counts sufficient for any linear
// combination of the k areas.
std::vector<std::uint64_t> monte_carlo_counts(const std::vector<double>& levels, std::uint64_t n,
                                              std::uint64_t seed, const GreenParams& p,
                                              int threads = 1);

}  // namespace greenlevel
