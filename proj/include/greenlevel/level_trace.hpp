#pragma once

// Level curves {G = t} by predictor-corrector continuation, and the sublevel
// area s(t) and its derivative s'(t) computed from them.
//
// Traversal follows the gradient rotated by +90 degrees, which keeps
// {G < t} on the left: outer boundaries of the sublevel set come out
// counter-clockwise (positive signed area) and holes clockwise.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenlevel/green.hpp"

namespace greenlevel {

struct TraceOptions {
  double tau_on = 1e-12;        // on-curve residual |G - t|
  double theta_max = 0.2;       // max turning angle per step (rad)
  double step_min = 1e-7;
  double step_max = 0.05;
  std::size_t max_steps = 200'000;
  double grad_min = 1e-9;       // below this the curve is treated as near-critical
  double closure_tol = 1e-9;
  int grid_n = 512;
  double delta_crit = 1e-9;     // level_measure refuses |t - t0| < delta_crit
  double orientation_probe = 1e-6;
  int threads = 1;
};

enum class TraceErrorKind { Stalled, MaxStepsExceeded, NoSeedsFound, NearCritical, BadSeed };
std::string to_string(TraceErrorKind k);

class TraceError : public std::runtime_error {
 public:
  TraceError(TraceErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  TraceErrorKind kind() const { return kind_; }

 private:
  TraceErrorKind kind_;
};

struct LevelSetComponent {
  std::vector<ComplexPoint> vertices;  // closed curves repeat the first vertex at the end
  std::vector<ComplexPoint> tangents;  // unit tangent at each vertex
  bool closed = false;
  double signed_area = 0.0;
  double arclength = 0.0;
  double min_grad = 0.0;
  double coarea = 0.0;        // integral of ds / |grad G|
  double area_error = 0.0;    // step-halving estimates
  double coarea_error = 0.0;
};

struct LevelMeasure {
  double t = 0.0;
  double area = 0.0;
  double dArea_dt = 0.0;
  std::size_t n_components = 0;
  double error_estimate = 0.0;        // on area
  double slope_error_estimate = 0.0;  // on dArea_dt
  std::string engine = "trace";
  std::vector<LevelSetComponent> components;
};

// On-curve points covering every component, from sign changes of G - t on a
// grid_n x grid_n grid. Levels below -2 are searched in a box scaled to the
// radius exp(t - t0) of the curve around the pole.
std::vector<ComplexPoint> find_seeds(double t, int grid_n, const GreenParams& p,
                                     const TraceOptions& opts = {});

LevelSetComponent trace_component(const ComplexPoint& seed, double t, const GreenParams& p,
                                  const TraceOptions& opts = {});

LevelMeasure level_measure(double t, const GreenParams& p, const TraceOptions& opts = {});

struct ProfileEntry {
  double t = 0.0;
  std::optional<LevelMeasure> measure;
  std::string error;  // set when measure is empty
};

// One entry per level; failures are recorded and the sweep continues.
std::vector<ProfileEntry> area_profile(const std::vector<double>& t_list, const GreenParams& p,
                                       const TraceOptions& opts = {});

}  // namespace greenlevel
