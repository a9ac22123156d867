#pragma once

// Serialization of results and the verification driver shared by the CLI
// and the Python module.
//
// JSON reports have the shape
//   { "check": ..., "status": "pass"|"fail"|"inconclusive",
//     "margins": {...}, "config": {...}, "details": {...},
//     "version": ..., "wall_clock_s": ... }
// and every number is written with 17 significant digits. Only
// "wall_clock_s" varies between identical runs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenlevel/analysis.hpp"
#include "greenlevel/level_trace.hpp"
#include "greenlevel/region_area.hpp"

namespace greenlevel {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::optional<double> r;  // empty: default e^(-1/3)
  std::optional<double> tol;
  int max_depth = 40;
  std::uint64_t cell_budget = 20'000'000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;  // empty: standard output
  int threads = 1;  // speed only; deliberately not serialized

  GreenParams params() const;
  AreaSettings area_settings(double default_tol) const;
};

Json to_json(const RunConfig& c);
Json to_json(const CertifiedArea& a);
Json to_json(const MonteCarloEstimate& e);
Json to_json(const LevelMeasure& m);
Json to_json(const Lemma1Report& r);
Json to_json(const SectorReport& r);
Json to_json(const CorollaryReport& r);
Json to_json(const ConvexityViolation& v);
Json to_json(const SlopeReport& r);
Json to_json(const SecantSearchResult& r);

// Writes JSON with every number at 17 significant digits; non-finite numbers
// become the strings "inf", "-inf" and "nan".
std::string dump_json(const Json& j, int indent = 2);

std::string format_number(double v);

// Parses "a+bi", "a-bi", "a", "bi" (no spaces).
std::optional<ComplexPoint> parse_complex(const std::string& s);
// Parses a level: a decimal number or the token "t0", optionally followed by
// a signed decimal offset ("t0-1e-3").
std::optional<Level> parse_level(const std::string& s, const GreenParams& p);

struct SweepRow {
  double t = 0.0;
  std::optional<double> area_lower;
  std::optional<double> area_upper;
  std::optional<double> area_est;
  std::optional<double> ds_dt;
  std::optional<std::size_t> n_components;
  std::string engine;
};
std::string csv_header();
std::string csv_row(const SweepRow& row);

enum class VerifyTarget { Lemma1, Lemma2, Corollary, Nonconvexity, All };
std::optional<VerifyTarget> parse_verify_target(const std::string& s);

struct VerifyOptions {
  std::vector<double> eps;  // empty: per-check defaults
  std::uint64_t sector_samples = 10'000;
  std::uint64_t mc_samples = 10'000'000;
  double delta = 0.05;
};

// Runs one check (or all) and returns the report without "wall_clock_s".
Json run_verify(VerifyTarget which, const RunConfig& cfg, const VerifyOptions& opts = {});

CheckStatus status_of(const Json& report);
int exit_code(CheckStatus s);

}  // namespace greenlevel
