#pragma once

// Run configuration shared by every CLI subcommand. The file format is JSON
// with one object per section; unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kedim/attractor_lab.hpp"
#include "kedim/dimension_bounds.hpp"
#include "kedim/ellipsoid.hpp"
#include "kedim/galerkin.hpp"
#include "kedim/spectra.hpp"

namespace kedim {

struct EntropyConfig {
  enum class Spectrum { PowerLaw, Box };

  Spectrum spectrum = Spectrum::PowerLaw;
  double c = 1.0;
  double alpha = 1.0;
  std::optional<double> upper_C;  // lower bound needs lambda_j <= C j^alpha
  std::vector<double> eps{1.0, 0.5, 0.3, 0.2, 0.1};
  std::size_t count = 4096;  // eigenvalues computed for Spectrum::Box
  bool oracle = true;        // certified brackets when d <= 2
  std::size_t cover_samples = 100'000;
  CoverOptions cover;
};

struct BoundsConfig {
  std::vector<double> lambda_sweep;  // empty: the reaction lambda only
};

struct RunConfig {
  DomainParams domain = DomainParams::interval(std::numbers::pi);
  ReactionParams reaction;
  SolverConfig solver;
  EntropyConfig entropy;
  AttractorConfig attractor;
  ReportOptions report;  // pair counts, energy horizon and tolerances
  BoundsConfig bounds;
  std::vector<std::uint64_t> seeds{20240611};
  std::string output_dir = "out";
  unsigned jobs = 0;  // 0: all available cores

  std::uint64_t seed() const { return seeds.front(); }
  void validate() const;
};

/// Overlays `doc` onto `base`; throws ConfigError on unknown keys, wrong
/// types or invalid values.
RunConfig parse_config(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_config(const std::string& path);

/// Full effective configuration, as echoed into report.json.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace kedim
