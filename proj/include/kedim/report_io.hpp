#pragma once

// Serialization of run artifacts: CSV tables, JSON reports, cover plans and
// the native SVG log-log plot. Numbers are printed with 17 significant digits
// so reruns with the same seed are byte-identical.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kedim/attractor_lab.hpp"
#include "kedim/ellipsoid.hpp"
#include "kedim/galerkin.hpp"
#include "kedim/spectra.hpp"

namespace kedim {

std::string num(double v);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& content);

std::string spectra_csv(const EigenSequence& seq, const DomainParams& domain);
std::string state_csv(const GalerkinState& state);
std::string trace_csv(const EnergyTrace& trace);
std::string cloud_csv(const AttractorSample& sample, const GalerkinSolver& solver);
std::string boxcount_csv(const BoxCountReport& rep);
std::string boxcount_svg(const BoxCountReport& rep, double bound);

struct EntropyRow {
  double eps = 0.0;
  std::size_t d = 0;
  double upper_bits = 0.0;
  std::optional<double> lower_bits;
  // Bracket for the section of the ellipsoid by its first section_d axes;
  // lo is also a lower bound for the full ellipsoid.
  std::optional<std::size_t> section_d;
  std::optional<std::size_t> lo;
  std::optional<std::size_t> hi;
};

std::string entropy_csv(const std::vector<EntropyRow>& rows);

nlohmann::json to_json(const BoundCheck& c);
nlohmann::json to_json(const BoxCountReport& rep);
nlohmann::json to_json(const BoundsSummary& b);
nlohmann::json to_json(const CoverVerification& v);

nlohmann::json cover_plan_to_json(const CoverPlan& plan);
/// Reads a plan written by cover_plan_to_json; ConfigError when malformed.
CoverPlan cover_plan_from_json(const nlohmann::json& doc);

/// report.json body; `config` is the effective configuration echo.
nlohmann::json report_json(const FullReport& rep, const nlohmann::json& config);

/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
std::string dump(const nlohmann::json& doc);

}  // namespace kedim
