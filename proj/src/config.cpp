#include "kedim/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

#include <fmt/format.h>

#include "kedim/errors.hpp"

namespace kedim {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(fmt::format("config: '{}' must be an object", section));
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(fmt::format("config: unknown key '{}.{}'", section, item.key()));
  }
}

template <typename T>
void take(const json& obj, const char* key, T& out, const std::string& section) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config: '{}.{}' has the wrong type ({})", section, key, e.what()));
  }
}

SolverConfig::Integrator parse_integrator(const std::string& s) {
  if (s == "imex_euler") return SolverConfig::Integrator::ImexEuler;
  if (s == "etdrk2") return SolverConfig::Integrator::Etdrk2;
  throw ConfigError(fmt::format("config: unknown integrator '{}' (imex_euler | etdrk2)", s));
}

AttractorConfig::Seeding parse_seeding(const std::string& s) {
  if (s == "unstable_manifold") return AttractorConfig::Seeding::UnstableManifold;
  if (s == "absorbing_ball") return AttractorConfig::Seeding::AbsorbingBall;
  throw ConfigError(fmt::format("config: unknown seeding '{}' (unstable_manifold | absorbing_ball)", s));
}

EntropyConfig::Spectrum parse_spectrum(const std::string& s) {
  if (s == "power_law") return EntropyConfig::Spectrum::PowerLaw;
  if (s == "box") return EntropyConfig::Spectrum::Box;
  throw ConfigError(fmt::format("config: unknown spectrum '{}' (power_law | box)", s));
}

}  // namespace

void RunConfig::validate() const {
  domain.validate();
  reaction.validate();
  solver.validate();
  attractor.validate();
  if (seeds.empty()) throw ConfigError("config: seeds must not be empty");
  if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
  if (!(entropy.c > 0.0) || !(entropy.alpha > 0.0)) throw ConfigError("config: entropy.c and entropy.alpha must be positive");
  if (entropy.upper_C && !(*entropy.upper_C > 0.0)) throw ConfigError("config: entropy.upper_C must be positive");
  if (entropy.eps.empty()) throw ConfigError("config: entropy.eps must not be empty");
  for (double e : entropy.eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError(fmt::format("config: entropy.eps value {} must be positive", e));
  }
  if (entropy.count == 0) throw ConfigError("config: entropy.count must be >= 1");
  if (entropy.cover_samples == 0) throw ConfigError("config: entropy.cover_samples must be >= 1");
  for (double l : bounds.lambda_sweep) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("config: bounds.lambda_sweep values must be positive");
  }
  const Tolerances& t = report.tolerances;
  for (double v : {t.l2, t.linf, t.smoothing, t.energy, t.lipschitz}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("config: tolerances must be nonnegative");
  }
  if (!(report.energy_horizon > 0.0)) throw ConfigError("config: attractor.energy_horizon must be positive");
}

RunConfig parse_config(const json& doc, RunConfig cfg) {
  check_keys(doc, "<root>",
             {"domain", "reaction", "solver", "entropy", "attractor", "bounds", "tolerances", "seeds", "output_dir",
              "jobs"});

  if (doc.contains("domain")) {
    const json& d = doc["domain"];
    check_keys(d, "domain", {"N", "volume", "side_lengths"});
    if (d.contains("side_lengths")) {
      std::vector<double> sides;
      take(d, "side_lengths", sides, "domain");
      cfg.domain = DomainParams::box(sides);
      if (d.contains("N") && d["N"].get<int>() != cfg.domain.dimension) {
        throw ConfigError("config: domain.N disagrees with side_lengths");
      }
      if (d.contains("volume") && std::abs(d["volume"].get<double>() - cfg.domain.volume) > 1e-12 * cfg.domain.volume) {
        throw ConfigError("config: domain.volume disagrees with side_lengths");
      }
    } else if (d.contains("N") || d.contains("volume")) {
      if (!d.contains("N") || !d.contains("volume")) {
        throw ConfigError("config: domain needs side_lengths, or both N and volume");
      }
      int n = 0;
      double vol = 0.0;
      take(d, "N", n, "domain");
      take(d, "volume", vol, "domain");
      cfg.domain = DomainParams::general(n, vol);
    }
  }

  if (doc.contains("reaction")) {
    const json& r = doc["reaction"];
    check_keys(r, "reaction", {"lambda", "beta", "gamma", "p"});
    take(r, "lambda", cfg.reaction.lambda, "reaction");
    take(r, "beta", cfg.reaction.beta, "reaction");
    take(r, "p", cfg.reaction.p, "reaction");
    if (r.contains("gamma")) {
      take(r, "gamma", cfg.reaction.gamma, "reaction");
    } else {
      cfg.reaction.gamma = cfg.reaction.beta * (cfg.reaction.p - 1.0);
    }
  }

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    check_keys(s, "solver", {"modes", "dt", "quadrature_nodes", "integrator", "newton_tol", "newton_max_iter"});
    take(s, "modes", cfg.solver.modes, "solver");
    take(s, "dt", cfg.solver.dt, "solver");
    take(s, "quadrature_nodes", cfg.solver.quadrature_nodes, "solver");
    take(s, "newton_tol", cfg.solver.newton_tol, "solver");
    take(s, "newton_max_iter", cfg.solver.newton_max_iter, "solver");
    if (s.contains("integrator")) {
      std::string name;
      take(s, "integrator", name, "solver");
      cfg.solver.integrator = parse_integrator(name);
    }
  }

  if (doc.contains("entropy")) {
    const json& e = doc["entropy"];
    check_keys(e, "entropy",
               {"spectrum", "c", "alpha", "upper_C", "eps", "count", "oracle", "cover_samples", "d_max",
                "max_candidates", "max_centers"});
    if (e.contains("spectrum")) {
      std::string name;
      take(e, "spectrum", name, "entropy");
      cfg.entropy.spectrum = parse_spectrum(name);
    }
    take(e, "c", cfg.entropy.c, "entropy");
    take(e, "alpha", cfg.entropy.alpha, "entropy");
    if (e.contains("upper_C")) {
      double C = 0.0;
      take(e, "upper_C", C, "entropy");
      cfg.entropy.upper_C = C;
    }
    take(e, "eps", cfg.entropy.eps, "entropy");
    take(e, "count", cfg.entropy.count, "entropy");
    take(e, "oracle", cfg.entropy.oracle, "entropy");
    take(e, "cover_samples", cfg.entropy.cover_samples, "entropy");
    take(e, "d_max", cfg.entropy.cover.d_max, "entropy");
    take(e, "max_candidates", cfg.entropy.cover.max_candidates, "entropy");
    take(e, "max_centers", cfg.entropy.cover.max_centers, "entropy");
  }

  if (doc.contains("attractor")) {
    const json& a = doc["attractor"];
    check_keys(a, "attractor",
               {"ensemble_size", "burn_in", "snapshots_per_traj", "snapshot_spacing", "seeding", "seed_amplitude",
                "min_burn_in", "smoothing_pairs", "energy_pairs", "energy_horizon"});
    take(a, "ensemble_size", cfg.attractor.ensemble_size, "attractor");
    take(a, "burn_in", cfg.attractor.burn_in, "attractor");
    take(a, "snapshots_per_traj", cfg.attractor.snapshots_per_traj, "attractor");
    take(a, "snapshot_spacing", cfg.attractor.snapshot_spacing, "attractor");
    take(a, "seed_amplitude", cfg.attractor.seed_amplitude, "attractor");
    take(a, "min_burn_in", cfg.attractor.min_burn_in, "attractor");
    take(a, "smoothing_pairs", cfg.report.smoothing_pairs, "attractor");
    take(a, "energy_pairs", cfg.report.energy_pairs, "attractor");
    take(a, "energy_horizon", cfg.report.energy_horizon, "attractor");
    if (a.contains("seeding")) {
      std::string name;
      take(a, "seeding", name, "attractor");
      cfg.attractor.seeding = parse_seeding(name);
    }
  }

  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    check_keys(b, "bounds", {"lambda_sweep"});
    take(b, "lambda_sweep", cfg.bounds.lambda_sweep, "bounds");
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    check_keys(t, "tolerances", {"l2", "linf", "smoothing", "energy", "lipschitz"});
    take(t, "l2", cfg.report.tolerances.l2, "tolerances");
    take(t, "linf", cfg.report.tolerances.linf, "tolerances");
    take(t, "smoothing", cfg.report.tolerances.smoothing, "tolerances");
    take(t, "energy", cfg.report.tolerances.energy, "tolerances");
    take(t, "lipschitz", cfg.report.tolerances.lipschitz, "tolerances");
  }

  take(doc, "seeds", cfg.seeds, "<root>");
  take(doc, "output_dir", cfg.output_dir, "<root>");
  take(doc, "jobs", cfg.jobs, "<root>");
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path));
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config: '{}' is not valid JSON: {}", path, e.what()));
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["domain"] = {{"N", cfg.domain.dimension}, {"volume", cfg.domain.volume}};
  if (cfg.domain.side_lengths) j["domain"]["side_lengths"] = *cfg.domain.side_lengths;
  j["reaction"] = {{"lambda", cfg.reaction.lambda},
                   {"beta", cfg.reaction.beta},
                   {"gamma", cfg.reaction.gamma},
                   {"p", cfg.reaction.p}};
  j["solver"] = {{"modes", cfg.solver.modes},
                 {"dt", cfg.solver.dt},
                 {"quadrature_nodes", cfg.solver.nodes()},
                 {"integrator", to_string(cfg.solver.integrator)},
                 {"newton_tol", cfg.solver.newton_tol},
                 {"newton_max_iter", cfg.solver.newton_max_iter}};
  j["entropy"] = {{"spectrum", cfg.entropy.spectrum == EntropyConfig::Spectrum::Box ? "box" : "power_law"},
                  {"c", cfg.entropy.c},
                  {"alpha", cfg.entropy.alpha},
                  {"eps", cfg.entropy.eps},
                  {"count", cfg.entropy.count},
                  {"oracle", cfg.entropy.oracle},
                  {"cover_samples", cfg.entropy.cover_samples},
                  {"d_max", cfg.entropy.cover.d_max},
                  {"max_candidates", cfg.entropy.cover.max_candidates},
                  {"max_centers", cfg.entropy.cover.max_centers}};
  if (cfg.entropy.upper_C) j["entropy"]["upper_C"] = *cfg.entropy.upper_C;
  j["attractor"] = {{"ensemble_size", cfg.attractor.ensemble_size},
                    {"burn_in", cfg.attractor.burn_in},
                    {"snapshots_per_traj", cfg.attractor.snapshots_per_traj},
                    {"snapshot_spacing", cfg.attractor.snapshot_spacing},
                    {"seeding", to_string(cfg.attractor.seeding)},
                    {"seed_amplitude", cfg.attractor.seed_amplitude},
                    {"min_burn_in", cfg.attractor.min_burn_in},
                    {"smoothing_pairs", cfg.report.smoothing_pairs},
                    {"energy_pairs", cfg.report.energy_pairs},
                    {"energy_horizon", cfg.report.energy_horizon}};
  j["bounds"] = {{"lambda_sweep", cfg.bounds.lambda_sweep}};
  const Tolerances& t = cfg.report.tolerances;
  j["tolerances"] = {
      {"l2", t.l2}, {"linf", t.linf}, {"smoothing", t.smoothing}, {"energy", t.energy}, {"lipschitz", t.lipschitz}};
  j["seeds"] = cfg.seeds;
  j["output_dir"] = cfg.output_dir;
  j["jobs"] = cfg.jobs;
  return j;
}

}  // namespace kedim
