// kedim: command-line front end.
//
//   kedim entropy   bounds and certified brackets for the covering numbers of an ellipsoid
//   kedim cover     build and verify an explicit cover (or re-verify a plan file)
//   kedim bounds    fractal-dimension bound table over a lambda sweep
//   kedim simulate  single trajectory and equilibria of the reaction-diffusion problem
//   kedim attractor attractor sample, inequality checks and box-counting slope
//   kedim report    everything above for one configuration, as one bundle
//
// Exit codes: 0 success, 1 computation or verification failure, 2 bad configuration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "kedim/attractor_lab.hpp"
#include "kedim/config.hpp"
#include "kedim/dimension_bounds.hpp"
#include "kedim/ellipsoid.hpp"
#include "kedim/errors.hpp"
#include "kedim/galerkin.hpp"
#include "kedim/parallel.hpp"
#include "kedim/report_io.hpp"
#include "kedim/spectra.hpp"

using namespace kedim;
using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> output;
};

struct Flags {
  std::optional<double> c, alpha, upper_C, lambda, beta, gamma, p, volume, T, amplitude;
  std::vector<double> eps, sweep, L;
  std::optional<int> N;
  std::optional<std::string> spectrum, verify_plan;
  std::optional<std::size_t> count, samples, modes, ensemble, mode_index, trace_every;
  std::optional<double> dt, burn_in;
  bool verify = false;
  bool no_oracle = false;
  bool equilibria = false;
};

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

unsigned jobs_of(const RunConfig& cfg) { return cfg.jobs == 0 ? default_jobs() : cfg.jobs; }

RunConfig effective_config(const Common& common, const Flags& f) {
  RunConfig cfg = common.config_path.empty() ? RunConfig{} : load_config(common.config_path);
  if (common.seed) cfg.seeds = {*common.seed};
  if (common.jobs) cfg.jobs = *common.jobs;
  if (common.output) cfg.output_dir = *common.output;

  if (f.c) cfg.entropy.c = *f.c;
  if (f.alpha) cfg.entropy.alpha = *f.alpha;
  if (f.upper_C) cfg.entropy.upper_C = *f.upper_C;
  if (!f.eps.empty()) cfg.entropy.eps = f.eps;
  if (f.count) cfg.entropy.count = *f.count;
  if (f.samples) cfg.entropy.cover_samples = *f.samples;
  if (f.no_oracle) cfg.entropy.oracle = false;
  if (f.spectrum) {
    if (*f.spectrum == "box") {
      cfg.entropy.spectrum = EntropyConfig::Spectrum::Box;
    } else if (*f.spectrum == "power_law") {
      cfg.entropy.spectrum = EntropyConfig::Spectrum::PowerLaw;
    } else {
      throw ConfigError(fmt::format("--spectrum must be 'box' or 'power_law', got '{}'", *f.spectrum));
    }
  }

  if (!f.L.empty() || f.N || f.volume) {
    const int n = f.N.value_or(f.L.empty() ? cfg.domain.dimension : static_cast<int>(f.L.size()));
    if (!f.L.empty()) {
      std::vector<double> sides = f.L;
      if (sides.size() == 1 && n > 1) sides.assign(static_cast<std::size_t>(n), f.L.front());
      if (static_cast<int>(sides.size()) != n) throw ConfigError("--L needs one value or N values");
      cfg.domain = DomainParams::box(sides);
    } else if (f.volume) {
      cfg.domain = DomainParams::general(n, *f.volume);
    } else if (cfg.domain.side_lengths && n != cfg.domain.dimension) {
      cfg.domain = DomainParams::box(std::vector<double>(static_cast<std::size_t>(n), cfg.domain.side_lengths->front()));
    } else if (!cfg.domain.side_lengths) {
      cfg.domain = DomainParams::general(n, cfg.domain.volume);
    }
  }

  const bool p_changed = f.p.has_value() || f.beta.has_value();
  if (f.lambda) cfg.reaction.lambda = *f.lambda;
  if (f.beta) cfg.reaction.beta = *f.beta;
  if (f.p) cfg.reaction.p = *f.p;
  if (f.gamma) {
    cfg.reaction.gamma = *f.gamma;
  } else if (p_changed) {
    cfg.reaction.gamma = cfg.reaction.beta * (cfg.reaction.p - 1.0);
  }
  if (!f.sweep.empty()) cfg.bounds.lambda_sweep = f.sweep;
  if (f.modes) cfg.solver.modes = *f.modes;
  if (f.dt) cfg.solver.dt = *f.dt;
  if (f.ensemble) cfg.attractor.ensemble_size = *f.ensemble;
  if (f.burn_in) cfg.attractor.burn_in = *f.burn_in;
  cfg.validate();
  return cfg;
}

GalerkinSolver make_solver(const RunConfig& cfg) {
  if (cfg.domain.dimension != 1 || !cfg.domain.side_lengths) {
    throw ConfigError("simulation runs on 1-D intervals only (domain.side_lengths = [L])");
  }
  SolverConfig s = cfg.solver;
  s.length = cfg.domain.side_lengths->front();
  return GalerkinSolver(s);
}

// ---------------------------------------------------------------- entropy

int cmd_entropy(const RunConfig& cfg) {
  const EntropyConfig& ec = cfg.entropy;
  std::optional<Ellipsoid> e;
  double c = ec.c;
  double alpha = ec.alpha;
  // A pure power law is its own upper growth: lambda_j = c j^alpha.
  std::optional<double> upper_C = ec.upper_C.value_or(ec.c);
  if (ec.spectrum == EntropyConfig::Spectrum::Box) {
    const EigenSequence seq = box_eigenvalues(cfg.domain, ec.count);
    alpha = 2.0 / cfg.domain.dimension;
    const GrowthCertificate cert = growth_certificate(seq, alpha, seq.count_available());
    c = cert.c;
    upper_C = cert.upper_C;
    e = Ellipsoid::from_spectrum(seq);
    fmt::print("spectrum: box N={} |Omega|={:.6g}, {} eigenvalues, certified c={:.10g}, C={:.10g}, alpha={:.6g}\n",
               cfg.domain.dimension, cfg.domain.volume, seq.count_available(), c, *upper_C, alpha);
  } else {
    e = Ellipsoid::power_law(c, alpha);
    fmt::print("spectrum: power law mu_j = j^-{:.6g} / {:.6g}\n", alpha, c);
  }

  std::vector<EntropyRow> rows;
  fmt::print("{:>10} {:>4} {:>14} {:>14} {:>8} {:>8}\n", "eps", "d", "upper_bits", "lower_bits", "lo", "hi");
  if (ec.oracle) fmt::print("(lo, hi bracket the covering number of the section by the first min(d, 2) axes)\n");
  for (double eps : ec.eps) {
    EntropyRow r;
    r.eps = eps;
    r.d = truncation_dim(*e, eps);
    r.upper_bits = entropy_upper_bound(c, alpha, eps);
    if (upper_C) r.lower_bits = entropy_lower_bound(*upper_C, alpha, eps);
    if (ec.oracle) {
      r.section_d = std::clamp<std::size_t>(r.d, 1, 2);
      const OracleBracket b = covering_oracle(*e, eps, *r.section_d);
      r.lo = b.lo;
      r.hi = b.hi;
    }
    fmt::print("{:>10.6g} {:>4} {:>14.8g} {:>14} {:>8} {:>8}\n", eps, r.d, r.upper_bits,
               r.lower_bits ? fmt::format("{:.8g}", *r.lower_bits) : "-", r.lo ? std::to_string(*r.lo) : "-",
               r.hi ? std::to_string(*r.hi) : "-");
    rows.push_back(r);
  }
  write_file(out_path(cfg, "entropy.csv"), entropy_csv(rows));
  return 0;
}

// ---------------------------------------------------------------- cover

int cmd_cover(const RunConfig& cfg, const std::optional<std::string>& plan_path) {
  const Ellipsoid e = cfg.entropy.spectrum == EntropyConfig::Spectrum::Box
                          ? Ellipsoid::from_spectrum(box_eigenvalues(cfg.domain, cfg.entropy.count))
                          : Ellipsoid::power_law(cfg.entropy.c, cfg.entropy.alpha);
  CoverPlan plan;
  if (plan_path) {
    std::ifstream in(*plan_path);
    if (!in) throw ConfigError(fmt::format("cannot open plan '{}'", *plan_path));
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& err) {
      throw ConfigError(fmt::format("plan '{}' is not valid JSON: {}", *plan_path, err.what()));
    }
    plan = cover_plan_from_json(doc);
  } else {
    plan = build_cover(e, cfg.entropy.eps.front(), cfg.entropy.cover);
    write_file(out_path(cfg, "cover.json"), dump(cover_plan_to_json(plan)));
  }
  const CoverVerification v = verify_cover(plan, e, cfg.entropy.cover_samples, cfg.seed(), jobs_of(cfg));
  write_file(out_path(cfg, "cover_verification.json"), dump(to_json(v)));
  fmt::print("plan: d={} centers={} strategy={} radius={:.6g}\n", plan.d, plan.count(), to_string(plan.strategy),
             plan.radius);
  if (plan.count_bound) fmt::print("count bound 3^d e^(alpha d) = {:.6g}\n", *plan.count_bound);
  fmt::print("verification: {} ({} samples, max distance {:.6g})\n", v.passed ? "pass" : "FAIL", v.samples,
             v.max_distance);
  if (!v.passed && v.witness_index) fmt::print("uncovered sample index {}\n", *v.witness_index);
  return v.passed ? 0 : 1;
}

// ---------------------------------------------------------------- bounds

int cmd_bounds(const RunConfig& cfg, bool verify) {
  std::vector<double> lambdas = cfg.bounds.lambda_sweep;
  if (lambdas.empty()) lambdas = {cfg.reaction.lambda};
  std::sort(lambdas.begin(), lambdas.end());
  const LiYauConstants ly = li_yau_constants(cfg.domain);

  std::optional<EigenSequence> seq;
  std::optional<double> upper_C;
  if (cfg.domain.side_lengths) {
    std::size_t count = 256;
    seq = box_eigenvalues(cfg.domain, count);
    while (seq->values().back() <= lambdas.back() && count < (1U << 20)) {
      count *= 4;
      seq = box_eigenvalues(cfg.domain, count);
    }
    upper_C = growth_certificate(*seq, ly.alpha, seq->count_available()).upper_C;
    write_file(out_path(cfg, "spectra.csv"), spectra_csv(*seq, cfg.domain));
  }

  std::string csv =
      "lambda,equilibria,elliptic_corollary,parabolic,zelik_parabolic,smoothing_C,t_star,optimality_formula,counted\n";
  fmt::print("{:>10} {:>14} {:>14} {:>14} {:>10} {:>8} {:>10} {:>7}\n", "lambda", "equilibria", "elliptic",
             "parabolic", "C", "t*", "N>=", "N");
  bool ok = true;
  double prev_eq = 0.0, prev_par = 0.0;
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
  for (double lam : lambdas) {
    ReactionParams rp = cfg.reaction;
    rp.lambda = lam;
    const SmoothingConstant sc = smoothing_constant_parabolic(rp);
    const double eq = equilibria_dim_bound(lam, ly.c, ly.alpha);
    const double ell = elliptic_corollary_bound(cfg.domain, lam);
    const double par = parabolic_bound(cfg.domain, rp);
    const double zel = zelik_bound(sc.C, ly.c, ly.alpha);
    std::optional<OptimalityLower> opt;
    if (seq && upper_C) opt = optimality_lower(lam, *upper_C, ly.alpha, *seq);
    csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", num(lam), num(eq), num(ell), num(par), num(zel), num(sc.C),
                       num(*sc.time_star), opt ? num(opt->formula) : "", opt ? std::to_string(opt->counted) : "");
    fmt::print("{:>10.6g} {:>14.8g} {:>14.8g} {:>14.8g} {:>10.6g} {:>8.4g} {:>10} {:>7}\n", lam, eq, ell, par, sc.C,
               *sc.time_star, opt ? fmt::format("{:.4f}", opt->formula) : "-",
               opt ? std::to_string(opt->counted) : "-");
    if (verify) {
      std::vector<std::string> bad;
      if (!close(eq, zelik_bound(equilibrium_lipschitz_constant(lam), ly.c, ly.alpha))) bad.push_back("equilibria != zelik(sqrt(lambda))");
      if (!close(ell, eq)) bad.push_back("elliptic != equilibria o li_yau");
      if (!close(par, zel)) bad.push_back("parabolic != zelik(smoothing C)");
      if (eq < prev_eq || par < prev_par) bad.push_back("not monotone in lambda");
      if (opt && static_cast<double>(opt->counted) < opt->formula) bad.push_back("N(lambda) below (lambda/C)^(1/alpha) - 1");
      if (opt && static_cast<double>(opt->counted) >= eq) bad.push_back("N(lambda) not below the equilibria bound");
      for (const auto& b : bad) fmt::print("  verify FAIL at lambda={}: {}\n", lam, b);
      ok = ok && bad.empty();
    }
    prev_eq = eq;
    prev_par = par;
  }
  write_file(out_path(cfg, "bounds.csv"), csv);
  if (verify) fmt::print("verify: {}\n", ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- simulate

json equilibria_section(const RunConfig& cfg, const GalerkinSolver& solver, bool write_states) {
  const Nonlinearity nl = Nonlinearity::power_law(cfg.reaction.beta, cfg.reaction.p);
  const double lam = cfg.reaction.lambda;
  const auto n = static_cast<std::size_t>((solver.eigenvalues().array() < lam).count());
  const EquilibriaSearch es =
      solver.find_equilibria(nl, lam, n, {0.1, 1.0, attractor_linf_bound(cfg.reaction)}, jobs_of(cfg));
  const EquilibriumLipschitzReport lip =
      verify_equilibrium_lipschitz(solver, es.equilibria, lam, cfg.report.tolerances.lipschitz);
  std::string csv = "index,L2,Linf,H1,residual,residual_2M\n";
  for (std::size_t k = 0; k < es.equilibria.size(); ++k) {
    const Eigen::VectorXd& u = es.equilibria[k].coeffs;
    csv += fmt::format("{},{},{},{},{},{}\n", k, num(solver.l2(u)), num(solver.linf(u)), num(solver.h1(u)),
                       num(es.residuals[k]), num(es.residuals_double[k]));
    if (write_states) write_file(out_path(cfg, fmt::format("equilibrium_{:02}.csv", k)), state_csv(es.equilibria[k]));
  }
  write_file(out_path(cfg, "equilibria.csv"), csv);
  const double worst_res = es.residuals.empty() ? 0.0 : *std::max_element(es.residuals.begin(), es.residuals.end());
  return {{"count", es.equilibria.size()},
          {"counting_function", n},
          {"expected_at_least", 2 * n + 1},
          {"seeds_tried", es.seeds_tried},
          {"seeds_failed", es.seeds_failed},
          {"worst_residual", worst_res},
          {"lipschitz_worst_ratio", lip.worst_ratio},
          {"lipschitz_bound", lip.bound},
          {"lipschitz_passed", lip.passed}};
}

int cmd_simulate(const RunConfig& cfg, const Flags& f) {
  const GalerkinSolver solver = make_solver(cfg);
  const Nonlinearity nl = Nonlinearity::power_law(cfg.reaction.beta, cfg.reaction.p);
  const double T = f.T.value_or(10.0);
  if (!(T > 0.0)) throw ConfigError("--T must be positive");
  const GalerkinState u0 = solver.mode(f.mode_index.value_or(1), f.amplitude.value_or(0.1));
  const std::size_t every = f.trace_every.value_or(10);
  const EnergyTrace trace = solver.difference_energy_trace(u0, solver.zero(), nl, cfg.reaction.lambda, T, every);
  const GalerkinState uT = solver.evolve(u0, nl, cfg.reaction.lambda, T);
  write_file(out_path(cfg, "trace_u.csv"), trace_csv(trace));
  write_file(out_path(cfg, "state_initial.csv"), state_csv(u0));
  write_file(out_path(cfg, "state_final.csv"), state_csv(uT));
  json summary = {{"config", to_json(cfg)},
                  {"T", T},
                  {"final", {{"L2", solver.l2(uT.coeffs)}, {"Linf", solver.linf(uT.coeffs)}, {"H1", solver.h1(uT.coeffs)}}},
                  {"linf_bound", attractor_linf_bound(cfg.reaction)}};
  fmt::print("S({})u0: |u|_L2={:.10g} |u|_inf={:.10g} (bound {:.10g})\n", T, solver.l2(uT.coeffs),
             solver.linf(uT.coeffs), attractor_linf_bound(cfg.reaction));
  bool ok = true;
  if (f.equilibria) {
    summary["equilibria"] = equilibria_section(cfg, solver, true);
    const json& eq = summary["equilibria"];
    fmt::print("equilibria: {} found (2N(lambda)+1 = {}), worst residual {:.3e}, Lipschitz ratio {:.6g} <= {:.6g}: {}\n",
               eq["count"].get<std::size_t>(), eq["expected_at_least"].get<std::size_t>(),
               eq["worst_residual"].get<double>(), eq["lipschitz_worst_ratio"].get<double>(),
               eq["lipschitz_bound"].get<double>(), eq["lipschitz_passed"].get<bool>() ? "pass" : "FAIL");
    ok = eq["lipschitz_passed"].get<bool>();
  }
  write_file(out_path(cfg, "simulate.json"), dump(summary));
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- attractor / report

void print_checks(const FullReport& rep) {
  for (const auto& c : rep.checks) {
    fmt::print("{:<18} {:<4} worst {:<12.6g} bound {:<12.6g} tol {:g} {}\n", c.name, c.passed ? "pass" : "FAIL",
               c.worst, c.bound, c.tol, c.note);
  }
  if (rep.boxcount) {
    fmt::print("box-counting slope {:.6g} (r2 {:.4f}, fit {}..{}, {} distinct points{})\n", rep.boxcount->slope,
               rep.boxcount->r_squared, rep.boxcount->fit_range.first, rep.boxcount->fit_range.second,
               rep.boxcount->distinct_points, rep.boxcount->degenerate ? ", degenerate" : "");
  }
  fmt::print("parabolic bound {:.10g}\n", rep.bounds.parabolic);
  for (const auto& f : rep.failures) fmt::print("failure: {}\n", f);
}

FullReport run_full(const RunConfig& cfg) {
  return full_report(cfg.domain, cfg.reaction, cfg.solver, cfg.attractor, cfg.report, cfg.seed(), jobs_of(cfg));
}

int cmd_attractor(const RunConfig& cfg) {
  const FullReport rep = run_full(cfg);
  const GalerkinSolver solver = make_solver(cfg);
  if (rep.sample) write_file(out_path(cfg, "cloud.csv"), cloud_csv(*rep.sample, solver));
  if (rep.boxcount) {
    write_file(out_path(cfg, "boxcount.csv"), boxcount_csv(*rep.boxcount));
    write_file(out_path(cfg, "boxcount.svg"), boxcount_svg(*rep.boxcount, rep.bounds.parabolic));
  }
  write_file(out_path(cfg, "attractor.json"), dump(report_json(rep, to_json(cfg))));
  print_checks(rep);
  return rep.all_passed() ? 0 : 1;
}

int cmd_report(const RunConfig& cfg) {
  const FullReport rep = run_full(cfg);
  const GalerkinSolver solver = make_solver(cfg);
  json doc = report_json(rep, to_json(cfg));
  bool ok = rep.all_passed();
  if (rep.sample) write_file(out_path(cfg, "cloud.csv"), cloud_csv(*rep.sample, solver));
  if (rep.boxcount) {
    write_file(out_path(cfg, "boxcount.csv"), boxcount_csv(*rep.boxcount));
    write_file(out_path(cfg, "boxcount.svg"), boxcount_svg(*rep.boxcount, rep.bounds.parabolic));
  }
  for (std::size_t k = 0; k < rep.traces.size(); ++k) {
    write_file(out_path(cfg, fmt::format("trace_{:02}.csv", k)), trace_csv(rep.traces[k]));
  }
  try {
    doc["equilibria"] = equilibria_section(cfg, solver, false);
    ok = ok && doc["equilibria"]["lipschitz_passed"].get<bool>();
  } catch (const ComputationError& e) {
    doc["failures"].push_back(fmt::format("equilibria: {}", e.what()));
    ok = false;
  }
  cmd_bounds(cfg, false);
  doc["all_passed"] = ok;
  write_file(out_path(cfg, "report.json"), dump(doc));
  print_checks(rep);
  fmt::print("report: {}\n", ok ? "all checks pass" : "FAILURES");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy and fractal-dimension bounds for ellipsoids and reaction-diffusion attractors"};
  app.require_subcommand(1);
  Common common;
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "root random seed");
    sub->add_option("--jobs", common.jobs, "worker threads (default: all cores)");
    sub->add_option("--output", common.output, "output directory");
  };
  auto add_domain = [&](CLI::App* sub) {
    sub->add_option("--N", f.N, "space dimension");
    sub->add_option("--L", f.L, "box side length(s)")->delimiter(',');
    sub->add_option("--volume", f.volume, "domain volume (no exact spectrum)");
  };
  auto add_reaction = [&](CLI::App* sub) {
    sub->add_option("--lambda", f.lambda);
    sub->add_option("--beta", f.beta);
    sub->add_option("--gamma", f.gamma);
    sub->add_option("--p", f.p);
  };
  auto add_entropy = [&](CLI::App* sub) {
    sub->add_option("--c", f.c, "growth constant c of lambda_j >= c j^alpha");
    sub->add_option("--alpha", f.alpha, "growth exponent alpha");
    sub->add_option("--upper-C", f.upper_C, "upper growth constant (enables the lower bound)");
    sub->add_option("--eps", f.eps, "radii")->delimiter(',');
    sub->add_option("--spectrum", f.spectrum, "power_law | box");
    sub->add_option("--count", f.count, "eigenvalues computed for --spectrum box");
    add_domain(sub);
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--modes", f.modes);
    sub->add_option("--dt", f.dt);
  };

  CLI::App* entropy = app.add_subcommand("entropy", "entropy bounds and covering-number brackets");
  add_common(entropy);
  add_entropy(entropy);
  entropy->add_flag("--no-oracle", f.no_oracle, "skip the certified brackets");

  CLI::App* cover = app.add_subcommand("cover", "build and verify an explicit cover");
  add_common(cover);
  add_entropy(cover);
  cover->add_option("--samples", f.samples, "verification samples");
  cover->add_option("--verify-plan", f.verify_plan, "re-verify an existing cover.json")->check(CLI::ExistingFile);

  CLI::App* bounds = app.add_subcommand("bounds", "fractal-dimension bound table");
  add_common(bounds);
  add_domain(bounds);
  add_reaction(bounds);
  bounds->add_option("--sweep", f.sweep, "lambda values")->delimiter(',');
  bounds->add_flag("--verify", f.verify, "check the composition identities");

  CLI::App* simulate = app.add_subcommand("simulate", "one trajectory, optionally all equilibria");
  add_common(simulate);
  add_domain(simulate);
  add_reaction(simulate);
  add_solver(simulate);
  simulate->add_option("--T", f.T, "final time");
  simulate->add_option("--mode", f.mode_index, "initial datum a * w_j: j");
  simulate->add_option("--amplitude", f.amplitude, "initial datum a * w_j: a");
  simulate->add_option("--trace-every", f.trace_every, "record every k steps");
  simulate->add_flag("--equilibria", f.equilibria, "multi-start Newton for equilibria");

  CLI::App* attractor = app.add_subcommand("attractor", "attractor sample and inequality checks");
  CLI::App* report = app.add_subcommand("report", "full bundle: report.json, CSV, SVG");
  for (CLI::App* sub : {attractor, report}) {
    add_common(sub);
    add_domain(sub);
    add_reaction(sub);
    add_solver(sub);
    sub->add_option("--ensemble", f.ensemble);
    sub->add_option("--burn-in", f.burn_in);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = effective_config(common, f);
    if (*entropy) return cmd_entropy(cfg);
    if (*cover) return cmd_cover(cfg, f.verify_plan);
    if (*bounds) return cmd_bounds(cfg, f.verify);
    if (*simulate) return cmd_simulate(cfg, f);
    if (*attractor) return cmd_attractor(cfg);
    if (*report) return cmd_report(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
