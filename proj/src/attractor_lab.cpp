#include "kedim/attractor_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "kedim/errors.hpp"
#include "kedim/parallel.hpp"
#include "kedim/random.hpp"

namespace kedim {

namespace {

// Cap on the exponent used to shrink unstable-manifold seeds (keeps them
// representable).
constexpr double kMaxShrinkExponent = 600.0;

std::vector<std::pair<std::size_t, std::size_t>> random_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n < 2) throw ComputationError("need at least 2 snapshots to draw pairs");
  Rng rng(seed);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    auto j = static_cast<std::size_t>(rng.below(n - 1));
    if (j >= i) ++j;
    pairs.emplace_back(i, j);
  }
  return pairs;
}

}  // namespace

void AttractorConfig::validate() const {
  if (ensemble_size == 0) throw ConfigError("attractor: ensemble_size must be >= 1");
  if (snapshots_per_traj == 0) throw ConfigError("attractor: snapshots_per_traj must be >= 1");
  if (!(burn_in > 0.0) || !std::isfinite(burn_in)) throw ConfigError("attractor: burn_in must be positive");
  if (!(snapshot_spacing >= 0.0) || !std::isfinite(snapshot_spacing)) {
    throw ConfigError("attractor: snapshot_spacing must be nonnegative");
  }
  if (!(seed_amplitude > 0.0)) throw ConfigError("attractor: seed_amplitude must be positive");
  if (!(min_burn_in >= 0.0)) throw ConfigError("attractor: min_burn_in must be nonnegative");
}

const char* to_string(AttractorConfig::Seeding s) {
  return s == AttractorConfig::Seeding::UnstableManifold ? "unstable_manifold" : "absorbing_ball";
}

Eigen::MatrixXd AttractorSample::as_matrix() const {
  if (points.empty()) return {};
  Eigen::MatrixXd m(points.front().coeffs.size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = points[k].coeffs;
  return m;
}

AttractorSample sample_attractor(const GalerkinSolver& solver, const ReactionParams& params,
                                 const AttractorConfig& cfg, std::uint64_t seed, unsigned jobs) {
  params.validate();
  cfg.validate();
  const Eigen::VectorXd& lam = solver.eigenvalues();
  const double lambda1 = lam[0];
  if (cfg.burn_in < cfg.min_burn_in / lambda1) {
    throw ConfigError(fmt::format("attractor: burn_in {} below the floor {} / lambda_1", cfg.burn_in, cfg.min_burn_in));
  }
  const Nonlinearity nl = Nonlinearity::power_law(params.beta, params.p);
  const auto m = static_cast<Eigen::Index>(solver.modes());
  const auto unstable = static_cast<Eigen::Index>((lam.array() < params.lambda).count());
  const double shrink = std::exp(-std::min((params.lambda - lambda1) * cfg.burn_in, kMaxShrinkExponent));
  const double ball = std::sqrt(attractor_l2_radius_sq(params, solver.config().length, lambda1));

  std::vector<std::vector<GalerkinState>> per_traj(cfg.ensemble_size);
  const Rng root(seed);
  parallel_for(cfg.ensemble_size, jobs, [&](std::size_t i) {
    Rng rng = root.split(i);
    GalerkinState u = solver.zero();
    if (cfg.seeding == AttractorConfig::Seeding::UnstableManifold) {
      if (unstable > 0) {
        const Eigen::VectorXd dir = rng.unit_sphere_point(unstable);
        u.coeffs.head(unstable) = (cfg.seed_amplitude * rng.uniform() * shrink) * dir;
      }
    } else {
      u.coeffs = ball * rng.unit_ball_point(m);
    }
    try {
      u = solver.evolve(u, nl, params.lambda, cfg.burn_in);
      auto& out = per_traj[i];
      out.push_back(u);
      for (std::size_t k = 1; k < cfg.snapshots_per_traj; ++k) {
        if (cfg.snapshot_spacing > 0.0) u = solver.evolve(u, nl, params.lambda, cfg.snapshot_spacing);
        out.push_back(u);
      }
    } catch (const DivergenceError& e) {
      throw DivergenceError(fmt::format("trajectory {} (seed {}): {}", i, seed, e.what()));
    } catch (const NumericError& e) {
      throw NumericError(fmt::format("trajectory {} (seed {}): {}", i, seed, e.what()));
    }
  });

  AttractorSample sample;
  sample.burn_in = cfg.burn_in;
  sample.ensemble_size = cfg.ensemble_size;
  sample.snapshots_per_traj = cfg.snapshots_per_traj;
  sample.seed = seed;
  sample.params = params;
  sample.domain = DomainParams::interval(solver.config().length);
  sample.lambda1 = lambda1;
  for (auto& traj : per_traj) {
    for (auto& s : traj) sample.points.push_back(std::move(s));
  }
  return sample;
}

BoundCheck verify_l2_bound(const AttractorSample& sample, double tol) {
  if (sample.points.empty()) throw ComputationError("verify_l2_bound: empty sample");
  BoundCheck c;
  c.name = "l2_bound";
  c.tol = tol;
  c.bound = std::sqrt(attractor_l2_radius_sq(sample.params, sample.domain.volume, sample.lambda1));
  for (std::size_t k = 0; k < sample.points.size(); ++k) {
    const double v = sample.points[k].coeffs.norm();
    if (!c.witness || v > c.worst) {
      c.worst = v;
      c.witness = k;
    }
  }
  c.checked = sample.points.size();
  c.passed = c.worst <= c.bound * (1.0 + tol);
  return c;
}

BoundCheck verify_linf_bound(const AttractorSample& sample, const GalerkinSolver& solver, double tol) {
  if (sample.points.empty()) throw ComputationError("verify_linf_bound: empty sample");
  BoundCheck c;
  c.name = "linf_bound";
  c.tol = tol;
  c.bound = attractor_linf_bound(sample.params);
  for (std::size_t k = 0; k < sample.points.size(); ++k) {
    const double v = solver.linf(sample.points[k].coeffs);
    if (!c.witness || v > c.worst) {
      c.worst = v;
      c.witness = k;
    }
  }
  c.checked = sample.points.size();
  c.passed = c.worst <= c.bound * (1.0 + tol);
  return c;
}

BoundCheck verify_smoothing(const AttractorSample& sample, const GalerkinSolver& solver, std::size_t pair_count,
                            std::uint64_t seed, double tol, unsigned jobs) {
  const auto pairs = random_pairs(sample.points.size(), pair_count, seed);
  const Nonlinearity nl = Nonlinearity::power_law(sample.params.beta, sample.params.p);
  std::vector<double> ratio(pairs.size(), -1.0);
  parallel_for(pairs.size(), jobs, [&](std::size_t k) {
    const auto& u = sample.points[pairs[k].first];
    const auto& v = sample.points[pairs[k].second];
    if ((u.coeffs - v.coeffs).norm() == 0.0) return;
    ratio[k] = solver.smoothing_ratio(u, v, nl, sample.params);
  });

  BoundCheck c;
  c.name = "smoothing";
  c.tol = tol;
  c.bound = smoothing_constant_parabolic(sample.params).C;
  for (std::size_t k = 0; k < ratio.size(); ++k) {
    if (ratio[k] < 0.0) {
      ++c.skipped;
      continue;
    }
    ++c.checked;
    if (!c.witness || ratio[k] > c.worst) {
      c.worst = ratio[k];
      c.witness = k;
    }
  }
  if (c.checked == 0) throw ComputationError("verify_smoothing: every sampled pair is degenerate");
  if (c.skipped > 0) c.note = fmt::format("{} degenerate pairs skipped", c.skipped);
  c.passed = c.worst <= c.bound * (1.0 + tol);
  return c;
}

EnergyCheck verify_energy_inequality(const AttractorSample& sample, const GalerkinSolver& solver,
                                     std::size_t pair_count, double horizon, std::uint64_t seed, double tol,
                                     unsigned jobs) {
  const auto pairs = random_pairs(sample.points.size(), pair_count, seed);
  const Nonlinearity nl = Nonlinearity::power_law(sample.params.beta, sample.params.p);
  EnergyCheck out;
  out.traces.resize(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t k) {
    out.traces[k] = solver.difference_energy_trace(sample.points[pairs[k].first], sample.points[pairs[k].second], nl,
                                                   sample.params.lambda, horizon);
  });
  BoundCheck& c = out.check;
  c.name = "energy_inequality";
  c.tol = tol;
  c.bound = 1.0;  // worst is max_t (W + 2 int V) / (e^{2 lambda t} W(0))
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double r = out.traces[k].worst_energy_ratio(sample.params.lambda);
    ++c.checked;
    if (!c.witness || r > c.worst) {
      c.worst = r;
      c.witness = k;
    }
  }
  c.passed = c.worst <= 1.0 + tol;
  return out;
}

std::size_t FarthestPointOrder::count(double eps) const {
  const auto it = std::find_if(radius.begin(), radius.end(), [&](double r) { return r <= eps; });
  return it == radius.end() ? radius.size() : static_cast<std::size_t>(it - radius.begin()) + 1;
}

FarthestPointOrder farthest_point_order(const Eigen::MatrixXd& points) {
  FarthestPointOrder out;
  const Eigen::Index n = points.cols();
  if (n == 0) return out;
  Eigen::VectorXd dist = (points.colwise() - points.col(0)).colwise().squaredNorm().transpose();
  out.order.push_back(0);
  while (true) {
    Eigen::Index far = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (dist[i] > dist[far]) far = i;
    }
    out.radius.push_back(std::sqrt(dist[far]));
    if (dist[far] == 0.0) break;
    out.order.push_back(far);
    dist = dist.cwiseMin((points.colwise() - points.col(far)).colwise().squaredNorm().transpose());
  }
  return out;
}

Eigen::MatrixXd canonical_points(const Eigen::MatrixXd& points) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(points.cols()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Eigen::Index>(i);
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    const double* pa = points.col(a).data();
    const double* pb = points.col(b).data();
    return std::lexicographical_compare(pa, pa + points.rows(), pb, pb + points.rows());
  };
  std::sort(idx.begin(), idx.end(), less);
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](Eigen::Index a, Eigen::Index b) { return points.col(a) == points.col(b); }),
            idx.end());
  Eigen::MatrixXd out(points.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = points.col(idx[k]);
  return out;
}

BoxCountReport box_counting_dimension(const Eigen::MatrixXd& points, std::vector<double> eps_grid, int per_decade) {
  if (points.cols() < 100) throw ConfigError("box_counting_dimension: need at least 100 points");
  if (per_decade < 1) throw ConfigError("box_counting_dimension: per_decade must be >= 1");
  for (double e : eps_grid) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("box_counting_dimension: eps values must be positive");
  }
  const Eigen::MatrixXd pts = canonical_points(points);
  const FarthestPointOrder fp = farthest_point_order(pts);

  BoxCountReport rep;
  rep.distinct_points = static_cast<std::size_t>(pts.cols());
  const double reach = fp.radius.front();
  if (rep.distinct_points == 1) {
    rep.degenerate = true;
    if (eps_grid.empty()) eps_grid = {1.0};
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
    rep.eps_grid = eps_grid;
    rep.counts.assign(eps_grid.size(), 1);
    rep.r_squared = 1.0;
    return rep;
  }

  const double upper = static_cast<double>(rep.distinct_points) / 10.0;
  if (eps_grid.empty()) {
    for (int k = 0;; ++k) {
      const double eps = 2.0 * reach * std::pow(10.0, -static_cast<double>(k) / per_decade);
      eps_grid.push_back(eps);
      if (static_cast<double>(fp.count(eps)) > upper || eps < 1e-12 * reach) break;
    }
  }
  std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
  rep.eps_grid = eps_grid;
  for (double e : eps_grid) rep.counts.push_back(fp.count(e));

  std::vector<std::size_t> admissible;
  for (std::size_t k = 0; k < rep.counts.size(); ++k) {
    const auto n = static_cast<double>(rep.counts[k]);
    if (n >= 10.0 && n <= upper) admissible.push_back(k);
  }
  if (admissible.size() < 3) {
    throw ComputationError(fmt::format(
        "box_counting_dimension: only {} eps values with 10 <= N_eps <= {:.0f}; enlarge the ensemble",
        admissible.size(), upper));
  }
  rep.fit_range = {admissible.front(), admissible.back()};

  double sx = 0.0, sy = 0.0;
  const auto n = static_cast<double>(admissible.size());
  for (std::size_t k : admissible) {
    sx += std::log2(1.0 / rep.eps_grid[k]);
    sy += std::log2(static_cast<double>(rep.counts[k]));
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k : admissible) {
    const double dx = std::log2(1.0 / rep.eps_grid[k]) - mx;
    const double dy = std::log2(static_cast<double>(rep.counts[k])) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  rep.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  rep.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return rep;
}

double first_eigenvalue(const DomainParams& domain) {
  domain.validate();
  if (domain.side_lengths) {
    double s = 0.0;
    for (double L : *domain.side_lengths) s += 1.0 / (L * L);
    return std::numbers::pi * std::numbers::pi * s;
  }
  return li_yau_constants(domain).c;
}

BoundsSummary summarize_bounds(const DomainParams& domain, const ReactionParams& params) {
  BoundsSummary b;
  b.li_yau = li_yau_constants(domain);
  b.smoothing = smoothing_constant_parabolic(params);
  b.parabolic = parabolic_bound(domain, params);
  b.elliptic = elliptic_corollary_bound(domain, params.lambda);
  b.equilibria = equilibria_dim_bound(params.lambda, b.li_yau.c, b.li_yau.alpha);
  b.zelik_parabolic = zelik_bound(b.smoothing.C, b.li_yau.c, b.li_yau.alpha);
  b.l2_radius = std::sqrt(attractor_l2_radius_sq(params, domain.volume, first_eigenvalue(domain)));
  b.linf_bound = attractor_linf_bound(params);
  return b;
}

bool FullReport::all_passed() const {
  return failures.empty() && std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.passed; });
}

FullReport full_report(const DomainParams& domain, const ReactionParams& params, const SolverConfig& solver_cfg,
                       const AttractorConfig& attractor_cfg, const ReportOptions& options, std::uint64_t seed,
                       unsigned jobs) {
  domain.validate();
  params.validate();
  attractor_cfg.validate();
  if (domain.dimension != 1 || !domain.side_lengths) {
    throw ConfigError("simulation runs on 1-D intervals only (domain.N = 1 with side_lengths)");
  }
  SolverConfig cfg = solver_cfg;
  cfg.length = domain.side_lengths->front();
  cfg.validate();

  FullReport rep;
  rep.domain = domain;
  rep.params = params;
  rep.solver = cfg;
  rep.attractor = attractor_cfg;
  rep.options = options;
  rep.seed = seed;
  rep.bounds = summarize_bounds(domain, params);

  const GalerkinSolver solver(cfg);
  const Tolerances& tol = options.tolerances;
  try {
    rep.sample = sample_attractor(solver, params, attractor_cfg, Rng(seed).split(0).seed(), jobs);
  } catch (const ComputationError& e) {
    rep.failures.push_back(fmt::format("sample_attractor: {}", e.what()));
    return rep;
  }
  const AttractorSample& sample = *rep.sample;
  rep.checks.push_back(verify_l2_bound(sample, tol.l2));
  rep.checks.push_back(verify_linf_bound(sample, solver, tol.linf));

  const bool single_point = canonical_points(sample.as_matrix()).cols() == 1;
  try {
    rep.checks.push_back(verify_smoothing(sample, solver, options.smoothing_pairs, Rng(seed).split(1).seed(),
                                          tol.smoothing, jobs));
  } catch (const ComputationError& e) {
    if (single_point) {
      BoundCheck c;
      c.name = "smoothing";
      c.passed = true;
      c.tol = tol.smoothing;
      c.bound = rep.bounds.smoothing.C;
      c.skipped = options.smoothing_pairs;
      c.note = "vacuous: the sample is a single point";
      rep.checks.push_back(c);
    } else {
      rep.failures.push_back(fmt::format("verify_smoothing: {}", e.what()));
    }
  }
  try {
    EnergyCheck ec = verify_energy_inequality(sample, solver, options.energy_pairs, options.energy_horizon,
                                              Rng(seed).split(2).seed(), tol.energy, jobs);
    rep.checks.push_back(ec.check);
    rep.traces = std::move(ec.traces);
  } catch (const ComputationError& e) {
    rep.failures.push_back(fmt::format("verify_energy_inequality: {}", e.what()));
  }
  try {
    rep.boxcount = box_counting_dimension(sample.as_matrix());
    BoundCheck c;
    c.name = "dimension_upper";
    c.bound = rep.bounds.parabolic;
    c.worst = rep.boxcount->slope;
    c.checked = 1;
    c.passed = c.worst < c.bound;
    rep.checks.push_back(c);
  } catch (const std::exception& e) {
    rep.failures.push_back(fmt::format("box_counting_dimension: {}", e.what()));
  }
  return rep;
}

}  // namespace kedim
