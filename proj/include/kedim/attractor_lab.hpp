#pragma once

// Numerical stand-in for the global attractor of the 1-D reaction-diffusion
// problem: post burn-in ensemble snapshots, checks of the L^2 / L^inf /
// smoothing / difference-energy inequalities on them, and a greedy
// box-counting dimension estimate of the cloud.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kedim/dimension_bounds.hpp"
#include "kedim/galerkin.hpp"
#include "kedim/spectra.hpp"

namespace kedim {

struct AttractorConfig {
  enum class Seeding {
    // Tiny data in span{w_j : lambda_j < lambda}, scaled so the linear growth
    // over the burn-in brings it to O(1): snapshots then trace the unstable
    // manifold of 0 instead of collapsing onto the stable equilibria.
    UnstableManifold,
    // Uniform in the absorbing L^2 ball (coefficient space).
    AbsorbingBall,
  };

  std::size_t ensemble_size = 64;
  double burn_in = 10.0;
  std::size_t snapshots_per_traj = 16;
  double snapshot_spacing = 0.05;
  Seeding seeding = Seeding::UnstableManifold;
  double seed_amplitude = 1.0;
  double min_burn_in = 5.0;  // in units of 1 / lambda_1

  void validate() const;
};

const char* to_string(AttractorConfig::Seeding s);

struct Tolerances {
  double l2 = 0.02;
  double linf = 0.02;
  double smoothing = 0.02;
  double energy = 1e-4;
  double lipschitz = 0.02;
};

struct AttractorSample {
  std::vector<GalerkinState> points;  // trajectory-major
  double burn_in = 0.0;
  std::size_t ensemble_size = 0;
  std::size_t snapshots_per_traj = 0;
  std::uint64_t seed = 0;
  ReactionParams params;
  DomainParams domain;
  double lambda1 = 0.0;

  Eigen::MatrixXd as_matrix() const;  // modes x points
};

AttractorSample sample_attractor(const GalerkinSolver& solver, const ReactionParams& params,
                                 const AttractorConfig& cfg, std::uint64_t seed, unsigned jobs = 1);

/// Result of checking one inequality over a sample.
struct BoundCheck {
  std::string name;
  bool passed = false;
  double bound = 0.0;
  double worst = 0.0;  // largest observed value of the checked quantity
  double tol = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::optional<std::size_t> witness;  // index of the worst point / pair
  std::string note;

  double margin() const { return bound > 0.0 ? worst / bound : 0.0; }
};

BoundCheck verify_l2_bound(const AttractorSample& sample, double tol = 0.02);
BoundCheck verify_linf_bound(const AttractorSample& sample, const GalerkinSolver& solver, double tol = 0.02);

/// Ratio ||S(t*)u - S(t*)v||_{H^1_0} / |u - v|_{L^2} on random snapshot pairs
/// against sqrt(2 lambda (1 + gamma/beta)). Throws when every pair is degenerate.
BoundCheck verify_smoothing(const AttractorSample& sample, const GalerkinSolver& solver, std::size_t pair_count,
                            std::uint64_t seed, double tol = 0.02, unsigned jobs = 1);

struct EnergyCheck {
  BoundCheck check;
  std::vector<EnergyTrace> traces;
};

/// W(t) + 2 int_0^t V <= e^{2 lambda t} W(0) (1 + tol) for random snapshot pairs.
EnergyCheck verify_energy_inequality(const AttractorSample& sample, const GalerkinSolver& solver,
                                     std::size_t pair_count, double horizon, std::uint64_t seed, double tol = 1e-4,
                                     unsigned jobs = 1);

/// Farthest-point traversal from index 0: order[k] is the k-th center and
/// radius[k] the covering radius of the first k + 1 centers (nonincreasing).
struct FarthestPointOrder {
  std::vector<Eigen::Index> order;
  std::vector<double> radius;

  /// Number of greedy centers needed for covering radius <= eps.
  std::size_t count(double eps) const;
};

FarthestPointOrder farthest_point_order(const Eigen::MatrixXd& points);

/// Distinct columns in lexicographic order; makes the greedy cover
/// independent of labeling and duplicates.
Eigen::MatrixXd canonical_points(const Eigen::MatrixXd& points);

struct BoxCountReport {
  std::vector<double> eps_grid;  // decreasing
  std::vector<std::size_t> counts;
  double slope = 0.0;
  std::pair<std::size_t, std::size_t> fit_range{0, 0};  // inclusive indices into eps_grid
  double r_squared = 0.0;
  std::size_t distinct_points = 0;
  bool degenerate = false;  // single-point cloud: dimension 0, no fit
};

/// Greedy box-counting slope of log2 N_eps against log2(1/eps), fitted where
/// 10 <= N_eps <= points / 10. An empty grid selects a geometric grid with
/// `per_decade` points per decade starting at the cloud diameter.
BoxCountReport box_counting_dimension(const Eigen::MatrixXd& points, std::vector<double> eps_grid = {},
                                      int per_decade = 12);

struct ReportOptions {
  Tolerances tolerances;
  std::size_t smoothing_pairs = 32;
  std::size_t energy_pairs = 16;
  double energy_horizon = 0.1;
};

struct BoundsSummary {
  double parabolic = 0.0;
  double elliptic = 0.0;
  double equilibria = 0.0;
  double zelik_parabolic = 0.0;
  SmoothingConstant smoothing;
  LiYauConstants li_yau;
  double l2_radius = 0.0;
  double linf_bound = 0.0;
};

/// lambda_1 of a box, or the Li-Yau lower value c when only (N, |Omega|) is known.
double first_eigenvalue(const DomainParams& domain);

BoundsSummary summarize_bounds(const DomainParams& domain, const ReactionParams& params);

struct FullReport {
  DomainParams domain;
  ReactionParams params;
  SolverConfig solver;
  AttractorConfig attractor;
  ReportOptions options;
  std::uint64_t seed = 0;

  BoundsSummary bounds;
  std::optional<AttractorSample> sample;
  std::vector<BoundCheck> checks;
  std::vector<EnergyTrace> traces;
  std::optional<BoxCountReport> boxcount;
  std::vector<std::string> failures;  // sub-step errors, recorded rather than thrown

  bool all_passed() const;
};

/// Runs the sampler, every verifier and the bound formulas. Sub-step failures
/// are recorded in `failures`; only invalid configuration throws.
FullReport full_report(const DomainParams& domain, const ReactionParams& params, const SolverConfig& solver_cfg,
                       const AttractorConfig& attractor_cfg, const ReportOptions& options, std::uint64_t seed,
                       unsigned jobs = 1);

}  // namespace kedim
