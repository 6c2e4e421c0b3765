#pragma once

// Kolmogorov epsilon-entropy of the ellipsoid { u : sum_j u_j^2 / mu_j <= 1 }
// in l^2: closed-form upper/lower bounds, constructive covers and certified
// covering-number brackets in low dimension.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kedim/spectra.hpp"

namespace kedim {

/// Semi-axes squared mu_1 >= mu_2 >= ... > 0.
class Ellipsoid {
 public:
  enum class Kind { PowerLaw, FromSpectrum, Explicit };

  /// mu_j = c^{-1} j^{-alpha}, the unit ball of W = { sum c j^alpha u_j^2 < inf }.
  static Ellipsoid power_law(double c, double alpha);
  /// mu_j = 1 / lambda_j, the unit ball of V expressed in the eigenbasis.
  static Ellipsoid from_spectrum(const EigenSequence& seq);
  static Ellipsoid from_axes(std::vector<double> mu);

  Kind kind() const noexcept { return kind_; }
  /// mu_j (1-based); nullopt beyond the known axes of a finite description.
  std::optional<double> mu(std::size_t j) const;
  /// mu_j or BoundsError.
  double mu_at(std::size_t j) const;
  /// Number of known axes; SIZE_MAX for power laws.
  std::size_t known_axes() const noexcept;

  // Power-law parameters (only for Kind::PowerLaw).
  std::optional<double> c() const noexcept { return c_; }
  std::optional<double> alpha() const noexcept { return alpha_; }

  /// First d semi-axes squared as a vector.
  Eigen::VectorXd head(std::size_t d) const;

 private:
  Ellipsoid() = default;

  Kind kind_ = Kind::Explicit;
  std::vector<double> mu_;
  std::optional<double> c_;
  std::optional<double> alpha_;
};

/// Upper bound in bits: ((ln 3 + alpha) / ln 2) (2 / (c eps^2))^{1/alpha}.
/// Depends on (c, eps) only through c eps^2.
template <typename Scalar>
Scalar entropy_upper_bound(Scalar c, Scalar alpha, Scalar eps) {
  const Scalar scaled = c * eps * eps;
  return ((std::log(Scalar(3)) + alpha) / std::numbers::ln2_v<Scalar>) *
         std::pow(Scalar(2) / scaled, Scalar(1) / alpha);
}

/// Lower bound in bits, valid under lambda_j <= C j^alpha:
/// (1 / (4 C eps^2))^{1/alpha} - 1. Negative values are vacuous.
template <typename Scalar>
Scalar entropy_lower_bound(Scalar upper_C, Scalar alpha, Scalar eps) {
  return std::pow(Scalar(1) / (Scalar(4) * upper_C * eps * eps), Scalar(1) / alpha) - Scalar(1);
}

/// Smallest d >= 0 with mu_{d+1} <= eps^2.
std::size_t truncation_dim(const Ellipsoid& e, double eps);

struct VolumetricBound {
  std::size_t d = 0;
  double product_bound = 0.0;  // (3 / eps)^d prod_{j <= d} sqrt(mu_j)
  double relaxed_bound = 0.0;  // 3^d e^{alpha d}
};

/// Packing-volume bound on N_eps of the truncated ellipsoid. Requires a
/// power-law ellipsoid and eps^2 < mu_d (so d >= 1).
VolumetricBound volumetric_count_bound(const Ellipsoid& e, double eps);

/// Explicit cover of the full ellipsoid. Centers are columns of `centers`
/// (d rows) and live in the truncated ellipsoid; every point of the ellipsoid
/// is within `radius` = sqrt(2) eps of some center.
struct CoverPlan {
  enum class Strategy { Origin, LatticeFarthestPoint, TailAwarePartition };

  std::size_t d = 0;
  double radius = 0.0;
  double target_eps = 0.0;
  Eigen::MatrixXd centers;  // d x count
  Strategy strategy = Strategy::Origin;
  // Construction diagnostics.
  std::size_t candidates = 0;
  double net_radius = 0.0;  // lattice covering radius, farthest-point strategy
  std::optional<double> count_bound;       // 3^d e^{alpha d} for power laws
  std::optional<double> volumetric_bound;  // (3/eps)^d prod sqrt(mu_j) when defined

  std::size_t count() const noexcept { return static_cast<std::size_t>(centers.cols()); }
  /// count / ceil(volumetric_bound), the construction slack.
  std::optional<double> slack_factor() const;
  bool within_count_bound() const;
};

const char* to_string(CoverPlan::Strategy s);

struct CoverOptions {
  std::size_t d_max = 12;
  int lattice_divisions = 8;          // candidate spacing eps / divisions
  std::size_t max_candidates = 250'000;
  std::size_t max_centers = 3'000'000;
  int max_refinements = 4;
};

CoverPlan build_cover(const Ellipsoid& e, double eps, const CoverOptions& options = {});

struct CoverVerification {
  bool passed = false;
  std::size_t samples = 0;
  double radius = 0.0;
  double max_distance = 0.0;
  std::optional<Eigen::VectorXd> witness_head;  // first uncovered sample (head coordinates)
  double witness_tail_norm = 0.0;
  std::optional<std::size_t> witness_index;
};

/// Samples the ellipsoid (half uniform in the truncated ellipsoid, half on its
/// boundary) with the tail coordinates pushed to their extreme admissible norm
/// sqrt(mu_{d+1} (1 - sum_{j<=d} u_j^2/mu_j)), and checks every sample is
/// within plan.radius of a center. Deterministic in `seed`; `jobs` only
/// changes scheduling.
CoverVerification verify_cover(const CoverPlan& plan, const Ellipsoid& e, std::size_t samples,
                               std::uint64_t seed, unsigned jobs = 1);

/// Certified bracket lo <= N_eps(E_d) <= hi for the d-dimensional truncation
/// (d in {1, 2}).
struct OracleBracket {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t d = 0;
  double eps = 0.0;
  int refinement_levels = 0;
  bool refinement_capped = false;  // finer lattices were still improving when the cap hit
  Eigen::MatrixXd cover_centers;   // d x hi
  Eigen::MatrixXd packing_points;  // d x lo, pairwise distance > 2 eps
};

OracleBracket covering_oracle(const Ellipsoid& e, double eps, std::size_t d);

/// Independent certificate checks used by the oracle and by tests.
bool is_two_eps_separated(const Eigen::MatrixXd& points, double eps);

struct EntropyReport {
  double eps = 0.0;
  double upper_bits = 0.0;
  std::optional<double> lower_bits;
  std::optional<std::pair<std::size_t, std::size_t>> oracle_bracket;
};

/// Euclidean projection of x onto { y : sum y_j^2 / mu_j <= 1 }.
Eigen::VectorXd project_onto_ellipsoid(const Eigen::VectorXd& x, const Eigen::VectorXd& mu);

/// sum_j x_j^2 / mu_j
inline double ellipsoid_gauge_sq(const Eigen::VectorXd& x, const Eigen::VectorXd& mu) {
  return (x.array().square() / mu.array()).sum();
}

}  // namespace kedim
