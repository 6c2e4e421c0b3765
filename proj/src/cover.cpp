#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "kedim/ellipsoid.hpp"
#include "kedim/errors.hpp"
#include "kedim/kdtree.hpp"
#include "kedim/parallel.hpp"
#include "kedim/random.hpp"
#include "kedim/special.hpp"

namespace kedim {

namespace {

// Relative slack absorbing floating-point rounding in radius comparisons.
constexpr double kRoundingSlack = 1e-12;

struct LatticeCandidates {
  Eigen::MatrixXd points;  // d x n, all inside the truncated ellipsoid
  double net_radius = 0.0;
};

double estimated_lattice_size(std::size_t d, double spacing) {
  const double dd = static_cast<double>(d);
  const double reach = 1.0 + 0.5 * spacing * std::sqrt(dd);
  return unit_ball_volume<double>(static_cast<int>(d)) * std::pow(reach / spacing, dd);
}

// Lattice spacing*Z^d in the stretched coordinates y = x / sqrt(mu), keeping
// every point whose cube intersects the unit ball; mapped back and projected
// onto the ellipsoid. Any point of the ellipsoid is within net_radius of a
// candidate: the cube half-diagonal bounds the distance to the lattice point,
// and projection onto a convex set containing the point cannot increase it.
LatticeCandidates lattice_candidates(const Eigen::VectorXd& mu, double spacing) {
  const auto d = mu.size();
  const Eigen::VectorXd sqrt_mu = mu.cwiseSqrt();
  const long reach = static_cast<long>(std::ceil(1.0 / spacing + 0.5));

  std::vector<double> flat;
  Eigen::VectorXd k(d);
  auto cube_min_sq = [&](long ki) {
    const double lo = spacing * (static_cast<double>(ki) - 0.5);
    const double hi = spacing * (static_cast<double>(ki) + 0.5);
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    const double m = std::min(std::abs(lo), std::abs(hi));
    return m * m;
  };
  auto recurse = [&](auto& self, Eigen::Index axis, double partial) -> void {
    if (axis == d) {
      Eigen::VectorXd x = (sqrt_mu.array() * k.array() * spacing).matrix();
      x = project_onto_ellipsoid(x, mu);
      flat.insert(flat.end(), x.data(), x.data() + d);
      return;
    }
    for (long ki = -reach; ki <= reach; ++ki) {
      const double next = partial + cube_min_sq(ki);
      if (next > 1.0) continue;
      k[axis] = static_cast<double>(ki);
      self(self, axis + 1, next);
    }
  };
  recurse(recurse, 0, 0.0);

  LatticeCandidates out;
  out.points = Eigen::Map<Eigen::MatrixXd>(flat.data(), d, static_cast<Eigen::Index>(flat.size()) / d);
  out.net_radius = 0.5 * spacing * std::sqrt(mu.sum());
  return out;
}

// Farthest-point traversal of the candidates, stopped once every candidate is
// within `radius` of a chosen one. Starts from the candidate closest to the
// origin; ties go to the lowest index.
Eigen::MatrixXd farthest_point_selection(const Eigen::MatrixXd& candidates, double radius,
                                         std::size_t max_centers) {
  const Eigen::Index n = candidates.cols();
  Eigen::Index start = 0;
  candidates.colwise().squaredNorm().minCoeff(&start);

  std::vector<Eigen::Index> chosen{start};
  Eigen::VectorXd dist2 = (candidates.colwise() - candidates.col(start)).colwise().squaredNorm().transpose();
  const double radius2 = radius * radius;
  while (true) {
    Eigen::Index far = 0;
    const double worst = dist2.maxCoeff(&far);
    if (worst <= radius2) break;
    if (chosen.size() >= max_centers) {
      throw ComputationError(fmt::format("build_cover: more than {} centers required", max_centers));
    }
    chosen.push_back(far);
    dist2 = dist2.cwiseMin((candidates.colwise() - candidates.col(far)).colwise().squaredNorm().transpose());
  }
  Eigen::MatrixXd centers(candidates.rows(), static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t i = 0; i < chosen.size(); ++i) centers.col(static_cast<Eigen::Index>(i)) = candidates.col(chosen[i]);
  (void)n;
  return centers;
}

// Recursive partition of the ellipsoid coordinate by coordinate. The squared
// error budget is 2 eps^2: at most eps^2 is spent on quantising head
// coordinates, the rest absorbs whatever is left unquantised. A branch stops
// as soon as all remaining coordinates (including the infinite tail) fit in
// the remaining budget: sum_{j >= k} u_j^2 <= mu_k * (remaining gauge).
class TailAwarePartition {
 public:
  TailAwarePartition(const Ellipsoid& e, std::size_t d, double eps, std::size_t max_centers)
      : d_(d), eps2_(eps * eps), max_centers_(max_centers), mu_(d + 1), center_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))) {
    for (std::size_t j = 1; j <= d + 1; ++j) mu_[j - 1] = e.mu_at(j);
  }

  Eigen::MatrixXd run() {
    recurse(0, 1.0, 2.0 * eps2_ * (1.0 - kRoundingSlack));
    return Eigen::Map<Eigen::MatrixXd>(flat_.data(), static_cast<Eigen::Index>(d_),
                                       static_cast<Eigen::Index>(count_));
  }

 private:
  void emit() {
    if (++count_ > max_centers_) {
      throw ComputationError(fmt::format("build_cover: more than {} centers required", max_centers_));
    }
    flat_.insert(flat_.end(), center_.data(), center_.data() + center_.size());
  }

  void recurse(std::size_t k, double gauge_left, double budget) {
    if (mu_[k] * gauge_left <= budget) {
      emit();
      return;
    }
    // k < d here: mu_{d+1} gauge_left <= eps^2 <= budget always terminates.
    const double half_extent = std::sqrt(mu_[k] * gauge_left);
    const double quant_left = budget - eps2_;
    std::size_t active = 0;
    for (std::size_t j = k; j < d_; ++j) {
      if (mu_[j] * gauge_left > eps2_) ++active;
    }
    const double step2 = active > 1 ? quant_left / static_cast<double>(active) : quant_left;
    const double h = std::sqrt(step2);
    const auto cells = static_cast<long>(std::ceil(half_extent / h - 1e-12));
    for (long i = 0; i < cells; ++i) {
      const double c = -half_extent + h * static_cast<double>(2 * i + 1);
      const double lo = c - h;
      const double hi = c + h;
      const double min_sq = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(lo * lo, hi * hi);
      center_[static_cast<Eigen::Index>(k)] = c;
      recurse(k + 1, std::max(0.0, gauge_left - min_sq / mu_[k]), budget - step2);
    }
    center_[static_cast<Eigen::Index>(k)] = 0.0;
  }

  std::size_t d_;
  double eps2_;
  std::size_t max_centers_;
  std::vector<double> mu_;
  Eigen::VectorXd center_;
  std::vector<double> flat_;
  std::size_t count_ = 0;
};

}  // namespace

const char* to_string(CoverPlan::Strategy s) {
  switch (s) {
    case CoverPlan::Strategy::Origin:
      return "origin";
    case CoverPlan::Strategy::LatticeFarthestPoint:
      return "lattice_farthest_point";
    case CoverPlan::Strategy::TailAwarePartition:
      return "tail_aware_partition";
  }
  return "unknown";
}

std::optional<double> CoverPlan::slack_factor() const {
  if (!volumetric_bound) return std::nullopt;
  return static_cast<double>(count()) / std::ceil(*volumetric_bound);
}

bool CoverPlan::within_count_bound() const {
  return !count_bound || static_cast<double>(count()) <= *count_bound;
}

CoverPlan build_cover(const Ellipsoid& e, double eps, const CoverOptions& options) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("build_cover: eps must be positive");
  if (options.lattice_divisions < 2) throw ConfigError("build_cover: lattice_divisions must be >= 2");
  const std::size_t d = truncation_dim(e, eps);
  if (d > options.d_max) {
    throw ConfigError(fmt::format(
        "build_cover: dimension too large for constructive cover (d = {} > d_max = {})", d, options.d_max));
  }

  CoverPlan plan;
  plan.d = d;
  plan.target_eps = eps;
  plan.radius = std::sqrt(2.0) * eps;
  if (e.kind() == Ellipsoid::Kind::PowerLaw) {
    plan.count_bound = std::exp(static_cast<double>(d) * (std::log(3.0) + *e.alpha()));
    if (d >= 1) plan.volumetric_bound = volumetric_count_bound(e, eps).product_bound;
  }

  if (d == 0) {
    // eps^2 >= mu_1: the whole ellipsoid lies in the ball of radius sqrt(mu_1) <= eps.
    plan.strategy = CoverPlan::Strategy::Origin;
    plan.centers = Eigen::MatrixXd::Zero(0, 1);
    plan.candidates = 1;
    return plan;
  }

  const Eigen::VectorXd mu = e.head(d);
  double spacing = eps / options.lattice_divisions;
  if (estimated_lattice_size(d, spacing) <= static_cast<double>(options.max_candidates)) {
    for (int refinement = 0; refinement <= options.max_refinements; ++refinement) {
      const LatticeCandidates cand = lattice_candidates(mu, spacing);
      const double select_radius = eps - cand.net_radius;
      if (select_radius > 0.0) {
        plan.strategy = CoverPlan::Strategy::LatticeFarthestPoint;
        plan.candidates = static_cast<std::size_t>(cand.points.cols());
        plan.net_radius = cand.net_radius;
        // Candidates within select_radius of a center, every point within
        // net_radius of a candidate: an eps-cover of the truncated ellipsoid.
        plan.centers = farthest_point_selection(cand.points, select_radius * (1.0 - kRoundingSlack),
                                                options.max_centers);
        return plan;
      }
      spacing *= 0.5;
      if (estimated_lattice_size(d, spacing) > static_cast<double>(options.max_candidates)) break;
    }
  }

  plan.strategy = CoverPlan::Strategy::TailAwarePartition;
  Eigen::MatrixXd centers = TailAwarePartition(e, d, eps, options.max_centers).run();
  for (Eigen::Index i = 0; i < centers.cols(); ++i) {
    centers.col(i) = project_onto_ellipsoid(centers.col(i), mu);
  }
  plan.candidates = static_cast<std::size_t>(centers.cols());
  plan.centers = std::move(centers);
  return plan;
}

CoverVerification verify_cover(const CoverPlan& plan, const Ellipsoid& e, std::size_t samples,
                               std::uint64_t seed, unsigned jobs) {
  if (samples == 0) throw ConfigError("verify_cover: samples must be >= 1");
  if (static_cast<std::size_t>(plan.centers.rows()) != plan.d) {
    throw ConfigError("verify_cover: center dimension does not match plan.d");
  }
  const Eigen::VectorXd mu = e.head(plan.d);
  const Eigen::VectorXd sqrt_mu = mu.cwiseSqrt();
  const double mu_tail = e.mu_at(plan.d + 1);
  const auto dim = static_cast<Eigen::Index>(plan.d);
  const KdTree tree(plan.centers);
  const Rng root(seed);

  struct Sample {
    double distance = 0.0;
    double tail = 0.0;
  };
  std::vector<Sample> result(samples);

  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  parallel_for(blocks, jobs, [&](std::size_t b) {
    for (std::size_t i = b * kBlock; i < std::min(samples, (b + 1) * kBlock); ++i) {
      Rng rng = root.split(i);
      Eigen::VectorXd head(dim);
      if (dim > 0) {
        // Even samples uniform in the truncated ellipsoid (linear image of the
        // uniform ball), odd samples on its boundary.
        const Eigen::VectorXd y = (i % 2 == 0) ? rng.unit_ball_point(dim) : rng.unit_sphere_point(dim);
        head = (sqrt_mu.array() * y.array()).matrix();
      }
      const double gauge = dim > 0 ? std::min(1.0, ellipsoid_gauge_sq(head, mu)) : 0.0;
      const double tail2 = mu_tail * (1.0 - gauge);
      double head2 = 0.0;
      if (tree.size() > 0) {
        head2 = dim > 0 ? tree.nearest(head).squared_distance : 0.0;
      } else {
        head2 = std::numeric_limits<double>::infinity();
      }
      result[i] = Sample{std::sqrt(head2 + tail2), std::sqrt(tail2)};
    }
  });

  CoverVerification out;
  out.samples = samples;
  out.radius = plan.radius;
  out.passed = true;
  const double limit = plan.radius * (1.0 + kRoundingSlack);
  for (std::size_t i = 0; i < samples; ++i) {
    out.max_distance = std::max(out.max_distance, result[i].distance);
    if (out.passed && !(result[i].distance <= limit)) {
      out.passed = false;
      out.witness_index = i;
      out.witness_tail_norm = result[i].tail;
      // Regenerate the witness from its stream.
      Rng rng = root.split(i);
      Eigen::VectorXd head(dim);
      if (dim > 0) {
        const Eigen::VectorXd y = (i % 2 == 0) ? rng.unit_ball_point(dim) : rng.unit_sphere_point(dim);
        head = (sqrt_mu.array() * y.array()).matrix();
      }
      out.witness_head = head;
    }
  }
  return out;
}

}  // namespace kedim
