#include <cmath>

#include <gtest/gtest.h>

#include "kedim/errors.hpp"
#include "kedim/ellipsoid.hpp"
#include "kedim/random.hpp"

using namespace kedim;

namespace {

// Largest distance from a dense sample of the truncated ellipsoid (grid plus
// boundary) to the nearest center, by exhaustive search.
double brute_cover_radius(const Eigen::MatrixXd& centers, const Eigen::VectorXd& mu, int grid) {
  const auto d = mu.size();
  auto nearest = [&](const Eigen::VectorXd& x) {
    double best = 1e300;
    for (Eigen::Index c = 0; c < centers.cols(); ++c) best = std::min(best, (centers.col(c) - x).norm());
    return best;
  };
  double worst = 0.0;
  if (d == 1) {
    for (int i = 0; i <= grid; ++i) {
      Eigen::VectorXd x(1);
      x[0] = std::sqrt(mu[0]) * (-1.0 + 2.0 * i / grid);
      worst = std::max(worst, nearest(x));
    }
  } else {
    for (int i = 0; i <= grid; ++i)
      for (int j = 0; j <= grid; ++j) {
        Eigen::VectorXd y(2);
        y << -1.0 + 2.0 * i / grid, -1.0 + 2.0 * j / grid;
        if (y.squaredNorm() > 1.0) continue;
        worst = std::max(worst, nearest(y.cwiseProduct(mu.cwiseSqrt())));
      }
    for (int k = 0; k < 8 * grid; ++k) {
      double t = 2 * std::numbers::pi * k / (8 * grid);
      Eigen::VectorXd x(2);
      x << std::sqrt(mu[0]) * std::cos(t), std::sqrt(mu[1]) * std::sin(t);
      worst = std::max(worst, nearest(x));
    }
  }
  return worst;
}

}  // namespace

TEST(Cover, OneDimensionalExample) {
  auto e = Ellipsoid::power_law(1.0, 2.0);
  auto plan = build_cover(e, 0.5);
  EXPECT_EQ(plan.d, 1u);
  EXPECT_DOUBLE_EQ(plan.radius, std::sqrt(2.0) * 0.5);
  EXPECT_GE(plan.count(), 2u);
  EXPECT_LE(double(plan.count()), 3.0 * std::exp(2.0));
  EXPECT_LE(brute_cover_radius(plan.centers, e.head(1), 4000), 0.5 + 1e-9);
  auto v = verify_cover(plan, e, 100000, 1);
  EXPECT_TRUE(v.passed);
  EXPECT_LE(v.max_distance, std::sqrt(2.0) * 0.5 * (1 + 1e-12));
}

TEST(Cover, DegenerateOrigin) {
  auto e = Ellipsoid::power_law(1.0, 2.0);
  auto plan = build_cover(e, 1.0);
  EXPECT_EQ(plan.d, 0u);
  EXPECT_EQ(plan.count(), 1u);
  EXPECT_EQ(plan.strategy, CoverPlan::Strategy::Origin);
  EXPECT_DOUBLE_EQ(plan.radius, std::sqrt(2.0));
  auto v = verify_cover(plan, e, 10000, 3);
  EXPECT_TRUE(v.passed);
  EXPECT_LE(v.max_distance, 1.0 + 1e-12);
}

TEST(Cover, TwoDimensionalEllipse) {
  auto e = Ellipsoid::power_law(1.0, 1.0);
  auto plan = build_cover(e, 0.6);
  EXPECT_EQ(plan.d, 2u);
  EXPECT_LE(brute_cover_radius(plan.centers, e.head(2), 300), 0.6 + 1e-9);
  EXPECT_TRUE(verify_cover(plan, e, 100000, 11).passed);
  EXPECT_TRUE(plan.within_count_bound());
  ASSERT_TRUE(plan.slack_factor().has_value());
}

TEST(Cover, CentersInsideTruncatedEllipsoid) {
  for (double alpha : {1.0, 2.0})
    for (double eps : {0.3, 0.5}) {
      auto e = Ellipsoid::power_law(1.0, alpha);
      auto plan = build_cover(e, eps);
      auto mu = e.head(plan.d);
      for (Eigen::Index c = 0; c < plan.centers.cols(); ++c)
        EXPECT_LE(ellipsoid_gauge_sq(plan.centers.col(c), mu), 1.0 + 1e-9);
    }
}

TEST(Cover, SabotagedPlanFails) {
  auto e = Ellipsoid::power_law(1.0, 1.0);
  auto plan = build_cover(e, 0.6);
  ASSERT_GE(plan.count(), 2u);
  plan.centers = plan.centers.leftCols(1).eval();
  auto v = verify_cover(plan, e, 20000, 5);
  EXPECT_FALSE(v.passed);
  ASSERT_TRUE(v.witness_head.has_value());
  ASSERT_TRUE(v.witness_index.has_value());
  // the witness really is uncovered
  double head = (*v.witness_head - plan.centers.col(0)).squaredNorm();
  EXPECT_GT(std::sqrt(head + v.witness_tail_norm * v.witness_tail_norm), plan.radius);
}

TEST(Cover, EmptyPlanFails) {
  auto e = Ellipsoid::power_law(1.0, 2.0);
  auto plan = build_cover(e, 0.5);
  plan.centers.resize(1, 0);
  EXPECT_FALSE(verify_cover(plan, e, 100, 5).passed);
}

TEST(Cover, VerificationDeterministicAcrossJobs) {
  auto e = Ellipsoid::power_law(1.0, 1.0);
  auto plan = build_cover(e, 0.5);
  auto a = verify_cover(plan, e, 30000, 99, 1);
  auto b = verify_cover(plan, e, 30000, 99, 4);
  EXPECT_EQ(a.max_distance, b.max_distance);
  EXPECT_EQ(a.passed, b.passed);
}

TEST(Cover, DimensionCap) {
  auto e = Ellipsoid::power_law(1.0, 1.0);
  EXPECT_THROW(build_cover(e, 0.01), ConfigError);
  EXPECT_THROW(build_cover(e, 0.0), ConfigError);
}

TEST(Oracle, IntervalExact) {
  auto e = Ellipsoid::from_axes({1.0, 1e-6});
  auto b = covering_oracle(e, 0.5, 1);
  EXPECT_EQ(b.lo, 2u);
  EXPECT_EQ(b.hi, 2u);
  auto c = covering_oracle(e, 0.3, 1);
  EXPECT_EQ(c.lo, 4u);
  EXPECT_EQ(c.hi, 4u);
  for (double eps : {0.07, 0.11, 0.2, 0.45, 0.9, 1.2}) {
    auto r = covering_oracle(e, eps, 1);
    auto exact = static_cast<std::size_t>(std::ceil(1.0 / eps));
    EXPECT_EQ(r.lo, exact) << eps;
    EXPECT_EQ(r.hi, exact) << eps;
  }
}

TEST(Oracle, PlanarBracket) {
  auto e = Ellipsoid::from_axes({1.0, 0.25});
  auto b = covering_oracle(e, 0.2, 2);
  EXPECT_LE(b.lo, b.hi);
  EXPECT_GE(b.lo, 1u);
  EXPECT_EQ(b.cover_centers.cols(), Eigen::Index(b.hi));
  EXPECT_EQ(b.packing_points.cols(), Eigen::Index(b.lo));
  EXPECT_TRUE(is_two_eps_separated(b.packing_points, 0.2));
  // packing points lie in the ellipse, cover centers cover it
  Eigen::VectorXd mu(2);
  mu << 1.0, 0.25;
  for (Eigen::Index i = 0; i < b.packing_points.cols(); ++i)
    EXPECT_LE(ellipsoid_gauge_sq(b.packing_points.col(i), mu), 1.0 + 1e-12);
  EXPECT_LE(brute_cover_radius(b.cover_centers, mu, 400), 0.2 + 1e-9);
  EXPECT_LE(std::log2(double(b.lo)), entropy_upper_bound(1.0, 2.0, 0.2));
}

TEST(Oracle, SeparationCheck) {
  Eigen::MatrixXd p(1, 3);
  p << 0.0, 1.0, 2.5;
  EXPECT_TRUE(is_two_eps_separated(p, 0.49));
  EXPECT_FALSE(is_two_eps_separated(p, 0.5));
}

TEST(Oracle, PowerLawBracketsBelowTheorem) {
  auto e = Ellipsoid::power_law(1.0, 2.0);
  for (double eps : {0.5, 0.3, 0.2, 0.1}) {
    auto b = covering_oracle(e, eps, 1);
    EXPECT_EQ(b.lo, b.hi);
    EXPECT_EQ(b.lo, static_cast<std::size_t>(std::ceil(1.0 / eps)));
    EXPECT_LE(std::log2(double(b.lo)), entropy_upper_bound(1.0, 2.0, eps));
    auto b2 = covering_oracle(e, eps, 2);
    EXPECT_LE(b2.lo, b2.hi);
    EXPECT_LE(std::log2(double(b2.lo)), entropy_upper_bound(1.0, 2.0, eps));
  }
}

TEST(Oracle, RejectsBadDimension) {
  auto e = Ellipsoid::power_law(1.0, 2.0);
  EXPECT_THROW(covering_oracle(e, 0.3, 3), ConfigError);
  EXPECT_THROW(covering_oracle(e, -1.0, 1), ConfigError);
}

TEST(Sandwich, LowerBoundBelowCoverSize) {
  // box (0, pi): lambda_j = j^2 certified with c = C = 1
  auto seq = EigenSequence::power_law(1.0, 2.0, 4096);
  auto e = Ellipsoid::from_spectrum(seq);
  for (double eps : {0.3, 0.5, 1.0}) {
    auto plan = build_cover(e, eps);
    ASSERT_TRUE(verify_cover(plan, e, 20000, 2).passed);
    // the plan is a sqrt(2) eps cover, so compare at that radius
    EXPECT_LE(entropy_lower_bound(1.0, 2.0, std::sqrt(2.0) * eps), std::log2(double(plan.count())));
  }
}
