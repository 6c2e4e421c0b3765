#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "kedim/errors.hpp"
#include "kedim/attractor_lab.hpp"
#include "kedim/random.hpp"

using namespace kedim;

namespace {

constexpr double kPi = std::numbers::pi;

AttractorConfig small_cfg() {
  AttractorConfig c;
  c.ensemble_size = 8;
  c.burn_in = 6.0;
  return c;
}

// Minimal number of eps-balls (centers anywhere) covering a finite set on a
// line: sweep left to right.
std::size_t min_cover_1d(std::vector<double> x, double eps) {
  std::sort(x.begin(), x.end());
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < x.size()) {
    ++n;
    double reach = x[i] + 2 * eps;
    while (i < x.size() && x[i] <= reach) ++i;
  }
  return n;
}

}  // namespace

TEST(Sample, DeterministicAndOnGrid) {
  GalerkinSolver s{SolverConfig{}};
  auto params = ReactionParams::canonical(10.0, 1.0, 4.0);
  auto a = sample_attractor(s, params, small_cfg(), 77, 1);
  auto b = sample_attractor(s, params, small_cfg(), 77, 4);
  ASSERT_EQ(a.points.size(), 8u * 16u);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].coeffs, b.points[i].coeffs);
    EXPECT_GE(a.points[i].time, 6.0);
  }
  auto c = sample_attractor(s, params, small_cfg(), 78, 1);
  EXPECT_NE(a.points[0].coeffs, c.points[0].coeffs);
}

TEST(Sample, BurnInFloor) {
  GalerkinSolver s{SolverConfig{}};
  auto cfg = small_cfg();
  cfg.burn_in = 1.0;
  EXPECT_THROW(sample_attractor(s, ReactionParams::canonical(10.0, 1.0, 4.0), cfg, 1), ConfigError);
}

TEST(Sample, BelowFirstEigenvalueCollapses) {
  GalerkinSolver s{SolverConfig{}};
  auto params = ReactionParams::canonical(0.5, 1.0, 4.0);
  for (auto seeding : {AttractorConfig::Seeding::UnstableManifold, AttractorConfig::Seeding::AbsorbingBall}) {
    auto cfg = small_cfg();
    cfg.seeding = seeding;
    cfg.burn_in = 10.0;
    auto sample = sample_attractor(s, params, cfg, 5);
    double worst = 0;
    for (const auto& p : sample.points) worst = std::max(worst, p.coeffs.norm());
    EXPECT_LE(worst, 1e-2) << to_string(seeding);
    auto l2 = verify_l2_bound(sample);
    EXPECT_TRUE(l2.passed);
  }
}

TEST(Verifiers, DeskChecksPass) {
  GalerkinSolver s{SolverConfig{}};
  auto params = ReactionParams::canonical(10.0, 1.0, 4.0);
  auto sample = sample_attractor(s, params, small_cfg(), 3, 4);
  auto l2 = verify_l2_bound(sample);
  EXPECT_TRUE(l2.passed);
  EXPECT_NEAR(l2.bound, std::sqrt(25 * kPi), 1e-12);
  double worst = 0;
  for (const auto& p : sample.points) worst = std::max(worst, p.coeffs.norm());
  EXPECT_DOUBLE_EQ(l2.worst, worst);

  auto linf = verify_linf_bound(sample, s);
  EXPECT_TRUE(linf.passed);
  EXPECT_NEAR(linf.bound, std::sqrt(10.0), 1e-14);
  EXPECT_GT(linf.worst, 0.5);

  auto sm = verify_smoothing(sample, s, 8, 11, 0.02, 4);
  EXPECT_TRUE(sm.passed);
  EXPECT_NEAR(sm.bound, std::sqrt(80.0), 1e-12);
  EXPECT_LT(sm.worst, sm.bound);
  EXPECT_LT(sm.margin(), 1.0);

  auto en = verify_energy_inequality(sample, s, 4, 0.1, 12, 1e-4, 4);
  EXPECT_TRUE(en.check.passed);
  EXPECT_EQ(en.traces.size(), 4u);
}

TEST(Verifiers, ViolationIsReported) {
  GalerkinSolver s{SolverConfig{}};
  auto params = ReactionParams::canonical(10.0, 1.0, 4.0);
  auto sample = sample_attractor(s, params, small_cfg(), 3);
  sample.points[5].coeffs[0] = 20.0;
  auto l2 = verify_l2_bound(sample);
  EXPECT_FALSE(l2.passed);
  ASSERT_TRUE(l2.witness.has_value());
  EXPECT_EQ(*l2.witness, 5u);
  EXPECT_FALSE(verify_linf_bound(sample, s).passed);
}

TEST(Verifiers, SmoothingAllDegenerateThrows) {
  GalerkinSolver s{SolverConfig{}};
  AttractorSample sample;
  sample.params = ReactionParams::canonical(10.0, 1.0, 4.0);
  sample.domain = DomainParams::interval(kPi);
  sample.lambda1 = 1.0;
  for (int i = 0; i < 4; ++i) sample.points.push_back(s.mode(1, 1.0));
  EXPECT_THROW(verify_smoothing(sample, s, 5, 1), ComputationError);
}

TEST(BoxCount, SinglePointHasDimensionZero) {
  Eigen::MatrixXd pts = Eigen::VectorXd::LinSpaced(5, 0.1, 0.5).replicate(1, 200);
  auto rep = box_counting_dimension(pts);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_EQ(rep.distinct_points, 1u);
  EXPECT_NEAR(rep.slope, 0.0, 1e-12);
}

TEST(BoxCount, SegmentHasDimensionOne) {
  GalerkinSolver s{SolverConfig{}};
  auto nl = Nonlinearity::power_law(1.0, 4.0);
  auto eq = s.find_equilibria(nl, 10.0, 3, {1.0, std::sqrt(10.0)});
  ASSERT_GE(eq.equilibria.size(), 3u);
  const Eigen::VectorXd a = eq.equilibria[1].coeffs, b = eq.equilibria[2].coeffs;
  Rng rng(1);
  Eigen::MatrixXd pts(a.size(), 2000);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) pts.col(i) = a + rng.uniform() * (b - a);
  auto rep = box_counting_dimension(pts);
  EXPECT_NEAR(rep.slope, 1.0, 0.15);
  EXPECT_GT(rep.r_squared, 0.9);
  for (std::size_t k = 1; k < rep.counts.size(); ++k) {
    EXPECT_LT(rep.eps_grid[k], rep.eps_grid[k - 1]);
    EXPECT_GE(rep.counts[k], rep.counts[k - 1]);
  }
}

TEST(BoxCount, SquareHasDimensionTwo) {
  Rng rng(2);
  Eigen::MatrixXd pts(3, 20000);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) pts.col(i) << rng.uniform(), rng.uniform(), 0.0;
  auto rep = box_counting_dimension(pts);
  EXPECT_NEAR(rep.slope, 2.0, 0.3);
}

TEST(BoxCount, PermutationAndDuplicateInvariant) {
  Rng rng(3);
  Eigen::MatrixXd pts(2, 600);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    double t = rng.uniform(0, 2 * kPi);
    pts.col(i) << std::cos(t), std::sin(3 * t);
  }
  auto base = box_counting_dimension(pts);

  std::vector<Eigen::Index> perm(600);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(9));
  Eigen::MatrixXd shuffled(2, 600);
  for (int i = 0; i < 600; ++i) shuffled.col(i) = pts.col(perm[i]);
  auto rep = box_counting_dimension(shuffled);
  EXPECT_EQ(rep.slope, base.slope);
  EXPECT_EQ(rep.counts, base.counts);

  Eigen::MatrixXd dup(2, 900);
  dup << pts, pts.leftCols(300);
  auto rep2 = box_counting_dimension(dup);
  EXPECT_EQ(rep2.slope, base.slope);
  EXPECT_EQ(rep2.counts, base.counts);
}

TEST(BoxCount, GreedyBracketsMinimalCover) {
  Rng rng(4);
  std::vector<double> x(500);
  for (double& v : x) v = rng.uniform(0, 10);
  Eigen::MatrixXd pts(1, 500);
  for (int i = 0; i < 500; ++i) pts(0, i) = x[i];
  auto fp = farthest_point_order(pts);
  for (std::size_t k = 1; k < fp.radius.size(); ++k) EXPECT_LE(fp.radius[k], fp.radius[k - 1]);
  for (double eps : {0.02, 0.05, 0.1, 0.3, 1.0, 3.0}) {
    auto greedy = fp.count(eps);
    EXPECT_LE(min_cover_1d(x, eps), greedy) << eps;
    EXPECT_LE(greedy, min_cover_1d(x, eps / 2)) << eps;
  }
}

TEST(BoxCount, Preconditions) {
  EXPECT_THROW(box_counting_dimension(Eigen::MatrixXd::Zero(2, 50)), ConfigError);
  Eigen::MatrixXd two(1, 200);
  for (int i = 0; i < 200; ++i) two(0, i) = i % 2;
  EXPECT_THROW(box_counting_dimension(two), ComputationError);
}

TEST(Report, BelowThresholdTrivial) {
  AttractorConfig cfg = small_cfg();
  cfg.burn_in = 10.0;
  auto rep = full_report(DomainParams::interval(kPi), ReactionParams::canonical(0.5, 1.0, 4.0), SolverConfig{}, cfg,
                         ReportOptions{}, 9, 4);
  EXPECT_TRUE(rep.all_passed());
  ASSERT_TRUE(rep.boxcount.has_value());
  EXPECT_LT(rep.boxcount->slope, 0.1);
}

TEST(Report, InvalidParamsRejectedEarly) {
  EXPECT_THROW(full_report(DomainParams::interval(kPi), ReactionParams{10.0, 1.0, 3.0, 2.0}, SolverConfig{},
                           AttractorConfig{}, ReportOptions{}, 1),
               ConfigError);
}

TEST(Report, BoundsSummaryDesk) {
  auto b = summarize_bounds(DomainParams::interval(kPi), ReactionParams::canonical(10.0, 1.0, 4.0));
  EXPECT_NEAR(b.parabolic, 391.762, 1e-3);
  EXPECT_NEAR(b.l2_radius, 8.8623, 1e-4);
  EXPECT_NEAR(b.linf_bound, std::sqrt(10.0), 1e-14);
  EXPECT_NEAR(first_eigenvalue(DomainParams::interval(kPi)), 1.0, 1e-14);
  EXPECT_NEAR(first_eigenvalue(DomainParams::box({1.0, 1.0})), 2 * kPi * kPi, 1e-12);
}
