#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "kedim/errors.hpp"
#include "kedim/config.hpp"
#include "kedim/report_io.hpp"

using namespace kedim;
using nlohmann::json;

TEST(Config, DefaultsAreTheDeskRun) {
  RunConfig c = parse_config(json::object());
  EXPECT_EQ(c.domain.dimension, 1);
  EXPECT_NEAR(c.domain.volume, std::numbers::pi, 1e-15);
  EXPECT_EQ(c.reaction.lambda, 10.0);
  EXPECT_EQ(c.reaction.gamma, 3.0);
  EXPECT_EQ(c.solver.modes, 64u);
  EXPECT_EQ(c.attractor.ensemble_size, 64u);
  EXPECT_EQ(c.attractor.burn_in, 10.0);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(parse_config(json{{"reactoin", json::object()}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"reaction", {{"lamda", 3.0}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"solver", {{"integrator", "rk4"}}}}), ConfigError);
}

TEST(Config, WrongTypeRejected) {
  EXPECT_THROW(parse_config(json{{"reaction", {{"lambda", "ten"}}}}), ConfigError);
}

TEST(Config, GammaDefaultsToCanonical) {
  RunConfig c = parse_config(json{{"reaction", {{"beta", 2.0}, {"p", 3.0}}}});
  EXPECT_DOUBLE_EQ(c.reaction.gamma, 4.0);
  RunConfig d = parse_config(json{{"reaction", {{"beta", 2.0}, {"p", 3.0}, {"gamma", 1.0}}}});
  EXPECT_DOUBLE_EQ(d.reaction.gamma, 1.0);
}

TEST(Config, DomainForms) {
  RunConfig a = parse_config(json{{"domain", {{"side_lengths", {1.0, 2.0}}}}});
  EXPECT_EQ(a.domain.dimension, 2);
  EXPECT_DOUBLE_EQ(a.domain.volume, 2.0);
  RunConfig b = parse_config(json{{"domain", {{"N", 3}, {"volume", 5.0}}}});
  EXPECT_FALSE(b.domain.side_lengths.has_value());
  EXPECT_THROW(parse_config(json{{"domain", {{"N", 3}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"domain", {{"side_lengths", {1.0, 2.0}}, {"N", 3}}}}), ConfigError);
}

TEST(Config, ValidationCatchesBadValues) {
  EXPECT_THROW(parse_config(json{{"reaction", {{"p", 2.0}}}}).validate(), ConfigError);
  EXPECT_THROW(parse_config(json{{"entropy", {{"eps", {0.5, 0.0}}}}}).validate(), ConfigError);
  EXPECT_THROW(parse_config(json{{"seeds", json::array()}}).validate(), ConfigError);
}

TEST(Config, EchoRoundTrips) {
  RunConfig c = parse_config(json{{"reaction", {{"lambda", 7.0}}}, {"seeds", {5, 6}}, {"attractor", {{"seeding", "absorbing_ball"}}}});
  json echo = to_json(c);
  RunConfig d = parse_config(echo);
  EXPECT_EQ(to_json(d), echo);
  EXPECT_EQ(d.seed(), 5u);
  EXPECT_EQ(d.attractor.seeding, AttractorConfig::Seeding::AbsorbingBall);
}

TEST(Config, LoadFileAllowsComments) {
  auto dir = std::filesystem::temp_directory_path() / "kedim_cfg_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "c.json").string();
  std::ofstream(path) << "{\n  // desk run\n  \"reaction\": {\"lambda\": 4}\n}\n";
  EXPECT_EQ(load_config(path).reaction.lambda, 4.0);
  EXPECT_THROW(load_config((dir / "missing.json").string()), ConfigError);
}

TEST(CoverPlanJson, RoundTrip) {
  auto e = Ellipsoid::power_law(1.0, 1.0);
  auto plan = build_cover(e, 0.6);
  auto back = cover_plan_from_json(json::parse(dump(cover_plan_to_json(plan))));
  EXPECT_EQ(back.d, plan.d);
  EXPECT_EQ(back.radius, plan.radius);
  EXPECT_EQ(back.target_eps, plan.target_eps);
  EXPECT_EQ(back.centers, plan.centers);
  EXPECT_EQ(back.strategy, plan.strategy);
  EXPECT_TRUE(verify_cover(back, e, 5000, 1).passed);
}

TEST(CoverPlanJson, OriginPlanRoundTrip) {
  auto plan = build_cover(Ellipsoid::power_law(1.0, 2.0), 1.0);
  auto back = cover_plan_from_json(cover_plan_to_json(plan));
  EXPECT_EQ(back.d, 0u);
  EXPECT_EQ(back.count(), 1u);
}

TEST(CoverPlanJson, MalformedRejected) {
  EXPECT_THROW(cover_plan_from_json(json{{"d", 1}}), ConfigError);
  EXPECT_THROW(cover_plan_from_json(json{{"d", 2}, {"radius", 1.0}, {"target_eps", 0.5}, {"centers", {{1.0}}}}),
               ConfigError);
}

TEST(Csv, NumbersRoundTripExactly) {
  for (double v : {0.1, 1.0 / 3.0, 391.76207189, 1e-300, -2.5}) EXPECT_EQ(std::stod(num(v)), v);
}

TEST(Csv, SpectraColumns) {
  auto dom = DomainParams::interval(std::numbers::pi);
  std::string csv = spectra_csv(box_eigenvalues(dom, 3), dom);
  std::istringstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "j,lambda_j,li_yau_lower");
  EXPECT_EQ(first.substr(0, 2), "1,");
}

TEST(Csv, BoxcountSvgIsWellFormed) {
  BoxCountReport rep;
  rep.eps_grid = {1.0, 0.5, 0.25, 0.125};
  rep.counts = {2, 4, 8, 16};
  rep.fit_range = {1, 3};
  rep.slope = 1.0;
  rep.r_squared = 1.0;
  std::string svg = boxcount_svg(rep, 391.8);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(boxcount_csv(rep).substr(0, boxcount_csv(rep).find('\n')), "eps,log2_inv_eps,count,log2_count,in_fit");
}
