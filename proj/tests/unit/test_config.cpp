#include <gtest/gtest.h>

#include <cmath>

#include "lmon/config.hpp"

namespace lmon {
namespace {

TEST(Config, Defaults) {
  const auto c = default_config();
  EXPECT_EQ(c.projection.num_rows, 64);
  EXPECT_EQ(c.projection.num_cols, 1024);
  EXPECT_NEAR(c.obstacle.alpha_road, deg_to_rad(5.0), 1e-12);
  EXPECT_NEAR(c.obstacle.theta_full, deg_to_rad(45.0), 1e-12);
  EXPECT_EQ(c.grid.cell_size, 0.2);
  EXPECT_EQ(c.grid.forward, 40.0);
  EXPECT_EQ(c.grid.backward, 4.0);
  EXPECT_EQ(c.grid.lateral, 12.5);
  EXPECT_EQ(c.min_points, 1);
  EXPECT_EQ(c.zone.forward_extent, 36.0);
  EXPECT_EQ(c.zone.lateral_extent, 8.5);
  EXPECT_FALSE(c.cluster.eps);
  EXPECT_NEAR(c.cluster.eps_for(c.grid.cell_size), 0.3, 1e-12);
  EXPECT_EQ(c.objectiveness, ScoreSource::kFile);
  EXPECT_EQ(c.semantic, ScoreSource::kFile);
  EXPECT_EQ(c.fusion.cases().size(), FusionTable::from_rule(FusionRule{}).cases().size());
  EXPECT_NO_THROW(c.validate());
  EXPECT_NO_THROW(parse_config("{}"));
}

TEST(Config, UnknownKeysAreRejected) {
  EXPECT_THROW(parse_config(R"({"gird": {}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"grid": {"cellsize": 0.2}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"providers": {"semantic_weights": {"centre": 0.5}}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"fusion": {"rules": [{"min_po": 0.5, "min_px": 0.1}]}})"), ConfigError);
  EXPECT_THROW(default_config({"obstacle.alpha=3"}), ConfigError);
}

TEST(Config, WrongTypesAndBadValues) {
  EXPECT_THROW(parse_config(R"({"grid": {"cell_size": "big"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"grid": {"cell_size": -0.2}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"providers": {"objectiveness": "magic"}})"), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config("{oops"), ConfigError);
  EXPECT_THROW(parse_config(R"({"zone": {"forward_extent": 45}})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/lmon.json"), IoError);
}

TEST(Config, Overrides) {
  const auto c = default_config({"obstacle.alpha_road_deg=3", "grid.cell_size=0.1", "providers.semantic=oracle",
                                 "monitor.drop_unconfirmed=false"});
  EXPECT_NEAR(c.obstacle.alpha_road, deg_to_rad(3.0), 1e-12);
  EXPECT_EQ(c.grid.cell_size, 0.1);
  EXPECT_NEAR(c.cluster.eps_for(c.grid.cell_size), 0.15, 1e-12);
  EXPECT_EQ(c.semantic, ScoreSource::kOracle);
  EXPECT_FALSE(c.monitor.drop_unconfirmed);
  const auto d = parse_config(R"({"grid": {"cell_size": 0.4}})", {"grid.cell_size=0.25"});
  EXPECT_EQ(d.grid.cell_size, 0.25);
  EXPECT_THROW(default_config({"no_equals_sign"}), ConfigError);
}

TEST(Config, ExplicitEpsOverridesDefault) {
  const auto c = parse_config(R"({"cluster": {"eps": 0.5, "min_pts": 2}})");
  EXPECT_EQ(c.cluster.eps, 0.5);
  EXPECT_EQ(c.cluster.min_pts, 2);
}

TEST(Config, FusionRulesTable) {
  const auto c = default_config({R"(fusion.rules=[{"min_po":0.3},{"min_pn":0.8,"min_ps":null}])"});
  ASSERT_EQ(c.fusion.cases().size(), 2u);
  EXPECT_TRUE(c.fusion.keep(0.31, 0, 0));
  EXPECT_FALSE(c.fusion.keep(0.3, 0, 0));
  EXPECT_TRUE(c.fusion.keep(0.0, 0.81, 0.0));
  EXPECT_THROW(parse_config(R"({"fusion": {"rules": [{"min_po": 0.5}], "t_o_high": 0.9}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"fusion": {"rules": []}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"fusion": {"rules": [{"min_po": 1.5}]}})"), ConfigError);
  const auto t = parse_config(R"({"fusion": {"t_o_high": 0.8}})");
  EXPECT_TRUE(t.fusion.keep(0.85, 0, 0));
  EXPECT_FALSE(default_config().fusion.keep(0.85, 0, 0));
}

TEST(Config, JsonRoundTrip) {
  const auto c = default_config({"obstacle.alpha_road_deg=4.5", "grid.cell_size=0.25", "cluster.min_pts=3",
                                 R"(zone.road_mask=[[[0,-5],[30,-5],[30,5],[0,5]]])", "providers.objectiveness=zero",
                                 R"(fusion.rules=[{"min_po":0.7,"min_ps":0.2}])", "eval.tau_list=[0.4]"});
  const auto d = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(d), config_to_json(c));
  EXPECT_NEAR(d.obstacle.alpha_road, c.obstacle.alpha_road, 1e-12);
  EXPECT_EQ(d.grid.cell_size, 0.25);
  EXPECT_EQ(d.cluster.min_pts, 3);
  EXPECT_EQ(d.cluster.eps, c.cluster.eps);
  EXPECT_EQ(d.zone.road_mask.size(), 1u);
  EXPECT_EQ(d.objectiveness, ScoreSource::kZero);
  EXPECT_EQ(d.eval.tau_list, std::vector<double>{0.4});
  EXPECT_TRUE(d.fusion.keep(0.71, 0, 0.21));
  EXPECT_FALSE(d.fusion.keep(0.71, 0, 0.2));
  const auto e = parse_config(config_to_json(default_config()));
  EXPECT_EQ(config_to_json(e), config_to_json(default_config()));
}

TEST(Config, ScoreSourceNames) {
  for (const auto s : {ScoreSource::kFile, ScoreSource::kOracle, ScoreSource::kZero, ScoreSource::kOne})
    EXPECT_EQ(score_source_from(to_string(s)), s);
  EXPECT_THROW(score_source_from("random"), ConfigError);
}

}  // namespace
}  // namespace lmon
