#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "helpers.hpp"
#include "lmon/geometry.hpp"
#include "lmon/occupancy.hpp"
#include "lmon/pipeline.hpp"
#include "lmon/scene_synth.hpp"

namespace lmon {
namespace {

using test::box_at;

TEST(Raycast, FlatGroundStaysWithinNoiseBound) {
  for (double sigma : {0.0, 0.01, 0.02}) {
    LidarConfig cfg;
    cfg.range_noise_sigma = sigma;
    const auto f = raycast(Scene{}, cfg, 1);
    ASSERT_GT(f.cloud.size(), 30000u);
    for (std::size_t i = 0; i < f.cloud.size(); ++i) {
      ASSERT_EQ(f.surfaces[i].kind, SurfaceKind::kGround);
      ASSERT_LE(std::abs(f.cloud.points[i].z), 3.0 * sigma + 1e-9) << "sigma " << sigma;
    }
  }
}

TEST(Raycast, TwoMetreBoxAtTenMetresMeetsBeamCountBound) {
  Scene scene;
  scene.obstacles.push_back(box_at(10.25, 0.0, 1.0, 0.5, 1.0, 2.0, 0.0, "box"));
  const LidarConfig cfg;
  const auto f = raycast(scene, cfg, 3);
  // Front face at x = 10 spans these elevation and azimuth intervals.
  const double h = cfg.mount_height;
  const double el_span = std::atan2(2.0 - h, 10.0) - std::atan2(-h, 10.0);
  const double az_span = 2.0 * std::atan2(0.5, 10.0);
  const double el_step = (cfg.vertical_max - cfg.vertical_min) / cfg.num_layers;
  const double az_step = 2.0 * std::numbers::pi / cfg.horizontal_resolution;
  const auto bound = static_cast<std::size_t>(std::floor(el_span / el_step) * std::floor(az_span / az_step));
  EXPECT_GT(f.visibility[0], 2u);
  EXPECT_GE(f.visibility[0], bound);
  EXPECT_GE(bound, 200u);
}

TEST(Raycast, BoxBehindWiderBoxIsInvisible) {
  Scene scene;
  scene.obstacles.push_back(box_at(10.0, 0.0, 1.5, 2.0, 4.0, 3.0, 0.0, "wall"));
  scene.obstacles.push_back(box_at(20.0, 0.0, 0.6, 1.0, 1.0, 1.2, 0.0, "hidden"));
  const auto f = raycast(scene, LidarConfig{}, 4);
  EXPECT_GT(f.visibility[0], 100u);
  EXPECT_EQ(f.visibility[1], 0u);
  ASSERT_EQ(f.annotations.size(), 2u);
  EXPECT_EQ(f.annotations.detections[1].box.object_id, "hidden");
}

TEST(Raycast, DeterministicPerSeed) {
  Scene scene;
  scene.obstacles.push_back(box_at(12, 2, 0.8, 4.5, 1.9, 1.6, 0.4, "car"));
  scene.spray = SprayCluster{{20, 0, 0.5}, 0.8, 60};
  const auto a = raycast(scene, LidarConfig{}, 9);
  const auto b = raycast(scene, LidarConfig{}, 9);
  const auto c = raycast(scene, LidarConfig{}, 10);
  EXPECT_EQ(a.cloud.points, b.cloud.points);
  EXPECT_EQ(a.visibility, b.visibility);
  EXPECT_NE(a.cloud.points, c.cloud.points);
}

TEST(Raycast, NoiseFreeReturnsLieOnSurfaces) {
  Scene scene;
  scene.ground_slope = deg_to_rad(3.0);
  scene.obstacles.push_back(box_at(12.0, 2.0, 0.63 + 0.8, 4.5, 1.9, 1.6, 0.0, "car"));
  scene.bumps.push_back(box_at(20.0, -6.0, 1.05, 30.0, 3.0, 0.15, 0.0, "curb"));
  scene.overhangs.push_back(box_at(15.0, 0.0, 5.0, 4.0, 10.0, 1.0, 0.0, "branch"));
  LidarConfig cfg;
  cfg.range_noise_sigma = 0.0;
  const auto f = raycast(scene, cfg, 5);
  std::map<SurfaceKind, std::size_t> seen;
  for (std::size_t i = 0; i < f.cloud.size(); ++i) {
    const auto& p = f.cloud.points[i];
    const auto hit = f.surfaces[i];
    ++seen[hit.kind];
    if (hit.kind == SurfaceKind::kGround) {
      ASSERT_NEAR(p.z, scene.ground_height(p.x), 1e-9);
      continue;
    }
    const auto& list = hit.kind == SurfaceKind::kObstacle ? scene.obstacles : hit.kind == SurfaceKind::kBump ? scene.bumps : scene.overhangs;
    const auto& box = list[static_cast<std::size_t>(hit.index)];
    ASSERT_TRUE(point_in_box(p, box, 1e-9));
    ASSERT_FALSE(point_in_box(p, box, -1e-9));
  }
  EXPECT_GT(seen[SurfaceKind::kObstacle], 100u);
  EXPECT_GT(seen[SurfaceKind::kBump], 100u);
  EXPECT_GT(seen[SurfaceKind::kOverhang], 100u);
}

TEST(Raycast, SprayHonoursPointBudgetAndGridKnob) {
  Scene scene;
  scene.spray = SprayCluster{{15.0, 0.0, 0.6}, 0.8, 60};
  const auto f = raycast(scene, LidarConfig{}, 6);
  PointCloud spray;
  for (std::size_t i = 0; i < f.cloud.size(); ++i) {
    if (f.surfaces[i].kind != SurfaceKind::kSpray) continue;
    spray.points.push_back(f.cloud.points[i]);
    ASSERT_LE((f.cloud.points[i] - scene.spray->center).norm(), scene.spray->radius + 0.1);
  }
  EXPECT_GT(spray.size(), 30u);
  EXPECT_LT(spray.size(), 90u);
  const auto loose = build_grid(spray, GridSpec{}, 1);
  const auto strict = build_grid(spray, GridSpec{}, 3);
  EXPECT_LT(strict.occupied_cells().size(), loose.occupied_cells().size());
}

TEST(Scene, Validation) {
  Scene steep;
  steep.ground_slope = deg_to_rad(11.0);
  EXPECT_THROW(steep.validate(), ConfigError);
  Scene sunk;
  sunk.obstacles.push_back(box_at(10, 0, 0.2, 1, 1, 1, 0, "sunk"));
  EXPECT_THROW(sunk.validate(), ConfigError);
  LidarConfig cfg;
  cfg.range_noise_sigma = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(raycast(Scene{}, cfg, 1), ConfigError);
}

TEST(ScenarioSuite, NamesAndExpectations) {
  const auto suite = scenario_suite(0);
  std::map<std::string, Expectation> got;
  for (const auto& c : suite) got[c.name] = c.expectation;
  const std::map<std::string, Expectation> want{
      {"flat_road", Expectation::kTraversable},   {"slope_4deg", Expectation::kTraversable},
      {"curb", Expectation::kTraversable},        {"cars", Expectation::kDetectable},
      {"pedestrians", Expectation::kDetectable},  {"overhang_high", Expectation::kTraversable},
      {"overhang_low", Expectation::kExpectedFp}, {"occluded_pair", Expectation::kDetectable},
      {"spray", Expectation::kExpectedFp}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(suite.size(), want.size());
  for (const auto& c : suite) EXPECT_NO_THROW(c.scene.validate());
}

TEST(ScenarioSuite, FramesCycleNoiseAndKeepVisibleObjectsDetectable) {
  const auto frames = generate_suite_frames(36, 5);
  ASSERT_EQ(frames.size(), 36u);
  const double sigmas[] = {0.01, 0.02, 0.0, 0.015};
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& f = frames[k];
    EXPECT_EQ(f.lidar.range_noise_sigma, sigmas[k / 9]);
    EXPECT_EQ(f.frame.cloud.frame_id, f.scenario.name + "_" + std::to_string(k));
    for (std::size_t i = 0; i < f.frame.visibility.size(); ++i) {
      const auto v = f.frame.visibility[i];
      const auto& id = f.frame.annotations.detections[i].box.object_id;
      if (id == "hidden_car") {
        EXPECT_EQ(v, 0u) << f.frame.cloud.frame_id;
      } else {
        EXPECT_GE(v, 3u) << f.frame.cloud.frame_id << " " << id;
      }
    }
  }
  const auto again = generate_suite_frames(36, 5);
  for (std::size_t k = 0; k < frames.size(); ++k) EXPECT_EQ(frames[k].frame.cloud.points, again[k].frame.cloud.points);
}

FrameResult run_case(const std::string& name, std::uint64_t seed, const PipelineConfig& config = default_config()) {
  for (const auto& c : scenario_suite(seed)) {
    if (c.name != name) continue;
    const auto f = raycast(c.scene, LidarConfig{}, seed);
    const ConstantProvider zero(0.0);
    return process_frame(f.cloud, zero, zero, config);
  }
  throw std::runtime_error("no scenario " + name);
}

TEST(ScenarioSuite, HighOverhangIsTraversable) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto c = scenario_suite(seed)[5];
    ASSERT_EQ(c.name, "overhang_high");
    const auto f = raycast(c.scene, LidarConfig{}, seed);
    const auto images = project(f.cloud, LidarConfig{}.projection());
    const auto scores = obstacle_score(images, ObstacleParams{});
    std::size_t overhang = 0;
    for (int r = 0; r < images.rows(); ++r) {
      for (int col = 0; col < images.cols(); ++col) {
        if (images.empty(r, col) || f.surfaces[images.source(r, col)].kind != SurfaceKind::kOverhang) continue;
        ++overhang;
        ASSERT_EQ(scores.p_o(r, col), 0.0);
      }
    }
    EXPECT_GT(overhang, 100u);
    EXPECT_TRUE(run_case("overhang_high", seed).grid.occupied_cells().empty());
  }
}

TEST(ScenarioSuite, LowOverhangIsAnObstacle) {
  for (std::uint64_t seed : {1u, 2u, 3u}) EXPECT_FALSE(run_case("overhang_low", seed).grid.occupied_cells().empty());
}

TEST(ScenarioSuite, EmptySlopeHasNoOccupiedCells) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    EXPECT_TRUE(run_case("slope_4deg", seed).grid.occupied_cells().empty());
    EXPECT_TRUE(run_case("flat_road", seed).grid.occupied_cells().empty());
  }
  auto config = default_config({"obstacle.alpha_road_deg=3"});
  EXPECT_FALSE(run_case("slope_4deg", 1, config).grid.occupied_cells().empty());
}

TEST(InjectFaults, DeterministicAndClearOfTruth) {
  const auto frames = generate_suite_frames(9, 11);
  const SafetyZone zone;
  FaultInjection faults;
  faults.spurious_rate = 0.5;
  for (const auto& sf : frames) {
    const auto a = inject_faults(sf.frame, zone, faults, sf.seed);
    const auto b = inject_faults(sf.frame, zone, faults, sf.seed);
    ASSERT_EQ(a.size(), b.size());
    for (const auto& d : a.detections) {
      EXPECT_GE(d.confidence, 0.3);
      EXPECT_LE(d.confidence, 1.0);
      if (d.box.object_id.rfind("spurious_", 0) != 0) continue;
      EXPECT_TRUE(in_zone(d.box.center, zone));
      auto grown = d.box;
      grown.size.length += 2 * faults.clearance - 1e-6;
      grown.size.width += 2 * faults.clearance - 1e-6;
      for (const auto& t : sf.frame.annotations.detections) EXPECT_FALSE(footprints_intersect(grown, t.box));
    }
  }
}

TEST(InjectFaults, NoFaultsReportsVisibleTruth) {
  const auto frames = generate_suite_frames(9, 12);
  FaultInjection none;
  none.drop_rate = 0.0;
  none.spurious_rate = 0.0;
  for (const auto& sf : frames) {
    const auto list = inject_faults(sf.frame, SafetyZone{}, none, sf.seed);
    std::set<std::string> got;
    for (const auto& d : list.detections) got.insert(d.box.object_id);
    std::set<std::string> want;
    for (std::size_t i = 0; i < sf.frame.visibility.size(); ++i) {
      if (sf.frame.visibility[i] >= none.min_returns) want.insert(sf.frame.annotations.detections[i].box.object_id);
    }
    EXPECT_EQ(got, want) << sf.frame.cloud.frame_id;
  }
  FaultInjection all;
  all.drop_rate = 1.0;
  all.spurious_rate = 0.0;
  for (const auto& sf : frames) EXPECT_EQ(inject_faults(sf.frame, SafetyZone{}, all, sf.seed).size(), 0u);
}

}  // namespace
}  // namespace lmon
